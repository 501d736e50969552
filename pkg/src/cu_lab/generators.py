"""Seeded random instances for property suites and the CLI.

Every generator takes a :class:`random.Random`; suites derive one stream per
instance from ``(seed, suite name, instance id)`` so results do not depend on
execution order or parallelism.
"""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from ._rational import INF
from .measures import Density, Measure1D
from .openset import Interval, OpenSet1D
from .rank_lattice import (
    RankFunction,
    add,
    build_representative,
    pointwise_min,
    rank_of_cutdown,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def instance_rng(seed: int, suite: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{index}")


def grid_points(rng: random.Random, count: int, grid: int = 12) -> list[Fraction]:
    """Distinct sorted interior points, mostly on the 1/grid lattice so that
    independently drawn functions share breakpoints."""
    pts: set[Fraction] = set()
    tries = 0
    while len(pts) < count and tries < 8 * count + 8:
        tries += 1
        if rng.random() < 0.8:
            p = Fraction(rng.randint(1, grid - 1), grid)
        else:
            q = rng.randint(2, 30)
            p = Fraction(rng.randint(1, q - 1), q)
        pts.add(p)
    return sorted(pts)


def random_rank_function(rng: random.Random, max_breakpoints: int = 8, max_value: int = 6,
                         p_inf: float = 0.1, bounded: bool = False) -> RankFunction:
    interior = grid_points(rng, rng.randint(0, max_breakpoints - 2))
    bps = [ZERO, *interior, ONE]

    def value():
        if not bounded and rng.random() < p_inf:
            return INF
        return rng.randint(0, max_value)

    iv = [value() for _ in range(len(bps) - 1)]
    pv = []
    for i in range(len(bps)):
        cap = min(iv[j] for j in (i - 1, i) if 0 <= j < len(iv))
        if rng.random() < 0.5:
            pv.append(cap)
        elif cap == INF:
            pv.append(INF if rng.random() < 0.5 else rng.randint(0, max_value))
        else:
            pv.append(rng.randint(0, cap))
    return RankFunction(tuple(bps), tuple(iv), tuple(pv))


def cap_at(f: RankFunction, n: int) -> RankFunction:
    return pointwise_min([f, RankFunction.const(n)])


def random_pair(rng: random.Random, bounded_g: bool = False, **kw):
    """A pair (f, g) drawn from a mix of strategies, so that both verdicts of
    ``f << g`` occur with useful frequency."""
    g = random_rank_function(rng, bounded=bounded_g, **kw)
    mode = rng.randrange(5)
    if mode == 0:
        f = random_rank_function(rng, **kw)
    elif mode == 1:
        f = pointwise_min([g, random_rank_function(rng, **kw)])
    elif mode == 2:
        top = g.max_value if g.is_bounded() else kw.get("max_value", 6)
        rep = build_representative(cap_at(g, top))
        f = rank_of_cutdown(rep, Fraction(rng.randint(1, 7), 8))
        if rng.random() < 0.5:
            f = pointwise_min([f, random_rank_function(rng, **kw)])
    elif mode == 3:
        f = random_rank_function(rng, bounded=True, **kw)
        g = add(f, random_rank_function(rng, bounded=bounded_g, **kw))
    else:
        f = g
    return f, g


def random_open_set(rng: random.Random, max_pieces: int = 3) -> OpenSet1D:
    """A nonempty open set; may be all of [0, 1]."""
    pts = [ZERO, *grid_points(rng, 2 * rng.randint(1, max_pieces), grid=24), ONE]
    ivs = []
    i = rng.randrange(2)
    while i + 1 < len(pts):
        lo, hi = pts[i], pts[i + 1]
        ivs.append(Interval(lo, hi, lo == 0 and rng.random() < 0.5, hi == 1 and rng.random() < 0.5))
        i += 2
    if not ivs:
        ivs = [Interval(pts[0], pts[1])]
    return OpenSet1D(tuple(ivs))


def random_proper_open_set(rng: random.Random) -> OpenSet1D:
    while True:
        s = random_open_set(rng)
        if not s.is_full():
            return s


def _weights(rng: random.Random, k: int, lo: int = 1, hi: int = 9) -> list[Fraction]:
    ws = [rng.randint(lo, hi) for _ in range(k)]
    if not any(ws):
        ws[rng.randrange(k)] = 1
    total = sum(ws)
    return [Fraction(w, total) for w in ws]


def random_measure(rng: random.Random, faithful: bool = True, max_atoms: int = 3,
                   max_cells: int = 6) -> Measure1D:
    """Atoms plus a piecewise-constant density; the density is positive
    everywhere when ``faithful``."""
    n_atoms = rng.randint(0, max_atoms)
    bps = [ZERO, *grid_points(rng, rng.randint(0, max_cells - 1)), ONE]
    raw = [rng.randint(1 if faithful else 0, 6) for _ in range(len(bps) - 1)]
    if not faithful and all(raw):
        raw[rng.randrange(len(raw))] = 0
    dens_mass = sum(Fraction(v) * (b - a) for v, a, b in zip(raw, bps, bps[1:]))
    if dens_mass == 0:
        raw[0], dens_mass = 1, bps[1] - bps[0]
    share = Fraction(rng.randint(3, 10), 10) if n_atoms else ONE
    scale = share / dens_mass
    atoms = []
    if n_atoms:
        for x, w in zip(grid_points(rng, n_atoms, grid=24) or [Fraction(1, 2)],
                        _weights(rng, n_atoms)):
            atoms.append((x, (1 - share) * w))
        if sum(m for _, m in atoms) != 1 - share:
            # grid_points may return fewer points than asked for
            total = sum(m for _, m in atoms)
            atoms = [(x, m * (1 - share) / total) for x, m in atoms]
    return Measure1D(tuple(atoms), Density(tuple(bps), tuple(Fraction(v) * scale for v in raw)))


def random_atomic(rng: random.Random, max_atoms: int = 5, grid: int = 20) -> Measure1D:
    k = rng.randint(1, max_atoms)
    xs = [Fraction(rng.randint(0, grid), grid) for _ in range(k)]
    return Measure1D(tuple(zip(xs, _weights(rng, k))))


def random_qtpoint_weights(rng: random.Random, k: int) -> list[Fraction]:
    if rng.random() < 0.2:
        e = [ZERO] * k
        e[rng.randrange(k)] = ONE
        return e
    return _weights(rng, k, lo=0, hi=6) if k > 1 else [ONE]


def random_symmetric(rng: random.Random, n: int) -> np.ndarray:
    """Symmetric matrix with spectrum inside [0, 1] (eigenvalues drawn, then rotated)."""
    nprng = np.random.default_rng(rng.getrandbits(63))
    lam = nprng.uniform(0.0, 1.0, size=n)
    if n > 1 and rng.random() < 0.3:
        lam[: n // 2] = lam[0]
    q, _ = np.linalg.qr(nprng.normal(size=(n, n)))
    a = q @ np.diag(lam) @ q.T
    return (a + a.T) / 2


def small_rank_functions(values=(0, 1, INF)) -> list[RankFunction]:
    """Every rank function with breakpoints among {0, 1/2, 1} and values in ``values``."""
    import itertools

    half = Fraction(1, 2)
    out = {}
    for a, b in itertools.product(values, repeat=2):
        for p0 in (v for v in values if v <= a):
            for pm in (v for v in values if v <= min(a, b)):
                for p1 in (v for v in values if v <= b):
                    f = RankFunction((ZERO, half, ONE), (a, b), (p0, pm, p1))
                    out[f] = f
    return sorted(out.values(), key=lambda f: str(f))
