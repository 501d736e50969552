"""Exact Borel probability measures on [0, 1] and the Levy-Prokhorov distance.

Measures here are finite atomic parts plus a piecewise-constant density, all
with rational data, so masses of open sets, integrals of rank functions and
of piecewise-linear test functions are exact rationals.

The distance between atomic measures is decided through the coupling form:
``d_LP(mu, nu) <= eps`` iff some coupling puts mass at most ``eps`` outside the
band ``|x - y| <= eps``, which is a bipartite max-flow question.
:func:`lp_bruteforce` computes the same number from the set-enlargement
definition by enumerating atom subsets.
"""
from __future__ import annotations

import functools
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from ._rational import INF, as_fraction, fmt_rational
from .errors import NotAtomic, TooManyAtoms
from .flow import FlowNetwork
from .piecewise import PiecewiseLinear
from .rank_lattice import OpenSet1D, RankFunction, level_set

ZERO = Fraction(0)
ONE = Fraction(1)

BRUTEFORCE_MAX_ATOMS = 12


@dataclass(frozen=True)
class Density:
    """Piecewise-constant density: ``values[i]`` on ``(breakpoints[i], breakpoints[i+1])``."""

    breakpoints: tuple[Fraction, ...] = (ZERO, ONE)
    values: tuple[Fraction, ...] = (ZERO,)

    def __post_init__(self):
        bps = [as_fraction(t) for t in self.breakpoints]
        vals = [as_fraction(v) for v in self.values]
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1 or len(vals) != len(bps) - 1:
            raise ValueError("density partition must span [0, 1] with one value per cell")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("density breakpoints must be strictly increasing")
        if any(v < 0 for v in vals):
            raise ValueError("densities are nonnegative")
        i = 1
        while i < len(bps) - 1:
            if vals[i - 1] == vals[i]:
                del bps[i], vals[i]
            else:
                i += 1
        object.__setattr__(self, "breakpoints", tuple(bps))
        object.__setattr__(self, "values", tuple(vals))

    def cells(self):
        return zip(self.breakpoints, self.breakpoints[1:], self.values)

    def __call__(self, t) -> Fraction:
        k = min(bisect_right(self.breakpoints, as_fraction(t)) - 1, len(self.values) - 1)
        return self.values[k]

    def mass(self, lo=ZERO, hi=ONE) -> Fraction:
        """Integral of the density over [lo, hi]."""
        lo, hi = as_fraction(lo), as_fraction(hi)
        total = ZERO
        for a, b, v in self.cells():
            left, right = max(a, lo), min(b, hi)
            if right > left:
                total += v * (right - left)
        return total

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


@dataclass(frozen=True)
class Measure1D:
    """``sum_j m_j delta_{x_j} + density dt`` on [0, 1]."""

    atoms: tuple[tuple[Fraction, Fraction], ...] = ()
    density: Density = field(default_factory=Density)

    def __post_init__(self):
        merged: dict[Fraction, Fraction] = {}
        for x, m in self.atoms:
            x, m = as_fraction(x), as_fraction(m)
            if not ZERO <= x <= ONE:
                raise ValueError(f"atom location {x} is outside [0, 1]")
            if m < 0:
                raise ValueError("atom masses are nonnegative")
            merged[x] = merged.get(x, ZERO) + m
        atoms = tuple(sorted((x, m) for x, m in merged.items() if m > 0))
        object.__setattr__(self, "atoms", atoms)

    # constructors -------------------------------------------------------

    @classmethod
    def lebesgue(cls) -> "Measure1D":
        return cls((), Density((ZERO, ONE), (ONE,)))

    @classmethod
    def dirac(cls, x) -> "Measure1D":
        return cls(((as_fraction(x), ONE),))

    @classmethod
    def atomic(cls, atoms: Iterable) -> "Measure1D":
        return cls(tuple(atoms))

    @classmethod
    def from_density(cls, breakpoints, values) -> "Measure1D":
        return cls((), Density(tuple(breakpoints), tuple(values)))

    # basic queries ------------------------------------------------------

    @property
    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.atoms), ZERO) + self.density.mass()

    def is_probability(self) -> bool:
        return self.total_mass == 1

    def is_atomic(self) -> bool:
        return self.density.is_zero()

    def atom_mass_at(self, x) -> Fraction:
        x = as_fraction(x)
        for y, m in self.atoms:
            if y == x:
                return m
        return ZERO

    def interval_mass(self, lo, hi) -> Fraction:
        """Mass of the open interval (lo, hi)."""
        lo, hi = as_fraction(lo), as_fraction(hi)
        return (sum((m for x, m in self.atoms if lo < x < hi), ZERO)
                + self.density.mass(lo, hi))

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        out = {"atoms": [[fmt_rational(x), fmt_rational(m)] for x, m in self.atoms]}
        if not self.density.is_zero():
            out["density"] = {
                "breakpoints": [fmt_rational(t) for t in self.density.breakpoints],
                "values": [fmt_rational(v) for v in self.density.values],
            }
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Measure1D":
        atoms = tuple((x, m) for x, m in data.get("atoms", []))
        dens = data.get("density")
        density = Density(tuple(dens["breakpoints"]), tuple(dens["values"])) if dens else Density()
        return cls(atoms, density)


def mixture(weights: Sequence, measures: Sequence[Measure1D]) -> Measure1D:
    """``sum_i w_i mu_i`` with atoms merged and densities summed on a common partition."""
    if len(weights) != len(measures):
        raise ValueError("one weight per measure")
    ws = [as_fraction(w) for w in weights]
    atoms = [(x, w * m) for w, mu in zip(ws, measures) for x, m in mu.atoms]
    pts = sorted(set().union(*(mu.density.breakpoints for mu in measures)))
    vals = [sum((w * mu.density((a + b) / 2) for w, mu in zip(ws, measures)), ZERO)
            for a, b in zip(pts, pts[1:])]
    return Measure1D(tuple(atoms), Density(tuple(pts), tuple(vals)))


def measure_of(mu: Measure1D, s: OpenSet1D) -> Fraction:
    total = sum((m for x, m in mu.atoms if s.contains(x)), ZERO)
    for iv in s.intervals:
        total += mu.density.mass(iv.lo, iv.hi)
    return total


def integrate_rank(mu: Measure1D, f: RankFunction):
    """``int f dmu`` by the layer-cake formula; ``INF`` if {f = INF} has positive mass."""
    bps = f.breakpoints
    inf_mass = sum((mu.atom_mass_at(t) for t, v in zip(bps, f.point_values) if v == INF), ZERO)
    inf_mass += sum((mu.interval_mass(a, b) for a, b, v in zip(bps, bps[1:], f.interval_values)
                     if v == INF), ZERO)
    if inf_mass > 0:
        return INF
    finite = [v for v in f.point_values + f.interval_values if v != INF]
    top = max(finite) if finite else 0
    return sum((measure_of(mu, level_set(f, i)) for i in range(1, top + 1)), ZERO)


def integrate_pl(mu: Measure1D, phi: PiecewiseLinear) -> Fraction:
    total = sum((m * phi(x) for x, m in mu.atoms), ZERO)
    for a, b, v in mu.density.cells():
        if v:
            total += v * phi.integral(a, b)
    return total


def is_faithful(mu: Measure1D) -> bool:
    return all(v > 0 for v in mu.density.values)


def _conditional_median(dens: Density, lo: Fraction, hi: Fraction, mass: Fraction) -> Fraction:
    target = mass / 2
    acc = ZERO
    for a, b, v in dens.cells():
        left, right = max(a, lo), min(b, hi)
        if right <= left or v == 0:
            continue
        piece = v * (right - left)
        if acc + piece >= target:
            return left + (target - acc) / v
        acc += piece
    raise AssertionError("median search ran past the cell")


@functools.lru_cache(maxsize=512)
def discretize(mu: Measure1D, m: int) -> Measure1D:
    """Purely atomic measure within Levy-Prokhorov distance ``1/m`` of ``mu``.

    The density on each grid cell ``[k/m, (k+1)/m]`` collapses to an atom at
    its conditional median, so every unit of mass moves by at most ``1/m``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if mu.is_atomic():
        return mu
    atoms = list(mu.atoms)
    for k in range(m):
        lo, hi = Fraction(k, m), Fraction(k + 1, m)
        cell_mass = mu.density.mass(lo, hi)
        if cell_mass > 0:
            atoms.append((_conditional_median(mu.density, lo, hi, cell_mass), cell_mass))
    return Measure1D(tuple(atoms))


# ---------------------------------------------------------------------------
# Levy-Prokhorov distance


@dataclass(frozen=True)
class LPInterval:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= as_fraction(x) <= self.hi

    def to_json(self) -> dict:
        return {"lo": fmt_rational(self.lo), "hi": fmt_rational(self.hi),
                "lo_float": float(self.lo), "hi_float": float(self.hi)}


def _require_atomic(*mus: Measure1D) -> None:
    for mu in mus:
        if not mu.is_atomic():
            raise NotAtomic("operation needs purely atomic measures; discretize first")


def band_flow_network(mu: Measure1D, nu: Measure1D, eps) -> Fraction:
    """Band flow by a general max-flow computation (Dinic); reference for :func:`band_flow`."""
    _require_atomic(mu, nu)
    eps = as_fraction(eps)
    xs, ys = mu.atoms, nu.atoms
    n, k = len(xs), len(ys)
    net = FlowNetwork(n + k + 2)
    src, sink = n + k, n + k + 1
    for i, (_, m) in enumerate(xs):
        net.add_edge(src, i, m)
    for j, (_, m) in enumerate(ys):
        net.add_edge(n + j, sink, m)
    lo = 0
    for i, (x, m) in enumerate(xs):
        while lo < k and ys[lo][0] < x - eps:
            lo += 1
        j = lo
        while j < k and ys[j][0] <= x + eps:
            net.add_edge(i, n + j, m)
            j += 1
    return net.max_flow(src, sink)


def band_flow(mu: Measure1D, nu: Measure1D, eps) -> Fraction:
    """Largest mass a coupling of ``mu`` and ``nu`` can keep inside ``|x - y| <= eps``.

    On the line every atom's admissible partners form a window whose two ends
    move right with the atom, so filling each atom (left to right) from the
    leftmost open partner is optimal.
    """
    _require_atomic(mu, nu)
    eps = as_fraction(eps)
    ys = [y for y, _ in nu.atoms]
    rem = [m for _, m in nu.atoms]
    k, j, total = len(ys), 0, ZERO
    for x, m in mu.atoms:
        while j < k and (ys[j] < x - eps or rem[j] == 0):
            j += 1
        jj = j
        while m > 0 and jj < k and ys[jj] <= x + eps:
            take = min(m, rem[jj])
            rem[jj] -= take
            m -= take
            total += take
            if rem[jj] == 0:
                jj += 1
    return total


def lp_feasible(mu: Measure1D, nu: Measure1D, eps) -> bool:
    """Whether ``d_LP(mu, nu) <= eps`` for purely atomic probability measures."""
    eps = as_fraction(eps)
    if eps >= 1:
        _require_atomic(mu, nu)
        return True
    return band_flow(mu, nu, eps) >= 1 - eps


#: above this many atom pairs the candidate scan gives way to plain bisection
EXACT_PAIR_LIMIT = 40_000


def _atomic_distance(mu: Measure1D, nu: Measure1D) -> Fraction:
    cands = sorted({ZERO, ONE} | {abs(x - y) for x, _ in mu.atoms for y, _ in nu.atoms
                                  if abs(x - y) < 1})
    if lp_feasible(mu, nu, ZERO):
        return ZERO
    # feasibility is monotone along the sorted candidates; cands[-1] = 1 is feasible
    bad, good = 0, len(cands) - 1
    while good - bad > 1:
        mid = (bad + good) // 2
        if lp_feasible(mu, nu, cands[mid]):
            good = mid
        else:
            bad = mid
    # on [cands[bad], cands[good]) the band flow is constant
    return min(cands[good], 1 - band_flow(mu, nu, cands[bad]))


def _atomic_enclosure(mu: Measure1D, nu: Measure1D, width: Fraction) -> tuple[Fraction, Fraction]:
    if len(mu.atoms) * len(nu.atoms) <= EXACT_PAIR_LIMIT:
        v = _atomic_distance(mu, nu)
        return v, v
    if lp_feasible(mu, nu, ZERO):
        return ZERO, ZERO
    bad, good = ZERO, ONE
    while good - bad > width:
        mid = (bad + good) / 2
        if lp_feasible(mu, nu, mid):
            good = mid
        else:
            bad = mid
    return bad, good


def lp_distance(mu: Measure1D, nu: Measure1D, tol) -> LPInterval:
    """Enclosure of ``d_LP(mu, nu)`` of width at most ``tol``.

    Measures with a density are first discretized at mesh ``1/m`` with
    ``1/m <= tol/4``; the atomic distance is then exact for small inputs and
    bisected to width ``tol/2`` otherwise.
    """
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = math.ceil(4 / tol)
    err = ZERO
    if not mu.is_atomic():
        mu, err = discretize(mu, m), err + Fraction(1, m)
    if not nu.is_atomic():
        nu, err = discretize(nu, m), err + Fraction(1, m)
    lo, hi = _atomic_enclosure(mu, nu, tol / 2)
    return LPInterval(max(ZERO, lo - err), min(ONE, hi + err))


def _one_sided(p: Measure1D, q: Measure1D) -> Fraction:
    # inf eps with p(A) <= q(A^eps) + eps for every A; the worst A lie in supp p
    worst = ZERO
    pts = [x for x, _ in p.atoms]
    mass = dict(p.atoms)
    for r in range(1, len(pts) + 1):
        for A in combinations(pts, r):
            pa = sum(mass[a] for a in A)
            dist = sorted((min(abs(y - a) for a in A), m) for y, m in q.atoms)
            # for eps just above d, A^eps picks up the q-atoms at distance <= d
            best = pa
            covered = ZERO
            levels = sorted({ZERO} | {d for d, _ in dist})
            idx = 0
            for d in levels:
                while idx < len(dist) and dist[idx][0] <= d:
                    covered += dist[idx][1]
                    idx += 1
                best = min(best, max(d, pa - covered))
            worst = max(worst, best)
    return min(worst, ONE)


def lp_bruteforce(mu: Measure1D, nu: Measure1D) -> Fraction:
    """Exact ``d_LP`` from the set-enlargement definition, by subset enumeration."""
    _require_atomic(mu, nu)
    if len(mu.atoms) + len(nu.atoms) > BRUTEFORCE_MAX_ATOMS:
        raise TooManyAtoms(f"brute force is limited to {BRUTEFORCE_MAX_ATOMS} atoms in total")
    return max(_one_sided(mu, nu), _one_sided(nu, mu))


# ---------------------------------------------------------------------------
# weak convergence


@dataclass
class ProbeTrace:
    probe: PiecewiseLinear
    integrals: list[Fraction]
    target_integral: Fraction
    gaps: list[Fraction]

    @property
    def monotone(self) -> bool:
        return all(b <= a for a, b in zip(self.gaps, self.gaps[1:]))

    @property
    def final_gap(self) -> Fraction:
        return self.gaps[-1] if self.gaps else ZERO


@dataclass
class WeakConvergenceReport:
    probes: list[ProbeTrace]
    lp: list[LPInterval]

    def to_json(self) -> dict:
        return {
            "probes": [{
                "integrals": [fmt_rational(v) for v in p.integrals],
                "target": fmt_rational(p.target_integral),
                "gaps": [fmt_rational(g) for g in p.gaps],
                "monotone": p.monotone,
                "final_gap": fmt_rational(p.final_gap),
            } for p in self.probes],
            "lp": [iv.to_json() for iv in self.lp],
        }


def weak_convergence_probe(seq: Sequence[Measure1D], target: Measure1D,
                           probes: Sequence[PiecewiseLinear], tol=Fraction(1, 100)
                           ) -> WeakConvergenceReport:
    traces = []
    for phi in probes:
        ref = integrate_pl(target, phi)
        vals = [integrate_pl(mu, phi) for mu in seq]
        traces.append(ProbeTrace(phi, vals, ref, [abs(v - ref) for v in vals]))
    return WeakConvergenceReport(traces, [lp_distance(mu, target, tol) for mu in seq])


__all__ = [
    "Density", "Measure1D", "LPInterval", "mixture", "measure_of", "integrate_rank",
    "integrate_pl", "is_faithful", "discretize", "band_flow", "band_flow_network", "lp_feasible", "lp_distance",
    "lp_bruteforce", "weak_convergence_probe", "WeakConvergenceReport",
]
