"""Finite model of Cu(A) = V(A) u LAff(QT(A))++ over a k-vertex trace simplex,
and the morphism gamma_h : Lsc([0,1], N-bar) -> Cu(A) built from an affine
measure map h.

Affine dimension functions are stored by their vertex values; a continuous
affine function on a simplex attains its extremes at vertices, so every
"for all tau" comparison reduces to a vertex check.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from ._rational import INF, as_extnat, as_fraction, fmt_extreal, fmt_rational, mul_extreal, parse_extreal
from .errors import NoIndex, NotFaithful, NotIncreasing
from .measures import Measure1D, integrate_pl, integrate_rank, is_faithful, measure_of, mixture
from .openset import OpenSet1D
from .rank_lattice import (
    RankFunction,
    add,
    cc_global,
    is_compact,
    leq,
    pointwise_max,
    pointwise_min,
    strict_gap_interval,
    sup_chain,
)

ZERO = Fraction(0)
ONE = Fraction(1)
DECLARED = "declared-infinite-compacts"


@dataclass(frozen=True)
class TraceSimplex:
    k: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("a trace simplex has at least one vertex")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"tau{i}" for i in range(self.k)))
        elif len(self.labels) != self.k:
            raise ValueError("one label per vertex")


@dataclass(frozen=True)
class QTPoint:
    """A quasitrace, in barycentric coordinates over the simplex vertices."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(as_fraction(w) for w in self.weights)
        if not ws or any(w < 0 for w in ws) or sum(ws) != 1:
            raise ValueError("barycentric coordinates must be nonnegative and sum to 1")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def vertex(cls, k: int, i: int) -> "QTPoint":
        return cls(tuple(ONE if j == i else ZERO for j in range(k)))

    @classmethod
    def barycenter(cls, k: int) -> "QTPoint":
        return cls(tuple(Fraction(1, k) for _ in range(k)))

    @property
    def k(self) -> int:
        return len(self.weights)

    def to_json(self) -> dict:
        return {"lambda": [fmt_rational(w) for w in self.weights]}

    @classmethod
    def from_json(cls, data) -> "QTPoint":
        if isinstance(data, dict):
            data = data["lambda"]
        return cls(tuple(as_fraction(w) for w in data))


@dataclass(frozen=True)
class MeasureMap:
    """Affine map tau -> sum_i lambda_i mu_i, fixed by its vertex measures."""

    vertices: tuple[Measure1D, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise ValueError("a measure map needs at least one vertex measure")
        for mu in self.vertices:
            if not mu.is_probability():
                raise ValueError("vertex measures must be probability measures")

    @property
    def k(self) -> int:
        return len(self.vertices)

    @property
    def simplex(self) -> TraceSimplex:
        return TraceSimplex(self.k)

    def is_faithful(self) -> bool:
        return all(is_faithful(mu) for mu in self.vertices)

    def require_faithful(self) -> None:
        bad = [i for i, mu in enumerate(self.vertices) if not is_faithful(mu)]
        if bad:
            raise NotFaithful(f"vertex measure(s) {bad} are not faithful")

    def to_json(self) -> dict:
        return {"vertices": [mu.to_json() for mu in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "MeasureMap":
        return cls(tuple(Measure1D.from_json(v) for v in data["vertices"]))


@dataclass(frozen=True)
class Compact:
    """``n [1_A]``, an element of V(A)."""

    n: int

    def __post_init__(self):
        n = as_extnat(self.n)
        if n == INF:
            raise ValueError("compact elements are finite multiples of [1_A]")
        object.__setattr__(self, "n", n)

    def to_json(self) -> dict:
        return {"compact": self.n}


@dataclass(frozen=True)
class Affine:
    """A continuous affine function QT(A) -> (0, INF], by vertex values."""

    values: tuple = field()

    def __post_init__(self):
        vals = tuple(v if v == INF else as_fraction(v) for v in self.values)
        if not vals:
            raise ValueError("affine element needs vertex values")
        if any(v <= 0 for v in vals):
            raise ValueError("affine dimension functions take values in (0, INF]")
        object.__setattr__(self, "values", vals)

    @property
    def k(self) -> int:
        return len(self.values)

    def to_json(self) -> dict:
        return {"affine": [fmt_extreal(v) for v in self.values]}


CuAElement = Union[Compact, Affine]


def element_from_json(data: dict) -> CuAElement:
    if "compact" in data:
        return Compact(int(data["compact"]))
    return Affine(tuple(parse_extreal(v) for v in data["affine"]))


def h_eval(h: MeasureMap, tau: QTPoint) -> Measure1D:
    if tau.k != h.k:
        raise ValueError("quasitrace and measure map live on different simplices")
    return mixture(tau.weights, h.vertices)


def gamma_h(h: MeasureMap, f: RankFunction, require_faithful: bool = True) -> CuAElement:
    """Compact ``f = n`` goes to ``n [1_A]``; otherwise to tau -> int f dh(tau)."""
    if require_faithful:
        h.require_faithful()
    if is_compact(f):
        return Compact(f.max_value)
    return Affine(tuple(integrate_rank(mu, f) for mu in h.vertices))


def d_tau(x: CuAElement, tau: QTPoint):
    if isinstance(x, Compact):
        return Fraction(x.n)
    if x.k != tau.k:
        raise ValueError("element and quasitrace live on different simplices")
    total = ZERO
    for w, v in zip(tau.weights, x.values):
        term = mul_extreal(w, v)
        if term == INF:
            return INF
        total += term
    return total


def _vertex_values(x: CuAElement, k: int):
    if isinstance(x, Compact):
        return [Fraction(x.n)] * k
    return list(x.values)


def _common_k(x: CuAElement, y: CuAElement) -> int:
    ks = {e.k for e in (x, y) if isinstance(e, Affine)}
    if len(ks) > 1:
        raise ValueError("elements live on different simplices")
    return ks.pop() if ks else 1


def leq_cu(x: CuAElement, y: CuAElement) -> bool:
    if isinstance(x, Compact) and isinstance(y, Compact):
        return x.n <= y.n
    k = _common_k(x, y)
    xv, yv = _vertex_values(x, k), _vertex_values(y, k)
    if isinstance(x, Compact):
        # compact below noncompact needs strict inequality at every quasitrace
        return all(a < b for a, b in zip(xv, yv))
    return all(a <= b for a, b in zip(xv, yv))


def cc_cu(x: CuAElement, y: CuAElement) -> bool:
    if isinstance(x, Compact) and isinstance(y, Compact):
        return x.n <= y.n
    k = _common_k(x, y)
    xv, yv = _vertex_values(x, k), _vertex_values(y, k)
    if isinstance(y, Compact):
        return all(a <= b for a, b in zip(xv, yv))
    # compact-vs-noncompact and the witness form for two noncompacts both
    # come down to a strict gap at every vertex
    return all(a < b for a, b in zip(xv, yv))


def add_cu(x: CuAElement, y: CuAElement) -> CuAElement:
    if isinstance(x, Compact) and isinstance(y, Compact):
        return Compact(x.n + y.n)
    k = _common_k(x, y)
    return Affine(tuple(a + b for a, b in zip(_vertex_values(x, k), _vertex_values(y, k))))


def sup_cu(chain: Sequence[CuAElement], mode: str = "finite", k: int | None = None) -> CuAElement:
    """Supremum of an increasing chain.

    ``mode="finite"`` treats ``chain`` as the whole chain.
    ``mode="declared-infinite-compacts"`` declares that ``chain`` is a prefix of an infinite chain passing through
    infinitely many distinct compacts, whose supremum is the top element.
    """
    if not chain:
        raise ValueError("empty chain")
    for i, (a, b) in enumerate(zip(chain, chain[1:])):
        if not leq_cu(a, b):
            raise NotIncreasing(f"chain element {i + 1} is not above element {i}")
    if mode == DECLARED:
        if k is None:
            ks = {e.k for e in chain if isinstance(e, Affine)}
            k = ks.pop() if ks else 1
        return Affine(tuple(INF for _ in range(k)))
    if mode != "finite":
        raise ValueError(f"unknown sup mode {mode!r}")
    if all(isinstance(e, Affine) for e in chain):
        return Affine(tuple(max(vals) for vals in zip(*(e.values for e in chain))))
    return chain[-1]


def realize_check(h: MeasureMap, O: OpenSet1D, tau: QTPoint) -> bool:
    """Both sides of the realization identity d_tau(gamma_h(1_O)) = h(tau)(O)."""
    lhs = d_tau(gamma_h(h, RankFunction.indicator(O)), tau)
    rhs = measure_of(h_eval(h, tau), O)
    return lhs == rhs


@dataclass
class FullnessReport:
    grid: int
    vertices: int
    cells: int
    positive: int
    min_mass: Fraction

    @property
    def ok(self) -> bool:
        return self.positive == self.cells

    def to_json(self) -> dict:
        return {"grid": self.grid, "vertices": self.vertices, "cells": self.cells,
                "positive": self.positive, "min_mass": fmt_rational(self.min_mass), "ok": self.ok}


def spectrum_fullness_check(h: MeasureMap, grid: int) -> FullnessReport:
    h.require_faithful()
    masses = [measure_of(mu, OpenSet1D.open(Fraction(j, grid), Fraction(j + 1, grid)))
              for mu in h.vertices for j in range(grid)]
    return FullnessReport(grid, h.k, len(masses), sum(1 for m in masses if m > 0), min(masses))


def dini_index(r: Sequence, g_target: Affine, chain: Sequence[Affine]) -> int:
    """Least ``n0`` with ``chain[n0] > r`` at every vertex."""
    r = [as_fraction(v) for v in r]
    if len(r) != g_target.k or not all(a < b for a, b in zip(r, g_target.values)):
        raise ValueError("target must strictly exceed r at every vertex")
    for n, g in enumerate(chain):
        if all(a > b for a, b in zip(g.values, r)):
            return n
    raise NoIndex("chain prefix exhausted before dominating r")


def witness_trace(h: MeasureMap, w) -> tuple:
    """Vertex values of tau -> int w dh(tau) for a continuous witness ``w``."""
    return tuple(integrate_pl(mu, w) for mu in h.vertices)



# ---------------------------------------------------------------------------
# randomized suites

@dataclass(frozen=True)
class SuiteParams:
    count: int = 100
    seed: int = 0
    k_max: int = 4
    chain_max: int = 20
    max_breakpoints: int = 8
    max_value: int = 6


def parallelism() -> int:
    """Worker cap from ``CU_LAB_THREADS`` (default 1, i.e. in-process)."""
    raw = os.environ.get("CU_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_instances(fn: Callable, args: list) -> list:
    workers = min(parallelism(), len(args))
    if workers <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*args), chunksize=max(1, len(args) // (4 * workers))))


class Tally:
    """Per-axiom counters; merging keeps the counterexample of the lowest instance id."""

    def __init__(self):
        self.data: dict[str, dict] = {}

    def record(self, axiom: str, ok: bool, detail: Callable[[], dict]) -> None:
        entry = self.data.setdefault(axiom, {"instances": 0, "violations": 0})
        entry["instances"] += 1
        if not ok:
            entry["violations"] += 1
            entry.setdefault("first_counterexample", detail())

    def check(self, axiom: str, thunk: Callable[[], bool], detail: Callable[[], dict]) -> None:
        try:
            ok = bool(thunk())
        except Exception as exc:  # a crash inside a law is a violation, not an abort
            base = detail
            ok, detail = False, lambda: {**base(), "error": f"{type(exc).__name__}: {exc}"}
        self.record(axiom, ok, detail)

    def merge(self, other: "Tally") -> "Tally":
        for axiom, e in other.data.items():
            mine = self.data.setdefault(axiom, {"instances": 0, "violations": 0})
            mine["instances"] += e["instances"]
            mine["violations"] += e["violations"]
            if "first_counterexample" in e and "first_counterexample" not in mine:
                mine["first_counterexample"] = e["first_counterexample"]
        return self

    def report(self) -> dict:
        return {k: dict(self.data[k]) for k in sorted(self.data)}


def total_violations(report: dict) -> int:
    return sum(e["violations"] for e in report.values())


def random_faithful_map(rng: random.Random, k_max: int = 4) -> MeasureMap:
    from .generators import random_measure

    k = rng.randint(1, k_max)
    return MeasureMap(tuple(random_measure(rng, faithful=True) for _ in range(k)))


def _noncompact(rng, **kw) -> RankFunction:
    from .generators import random_rank_function

    while True:
        f = random_rank_function(rng, **kw)
        if not is_compact(f):
            return f


def _bounded_noncompact(rng, cap: int, **kw) -> RankFunction:
    """Noncompact function with values at most ``cap`` (``cap`` >= 1)."""
    from .generators import cap_at

    while True:
        f = cap_at(_noncompact(rng, **kw), cap)
        if not is_compact(f):
            return f


def _chain(rng: random.Random, length: int, kind: int, kw: dict) -> list[RankFunction]:
    from .generators import random_rank_function

    if kind == 0:  # noncompact throughout
        chain = [_noncompact(rng, **kw)]
        while len(chain) < length:
            chain.append(pointwise_max([chain[-1], random_rank_function(rng, **kw)]))
        return chain
    if kind == 1:  # compacts, then noncompacts above them
        n_c = rng.randint(1, max(1, length // 2))
        base = rng.randint(0, 3)
        chain = [RankFunction.const(base + j) for j in range(n_c)]
        top = base + n_c - 1
        while len(chain) < length:
            nxt = pointwise_max([chain[-1], add(RankFunction.const(top), _noncompact(rng, **kw))])
            chain.append(nxt)
        return chain
    # noncompacts capped below a compact, then compacts
    cap = rng.randint(1, 4)
    n_nc = rng.randint(1, max(1, length // 2))
    chain = [_bounded_noncompact(rng, cap, **kw)]
    while len(chain) < n_nc:
        chain.append(pointwise_max([chain[-1], _bounded_noncompact(rng, cap, **kw)]))
    j = cap
    while len(chain) < length:
        chain.append(RankFunction.const(j))
        j += rng.randint(0, 1)
    return chain


def _fj(f) -> dict:
    return f.to_json()


def axiom_instance(seed: int, index: int, h: MeasureMap | None, params: SuiteParams) -> Tally:
    """Run every morphism law once on instance ``index``."""
    from .generators import instance_rng, random_pair, random_qtpoint_weights, random_rank_function

    rng = instance_rng(seed, "axioms", index)
    if h is None:
        h = random_faithful_map(rng, params.k_max)
    h.require_faithful()
    kw = {"max_breakpoints": params.max_breakpoints, "max_value": params.max_value}
    t = Tally()
    g_ = lambda f: gamma_h(h, f)  # noqa: E731
    tau = QTPoint(tuple(random_qtpoint_weights(rng, h.k)))

    def ctx(**fs):
        return lambda: {"instance": index, "h": h.to_json(),
                        **{k: _fj(v) for k, v in fs.items()}}

    # (i) additivity over the three compactness mixes
    mix = index % 3
    f = RankFunction.const(rng.randint(0, 5)) if mix < 2 else _noncompact(rng, **kw)
    g = RankFunction.const(rng.randint(0, 5)) if mix == 0 else _noncompact(rng, **kw)
    t.check("additivity", lambda: g_(add(f, g)) == add_cu(g_(f), g_(g)), ctx(f=f, g=g))

    # (ii) zero
    t.check("zero", lambda: g_(RankFunction.zero()) == Compact(0)
            and add_cu(g_(g), Compact(0)) == g_(g), ctx(g=g))

    # positivity of noncompact images
    p = _noncompact(rng, **kw)
    t.check("positivity", lambda: all(v > 0 for v in g_(p).values), ctx(f=p))

    # (iii) order, with the two compact-vs-noncompact cases forced
    mode = index % 3
    if mode == 0:  # Case 1: compact below noncompact
        g = _noncompact(rng, **kw)
        lo = g.min_value
        f = RankFunction.const(rng.randint(0, lo) if lo != INF else rng.randint(0, 6))
    elif mode == 1:  # Case 2: noncompact below compact
        n = rng.randint(1, 5)
        g = RankFunction.const(n)
        f = _bounded_noncompact(rng, n, **kw)
    else:
        g = random_rank_function(rng, **kw)
        f = pointwise_min([g, random_rank_function(rng, **kw)])
    assert leq(f, g)
    t.check("order", lambda: leq_cu(g_(f), g_(g)), ctx(f=f, g=g))
    t.check("monotone_dimension", lambda: d_tau(g_(f), tau) <= d_tau(g_(g), tau), ctx(f=f, g=g))

    # (iv) suprema
    length = rng.randint(1, params.chain_max)
    chain = _chain(rng, length, index % 3, kw)
    images = [g_(c) for c in chain]

    def sup_ok():
        return g_(sup_chain(chain)) == sup_cu(images) and all(
            leq_cu(a, b) for a, b in zip(images, images[1:]))

    t.check("sup", sup_ok, lambda: {"instance": index, "h": h.to_json(),
                                    "chain": [_fj(c) for c in chain]})
    n_c = rng.randint(1, params.chain_max)
    t.check("sup_declared_compacts",
            lambda: sup_cu([Compact(j) for j in range(1, n_c + 1)], DECLARED, h.k)
            == g_(RankFunction.const(INF)) == Affine(tuple(INF for _ in range(h.k))),
            lambda: {"instance": index, "prefix": n_c, "k": h.k})

    # (v) compact containment
    mode = index % 4
    if mode == 0:
        n = rng.randint(0, 5)
        f, g = RankFunction.const(n), RankFunction.const(n + rng.randint(0, 2))
    elif mode == 1:
        g = _noncompact(rng, **kw)
        lo = g.min_value
        f = RankFunction.const(rng.randint(0, lo) if lo != INF else rng.randint(0, 6))
    else:
        for _ in range(200):
            f, g = random_pair(rng, **kw)
            if cc_global(f, g) and (mode == 2 or not is_compact(f)):
                break
        else:
            f, g = RankFunction.zero(), RankFunction.zero()
    if cc_global(f, g):
        t.check("compact_containment", lambda: cc_cu(g_(f), g_(g)), ctx(f=f, g=g))
        if not is_compact(f) and not is_compact(g):
            def witness_ok(f=f, g=g):
                gap = strict_gap_interval(f, g)
                r = witness_trace(h, gap.witness)
                return all(a < b < c for a, b, c in zip(g_(f).values, r, g_(g).values))
            t.check("strict_gap_witness", witness_ok, ctx(f=f, g=g))
    return t


def axiom_suite(h: MeasureMap | None = None, params: SuiteParams = SuiteParams(),
                exhaustive: bool = False) -> dict:
    """Report ``{axiom: {instances, violations, first_counterexample?}}``.

    ``h=None`` draws a fresh faithful map (with k <= ``params.k_max``) per
    instance; otherwise every instance uses ``h``.
    """
    if h is not None:
        h.require_faithful()
    args = [(params.seed, i, h, params) for i in range(params.count)]
    tally = Tally()
    for part in _map_instances(axiom_instance, args):
        tally.merge(part)
    if exhaustive:
        tally.merge(exhaustive_axioms(h or MeasureMap((Measure1D.lebesgue(),))))
    return tally.report()


def exhaustive_axioms(h: MeasureMap) -> Tally:
    """Additivity, order and containment laws over every small rank function."""
    from .generators import small_rank_functions

    fs = small_rank_functions()
    images = {f: gamma_h(h, f) for f in fs}
    t = Tally()
    for f in fs:
        for g in fs:
            detail = lambda f=f, g=g: {"exhaustive": True, "f": _fj(f), "g": _fj(g)}  # noqa: E731
            t.check("exhaustive_additivity",
                    lambda: gamma_h(h, add(f, g)) == add_cu(images[f], images[g]), detail)
            if leq(f, g):
                t.check("exhaustive_order", lambda: leq_cu(images[f], images[g]), detail)
            if cc_global(f, g):
                t.check("exhaustive_compact_containment",
                        lambda: cc_cu(images[f], images[g]), detail)
    return t


def realize_instance(seed: int, index: int, h: MeasureMap | None, k_max: int) -> Tally:
    from .generators import instance_rng, random_proper_open_set, random_qtpoint_weights

    rng = instance_rng(seed, "realize", index)
    if h is None:
        h = random_faithful_map(rng, k_max)
    O = random_proper_open_set(rng)
    tau = QTPoint(tuple(random_qtpoint_weights(rng, h.k)))
    t = Tally()
    t.check("realize", lambda: realize_check(h, O, tau),
            lambda: {"instance": index, "h": h.to_json(), "O": O.to_json(), "tau": tau.to_json()})
    return t


def realize_suite(h: MeasureMap | None = None, count: int = 100, seed: int = 0,
                  k_max: int = 4) -> dict:
    if h is not None:
        h.require_faithful()
    tally = Tally()
    for part in _map_instances(realize_instance, [(seed, i, h, k_max) for i in range(count)]):
        tally.merge(part)
    return tally.report()


@dataclass(frozen=True)
class DiniInstance:
    r: tuple
    target: Affine
    chain: tuple


def random_dini_instance(rng: random.Random, k_max: int = 4) -> DiniInstance:
    """Target g with a strict vertex gap over r, and an increasing chain with
    vertexwise supremum g, truncated past the point where it must dominate r."""
    k = rng.randint(1, k_max)
    g = [Fraction(rng.randint(1, 40), rng.randint(1, 8)) for _ in range(k)]
    r = [gi - gi * Fraction(1, rng.randint(2, 50)) for gi in g]
    shape = rng.randrange(3)
    # 1/n < min gap ratio guarantees domination at n, so the prefix needs at most n terms
    n_max = max(g[i] / (g[i] - r[i]) for i in range(k)).__ceil__() + 2
    chain = []
    for n in range(1, n_max + 1):
        if shape == 0:
            vals = [gi * (1 - Fraction(1, n + 1)) for gi in g]
        elif shape == 1:
            vals = [gi - (gi - ri) * Fraction(2, n + 1) for gi, ri in zip(g, r)]
        else:
            vals = [gi * (1 - Fraction(1, 2 ** n)) for gi in g]
        chain.append(Affine(tuple(max(v, gi / 10**6) for v, gi in zip(vals, g))))
    return DiniInstance(tuple(r), Affine(tuple(g)), tuple(chain))


__all__ = [
    "TraceSimplex", "QTPoint", "MeasureMap", "Compact", "Affine", "CuAElement", "DECLARED",
    "element_from_json", "h_eval", "gamma_h", "d_tau", "leq_cu", "cc_cu", "add_cu", "sup_cu",
    "realize_check", "spectrum_fullness_check", "FullnessReport", "dini_index", "witness_trace",
    "SuiteParams", "Tally", "axiom_suite", "realize_suite", "total_violations",
    "random_faithful_map", "DiniInstance", "random_dini_instance", "parallelism",
]
