"""Lower semicontinuous step functions [0, 1] -> {0, 1, ..., INF}.

A :class:`RankFunction` stores rational breakpoints ``0 = t_0 < ... < t_m = 1``
with one value per open cell ``(t_i, t_{i+1})`` and one value per breakpoint.
Every predicate here is decided exactly on a common breakpoint refinement.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .._rational import INF, ExtNat, as_extnat, as_fraction, fmt_extnat, fmt_rational
from ..errors import NotIncreasing
from ..openset import OpenSet1D

ZERO = Fraction(0)
ONE = Fraction(1)


def _canonical(bps, ivals, pvals):
    bps, ivals, pvals = list(bps), list(ivals), list(pvals)
    i = 1
    while i < len(bps) - 1:
        if ivals[i - 1] == ivals[i] == pvals[i]:
            del bps[i], pvals[i], ivals[i]
        else:
            i += 1
    return tuple(bps), tuple(ivals), tuple(pvals)


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant data on [0, 1] with no semicontinuity requirement.

    Construction canonicalizes: removable breakpoints are dropped.
    """

    breakpoints: tuple[Fraction, ...]
    interval_values: tuple[ExtNat, ...]
    point_values: tuple[ExtNat, ...]

    def __post_init__(self):
        bps = tuple(as_fraction(t) for t in self.breakpoints)
        ivals = tuple(as_extnat(v) for v in self.interval_values)
        pvals = tuple(as_extnat(v) for v in self.point_values)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(ivals) != len(bps) - 1 or len(pvals) != len(bps):
            raise ValueError("value lists do not match the breakpoints")
        bps, ivals, pvals = _canonical(bps, ivals, pvals)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "interval_values", ivals)
        object.__setattr__(self, "point_values", pvals)

    # evaluation ---------------------------------------------------------

    def __call__(self, t) -> ExtNat:
        t = as_fraction(t)
        if not ZERO <= t <= ONE:
            raise ValueError(f"{t} is outside [0, 1]")
        k = bisect_right(self.breakpoints, t) - 1
        if self.breakpoints[k] == t:
            return self.point_values[k]
        return self.interval_values[k]

    def sample(self, points: Sequence[Fraction]):
        """Point values and cell values of ``self`` on a finer partition."""
        pv = [self(p) for p in points]
        iv = [self((a + b) / 2) for a, b in zip(points, points[1:])]
        return pv, iv

    @property
    def max_value(self) -> ExtNat:
        return max(max(self.interval_values), max(self.point_values))

    @property
    def min_value(self) -> ExtNat:
        return min(min(self.interval_values), min(self.point_values))

    def is_bounded(self) -> bool:
        return self.max_value != INF

    def is_constant(self) -> bool:
        return len(self.breakpoints) == 2 and len(set(self.point_values + self.interval_values)) == 1

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "breakpoints": [fmt_rational(t) for t in self.breakpoints],
            "interval_values": [fmt_extnat(v) for v in self.interval_values],
            "point_values": [fmt_extnat(v) for v in self.point_values],
        }

    @classmethod
    def from_json(cls, data: dict):
        return cls(tuple(data["breakpoints"]), tuple(data["interval_values"]),
                   tuple(data["point_values"]))

    def __str__(self):
        parts = []
        for i, t in enumerate(self.breakpoints):
            parts.append(f"{fmt_extnat(self.point_values[i])}@{t}")
            if i < len(self.interval_values):
                parts.append(str(fmt_extnat(self.interval_values[i])))
        return f"{type(self).__name__}<{' '.join(parts)}>"


@dataclass(frozen=True)
class RankFunction(StepFunction):
    """An element of Lsc([0, 1], N-bar), i.e. a class in Cu(C[0,1])."""

    def __post_init__(self):
        super().__post_init__()
        pv, iv = self.point_values, self.interval_values
        m = len(iv)
        for i, p in enumerate(pv):
            adjacent = [iv[j] for j in (i - 1, i) if 0 <= j < m]
            if p > min(adjacent):
                raise ValueError(
                    f"not lower semicontinuous at t={self.breakpoints[i]}: "
                    f"point value {p} exceeds neighbouring value {min(adjacent)}")

    @classmethod
    def const(cls, n) -> "RankFunction":
        return cls((ZERO, ONE), (n,), (n, n))

    @classmethod
    def zero(cls) -> "RankFunction":
        return cls.const(0)

    @classmethod
    def indicator(cls, s: OpenSet1D, value=1) -> "RankFunction":
        """``value`` on the open set ``s`` and 0 elsewhere."""
        pts = sorted({ZERO, ONE, *s.endpoints})
        pv = [value if s.contains(p) else 0 for p in pts]
        iv = [value if s.contains((a + b) / 2) else 0 for a, b in zip(pts, pts[1:])]
        return cls(tuple(pts), tuple(iv), tuple(pv))

    @classmethod
    def from_pieces(cls, breakpoints: Iterable, interval_values: Iterable,
                    point_values: Iterable | None = None) -> "RankFunction":
        """Build from cell values; missing point values default to the lsc maximum."""
        bps = tuple(as_fraction(t) for t in breakpoints)
        iv = tuple(as_extnat(v) for v in interval_values)
        if point_values is None:
            pv = tuple(min(iv[j] for j in (i - 1, i) if 0 <= j < len(iv)) for i in range(len(bps)))
        else:
            pv = tuple(point_values)
        return cls(bps, iv, pv)


def refinement(*fs: StepFunction) -> list[Fraction]:
    return sorted(set().union(*(f.breakpoints for f in fs)))


def _pointwise(op: Callable, cls, *fs: StepFunction):
    pts = refinement(*fs)
    samples = [f.sample(pts) for f in fs]
    pv = [op(*vals) for vals in zip(*(s[0] for s in samples))]
    iv = [op(*vals) for vals in zip(*(s[1] for s in samples))]
    return cls(tuple(pts), tuple(iv), tuple(pv))


def add(f: RankFunction, g: RankFunction) -> RankFunction:
    """Pointwise sum; ``INF`` absorbs."""
    return _pointwise(lambda a, b: a + b, RankFunction, f, g)


def pointwise_max(fs: Sequence[RankFunction]) -> RankFunction:
    return _pointwise(lambda *vals: max(vals), RankFunction, *fs)


def pointwise_min(fs: Sequence[RankFunction]) -> RankFunction:
    return _pointwise(lambda *vals: min(vals), RankFunction, *fs)


def leq(f: StepFunction, g: StepFunction) -> bool:
    """``f(t) <= g(t)`` for every t in [0, 1]."""
    pts = refinement(f, g)
    fp, fi = f.sample(pts)
    gp, gi = g.sample(pts)
    return all(a <= b for a, b in zip(fp, gp)) and all(a <= b for a, b in zip(fi, gi))


def level_set(f: StepFunction, i: int) -> OpenSet1D:
    """``{t : f(t) >= i}``; open whenever ``f`` is lower semicontinuous."""
    if i < 1:
        raise ValueError("level index must be at least 1")
    pts = list(f.breakpoints)
    return OpenSet1D.from_cells(pts, [v >= i for v in f.point_values],
                                [v >= i for v in f.interval_values])


def usc_envelope(f: StepFunction) -> StepFunction:
    """Least upper semicontinuous step function above ``f``."""
    iv, pv = f.interval_values, f.point_values
    m = len(iv)
    env = [max([pv[i]] + [iv[j] for j in (i - 1, i) if 0 <= j < m]) for i in range(len(pv))]
    return StepFunction(f.breakpoints, iv, tuple(env))


def is_compact(f: RankFunction) -> bool:
    return f.is_constant() and f.max_value != INF


def sup_chain(fs: Sequence[RankFunction]) -> RankFunction:
    if not fs:
        raise ValueError("sup_chain needs a nonempty chain")
    for k, (a, b) in enumerate(zip(fs, fs[1:])):
        if not leq(a, b):
            raise NotIncreasing(f"chain element {k + 1} is not above element {k}")
    return pointwise_max(fs)
