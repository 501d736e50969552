"""Diagonal positive elements realizing bounded rank functions, and their cut-downs."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .._rational import as_fraction
from ..errors import UnboundedRank
from ..piecewise import PiecewiseLinear
from ..openset import Interval, OpenSet1D
from .rankfn import RankFunction, add, level_set

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Representative:
    """``diag(g_1, ..., g_N)`` in C([0,1], M_N); its rank at t counts the g_i(t) > 0."""

    legs: tuple[PiecewiseLinear, ...]

    @property
    def bound(self) -> int:
        return len(self.legs)


def _bump(iv: Interval) -> list[tuple[Fraction, Fraction]]:
    # height-1 bump whose open support is exactly iv
    lo, hi = iv.lo, iv.hi
    if iv.lo_closed and iv.hi_closed:
        return [(lo, ONE), (hi, ONE)]
    if iv.lo_closed:
        return [(lo, ONE), (hi, ZERO)]
    if iv.hi_closed:
        return [(lo, ZERO), (hi, ONE)]
    return [(lo, ZERO), ((lo + hi) / 2, ONE), (hi, ZERO)]


def support_leg(s: OpenSet1D) -> PiecewiseLinear:
    """A function in C[0,1] with values in [0, 1] and open support ``s``."""
    knots: dict[Fraction, Fraction] = {ZERO: ZERO, ONE: ZERO}
    for iv in s.intervals:
        for t, v in _bump(iv):
            knots[t] = max(knots.get(t, ZERO), v)
    return PiecewiseLinear(tuple(sorted(knots.items())))


def build_representative(f: RankFunction) -> Representative:
    if not f.is_bounded():
        raise UnboundedRank("only bounded rank functions have a finite diagonal representative")
    n = f.max_value
    return Representative(tuple(support_leg(level_set(f, i)) for i in range(1, n + 1)))


def rank_of_cutdown(rep: Representative, eps) -> RankFunction:
    """``t -> #{i : g_i(t) > eps}``, the rank function of ``(a - eps)_+``."""
    eps = as_fraction(eps)
    if not ZERO <= eps < ONE:
        raise ValueError("cut-down level must lie in [0, 1)")
    out = RankFunction.zero()
    for leg in rep.legs:
        out = add(out, RankFunction.indicator(leg.superlevel(eps)))
    return out


def critical_levels(rep: Representative, extra_points=()) -> list[Fraction]:
    """Leg values at knots (and at ``extra_points``) lying strictly inside (0, 1)."""
    vals = set()
    for leg in rep.legs:
        for t in set(leg.positions) | {as_fraction(p) for p in extra_points}:
            v = leg(t)
            if ZERO < v < ONE:
                vals.add(v)
    return sorted(vals)
