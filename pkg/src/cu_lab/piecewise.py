"""Continuous piecewise-linear functions on [0, 1] with rational knots."""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._rational import as_fraction, fmt_rational
from .openset import OpenSet1D

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation through ``knots`` = ((t_0, v_0), ..., (t_m, v_m)).

    ``t_0 = 0`` and ``t_m = 1``; knots whose removal leaves the function
    unchanged are dropped.
    """

    knots: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        ks = [(as_fraction(t), as_fraction(v)) for t, v in self.knots]
        if len(ks) < 2 or ks[0][0] != 0 or ks[-1][0] != 1:
            raise ValueError("knots must span [0, 1]")
        if any(a[0] >= b[0] for a, b in zip(ks, ks[1:])):
            raise ValueError("knot positions must be strictly increasing")
        i = 1
        while i < len(ks) - 1:
            (t0, v0), (t1, v1), (t2, v2) = ks[i - 1], ks[i], ks[i + 1]
            if (v1 - v0) * (t2 - t1) == (v2 - v1) * (t1 - t0):
                del ks[i]
            else:
                i += 1
        object.__setattr__(self, "knots", tuple(ks))

    @classmethod
    def const(cls, c) -> "PiecewiseLinear":
        c = as_fraction(c)
        return cls(((ZERO, c), (ONE, c)))

    @classmethod
    def through(cls, points: Iterable) -> "PiecewiseLinear":
        return cls(tuple(points))

    @property
    def positions(self) -> list[Fraction]:
        return [t for t, _ in self.knots]

    def __call__(self, t) -> Fraction:
        t = as_fraction(t)
        if not ZERO <= t <= ONE:
            raise ValueError(f"{t} is outside [0, 1]")
        k = min(bisect_right(self.positions, t) - 1, len(self.knots) - 2)
        (t0, v0), (t1, v1) = self.knots[k], self.knots[k + 1]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    def __add__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        pts = sorted(set(self.positions) | set(other.positions))
        return PiecewiseLinear(tuple((t, self(t) + other(t)) for t in pts))

    def __neg__(self) -> "PiecewiseLinear":
        return PiecewiseLinear(tuple((t, -v) for t, v in self.knots))

    def __sub__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return self + (-other)

    def min_value(self) -> Fraction:
        return min(v for _, v in self.knots)

    def max_value(self) -> Fraction:
        return max(v for _, v in self.knots)

    def crossings(self, level) -> list[Fraction]:
        """Positions strictly inside a segment where the graph crosses ``level``."""
        level = as_fraction(level)
        out = []
        for (t0, v0), (t1, v1) in zip(self.knots, self.knots[1:]):
            if (v0 - level) * (v1 - level) < 0:
                out.append(t0 + (level - v0) * (t1 - t0) / (v1 - v0))
        return out

    def superlevel(self, level) -> OpenSet1D:
        """The open set ``{t : self(t) > level}``."""
        pts = sorted(set(self.positions) | set(self.crossings(level)))
        level = as_fraction(level)
        return OpenSet1D.from_cells(
            pts,
            [self(p) > level for p in pts],
            [self((a + b) / 2) > level for a, b in zip(pts, pts[1:])],
        )

    def integral(self, lo=ZERO, hi=ONE) -> Fraction:
        """Exact integral over [lo, hi] w.r.t. Lebesgue measure."""
        lo, hi = as_fraction(lo), as_fraction(hi)
        if hi <= lo:
            return ZERO
        pts = [lo] + [t for t in self.positions if lo < t < hi] + [hi]
        return sum(((b - a) * (self(a) + self(b)) / 2 for a, b in zip(pts, pts[1:])), ZERO)

    def to_json(self) -> list:
        return [[fmt_rational(t), fmt_rational(v)] for t, v in self.knots]

    @classmethod
    def from_json(cls, data) -> "PiecewiseLinear":
        return cls(tuple((t, v) for t, v in data))
