"""Finite unions of relatively open subintervals of [0, 1]."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ._rational import as_fraction, fmt_rational

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Interval:
    """A relatively open interval of [0, 1].

    ``lo_closed`` is only legal at ``lo == 0`` and ``hi_closed`` only at
    ``hi == 1``; everything else is open at its endpoints.
    """

    lo: Fraction
    hi: Fraction
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if not (ZERO <= self.lo < self.hi <= ONE):
            raise ValueError(f"degenerate or out-of-range interval [{self.lo}, {self.hi}]")
        if self.lo_closed and self.lo != 0:
            raise ValueError("only an interval starting at 0 may be closed on the left")
        if self.hi_closed and self.hi != 1:
            raise ValueError("only an interval ending at 1 may be closed on the right")

    def contains(self, t) -> bool:
        t = as_fraction(t)
        if t == self.lo:
            return self.lo_closed
        if t == self.hi:
            return self.hi_closed
        return self.lo < t < self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class OpenSet1D:
    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for a, b in zip(ivs, ivs[1:]):
            if a.hi > b.lo:
                raise ValueError("intervals must be sorted and disjoint")
            if a.hi == b.lo and (a.hi_closed or b.lo_closed):
                raise ValueError("intervals overlap at a shared endpoint")

    @classmethod
    def empty(cls) -> "OpenSet1D":
        return cls(())

    @classmethod
    def full(cls) -> "OpenSet1D":
        return cls((Interval(ZERO, ONE, True, True),))

    @classmethod
    def interval(cls, lo, hi) -> "OpenSet1D":
        """(lo, hi) intersected with [0, 1]: an endpoint at 0 or 1 is included."""
        lo, hi = as_fraction(lo), as_fraction(hi)
        return cls((Interval(lo, hi, lo == 0, hi == 1),))

    @classmethod
    def open(cls, lo, hi) -> "OpenSet1D":
        return cls((Interval(lo, hi),))

    @classmethod
    def from_cells(cls, points: Sequence[Fraction], point_in: Sequence[bool],
                   interval_in: Sequence[bool]) -> "OpenSet1D":
        """Assemble a set from membership flags on a cell decomposition.

        ``points`` is a partition 0 = p_0 < ... < p_m = 1; ``point_in[i]``
        says whether p_i belongs to the set and ``interval_in[i]`` whether
        the open cell (p_i, p_{i+1}) does.  The described set must be open
        in [0, 1]: a member point needs its adjacent cells to be members.
        """
        m = len(points) - 1
        if len(point_in) != m + 1 or len(interval_in) != m:
            raise ValueError("cell flags do not match the partition")
        for i in range(m + 1):
            if point_in[i]:
                if (i > 0 and not interval_in[i - 1]) or (i < m and not interval_in[i]):
                    raise ValueError(f"set is not open at {points[i]}")
        out: list[Interval] = []
        i = 0
        while i < m:
            if not interval_in[i]:
                i += 1
                continue
            j = i
            while j + 1 < m and interval_in[j + 1] and point_in[j + 1]:
                j += 1
            lo_closed = i == 0 and point_in[0]
            hi_closed = j + 1 == m and point_in[m]
            out.append(Interval(points[i], points[j + 1], lo_closed, hi_closed))
            i = j + 1
        return cls(tuple(out))

    def contains(self, t) -> bool:
        return any(iv.contains(t) for iv in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def is_full(self) -> bool:
        return self == OpenSet1D.full()

    @property
    def endpoints(self) -> list[Fraction]:
        pts = set()
        for iv in self.intervals:
            pts.add(iv.lo)
            pts.add(iv.hi)
        return sorted(pts)

    @property
    def length(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), ZERO)

    def to_json(self) -> list:
        return [[fmt_rational(iv.lo), fmt_rational(iv.hi), iv.lo_closed, iv.hi_closed]
                for iv in self.intervals]

    @classmethod
    def from_json(cls, data: Iterable) -> "OpenSet1D":
        ivs = []
        for item in data:
            lo, hi, *flags = item
            lc = bool(flags[0]) if len(flags) > 0 else False
            hc = bool(flags[1]) if len(flags) > 1 else False
            ivs.append(Interval(as_fraction(lo), as_fraction(hi), lc, hc))
        return cls(tuple(ivs))

    def __str__(self):
        if not self.intervals:
            return "{}"
        return " u ".join(str(iv) for iv in self.intervals)
