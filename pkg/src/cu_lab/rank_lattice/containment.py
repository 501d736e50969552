"""Compact containment ``f << g`` in Lsc([0,1], N-bar), decided three ways.

* :func:`cc_global` -- a continuous real witness fits between ``f`` and ``g``;
  for step data this is "f bounded and usc_envelope(f) <= g".
* :func:`cc_local`  -- every point has a neighbourhood and a finite constant
  squeezed between ``f`` and ``g`` there.
* :func:`cc_cutdown` -- ``f <= rank((b - eps)_+)`` for some eps > 0, with ``b``
  a concrete representative of ``g``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .._rational import INF
from ..errors import NoGap, NotCompactlyContained
from ..piecewise import PiecewiseLinear
from ..openset import OpenSet1D
from .rankfn import RankFunction, is_compact, leq, refinement, usc_envelope
from .representative import build_representative, critical_levels, rank_of_cutdown

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def cc_global(f: RankFunction, g: RankFunction) -> bool:
    return f.is_bounded() and leq(usc_envelope(f), g)


def cc_local(f: RankFunction, g: RankFunction) -> bool:
    pts = refinement(f, g)
    m = len(pts) - 1
    fp, fi = f.sample(pts)
    gp, gi = g.sample(pts)
    # germ at an interior sample of a cell is the cell value itself
    for a, b in zip(fi, gi):
        if a == INF or a > b:
            return False
    # germ at a breakpoint: the point plus both adjacent cells
    for k in range(m + 1):
        near = [j for j in (k - 1, k) if 0 <= j < m]
        f_sup = max([fp[k]] + [fi[j] for j in near])
        g_inf = min([gp[k]] + [gi[j] for j in near])
        c = f_sup  # least admissible constant; it must be finite
        if c == INF or c > g_inf:
            return False
    return True


def cutdown_candidates(f: RankFunction, g: RankFunction) -> tuple[list[Fraction], object]:
    rep = build_representative(g)
    crit = critical_levels(rep, refinement(f, g))
    levels = [ZERO] + crit + [ONE]
    mids = [(a + b) / 2 for a, b in zip(levels, levels[1:])]
    return sorted(set(crit) | set(mids)), rep


def cc_cutdown(f: RankFunction, g: RankFunction) -> bool:
    """Decide ``f << g`` by scanning cut-down levels of a representative of ``g``.

    The cut-down rank is nonincreasing in eps, and between consecutive
    critical levels the verdict of ``f <= cut(eps)`` does not change, so the
    upward scan is decided by its first candidate: success there proves
    ``f << g``, failure there rules out every larger level too.
    Raises :class:`UnboundedRank` when ``g`` attains INF.
    """
    cands, rep = cutdown_candidates(f, g)
    return leq(f, rank_of_cutdown(rep, cands[0]))


def cc_cutdown_exhaustive(f: RankFunction, g: RankFunction) -> list[bool]:
    """Verdict at every candidate level, for checking the monotone scan."""
    cands, rep = cutdown_candidates(f, g)
    return [leq(f, rank_of_cutdown(rep, eps)) for eps in cands]


def witness_insertion(f: RankFunction, g: RankFunction) -> PiecewiseLinear:
    """Continuous ``w`` with ``usc_envelope(f) <= w <= g``.

    ``w`` interpolates the envelope of ``f`` linearly between the breakpoints
    of the common refinement; it is the least such interpolant.
    """
    if not cc_global(f, g):
        raise NotCompactlyContained("no continuous witness: f is not compactly contained in g")
    env = usc_envelope(f)
    pts = refinement(f, g)
    return PiecewiseLinear(tuple((t, Fraction(env(t))) for t in pts))


@dataclass(frozen=True)
class GapWitness:
    interval: OpenSet1D
    witness: PiecewiseLinear
    case: int  # 1: bumped up, 2: bumped down, 3: already strictly below


def _tent(lo: Fraction, hi: Fraction, height: Fraction) -> PiecewiseLinear:
    knots = {ZERO: ZERO, ONE: ZERO, lo: ZERO, hi: ZERO, (lo + hi) / 2: height}
    return PiecewiseLinear(tuple(sorted(knots.items())))


def strict_gap_interval(f: RankFunction, g: RankFunction) -> GapWitness:
    """Open interval ``U`` and witness ``w`` with f <= w <= g and w < g on U."""
    if is_compact(g):
        raise NoGap("g is compact: no strict gap is guaranteed")
    w = witness_insertion(f, g)
    pts = refinement(f, g)
    _, fi = f.sample(pts)
    _, gi = g.sample(pts)
    for k, (a, b) in enumerate(zip(pts, pts[1:])):
        if fi[k] >= gi[k]:
            continue
        wa, wb = w(a), w(b)
        if wa == wb == fi[k]:
            return GapWitness(OpenSet1D.open(a, b), w + _tent(a, b, HALF), 1)
        if gi[k] != INF and wa == wb == gi[k]:
            return GapWitness(OpenSet1D.open(a, b), w - _tent(a, b, HALF), 2)
        return GapWitness(OpenSet1D.open(a, b), w, 3)
    # unreachable for f << g with g noncompact
    raise NoGap("no refinement cell with f < g")
