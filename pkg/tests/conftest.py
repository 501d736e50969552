import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from cu_lab.rank_lattice import RankFunction
from cu_lab.openset import OpenSet1D

settings.register_profile("default", deadline=None, max_examples=120,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F = Fraction
#: a stream seed; generators in cu_lab.generators do the actual drawing
seeds = st.integers(min_value=0, max_value=2**40).map(random.Random)


def ind(lo, hi, value=1):
    return RankFunction.indicator(OpenSet1D.open(F(lo), F(hi)), value)


def dense_grid(*fs, n=48):
    """Every breakpoint, every cell midpoint and a uniform grid of mesh 1/n."""
    pts = {F(j, n) for j in range(n + 1)}
    for f in fs:
        bps = list(f.breakpoints) if hasattr(f, "breakpoints") else list(f.positions)
        pts.update(bps)
        pts.update((a + b) / 2 for a, b in zip(bps, bps[1:]))
    pts = sorted(pts)
    pts += [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts))


@pytest.fixture
def rng():
    return random.Random(20261014)
