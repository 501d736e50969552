"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import time
from fractions import Fraction as F

import numpy as np
import pytest

from conftest import dense_grid
from oracles import cubic_eigenvalues, eigen_corpus
from cu_lab._rational import INF
from cu_lab.cu_model import (
    DECLARED, Affine, Compact, MeasureMap, SuiteParams, axiom_suite, dini_index, gamma_h,
    random_dini_instance, random_faithful_map, realize_suite, spectrum_fullness_check, sup_cu,
    total_violations,
)
from cu_lab.errors import NotFaithful
from cu_lab.generators import instance_rng, random_atomic, random_measure, random_pair, random_symmetric
from cu_lab.measures import Measure1D, lp_bruteforce, lp_distance
from cu_lab.rank_lattice import RankFunction, cc_cutdown, cc_global, cc_local, is_compact
from cu_lab.spectral import eigenvalues, exhibit_rank_one, lp_orbit_distance, orbit_distance_sorted

SEED = 2024
NONCOMPACT = RankFunction.from_pieces([0, F(1, 2), 1], [1, 2])


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return emit


def cc_corpus():
    # even indices draw a bounded g so the cutdown decider runs on about half the corpus
    return [random_pair(instance_rng(SEED, "cc", i), bounded_g=i % 2 == 0,
                        max_breakpoints=8, max_value=6, p_inf=0.1) for i in range(1000)]


def test_criterion_1_cc_three_way(verdict):
    start = time.perf_counter()
    disagree, three_way, positive = [], 0, 0
    for i, (f, g) in enumerate(cc_corpus()):
        verdicts = [cc_global(f, g), cc_local(f, g)]
        if g.is_bounded():
            verdicts.append(cc_cutdown(f, g))
            three_way += 1
        positive += verdicts[0]
        if len(set(verdicts)) != 1:
            disagree.append((i, verdicts))
    elapsed = time.perf_counter() - start
    ok = not disagree and elapsed <= 60 and 0 < positive < 1000
    verdict(1, ok, f"1000 pairs, {three_way} three-way, {positive} contained, "
                   f"{len(disagree)} disagreements, {elapsed:.1f}s")


def _constant_finite(f):
    vals = {f(t) for t in dense_grid(f)}
    return len(vals) == 1 and INF not in vals


def test_criterion_2_compactness_law(verdict):
    bad, compact = [], 0
    for i, pair in enumerate(cc_corpus()):
        for f in pair:
            try:
                a, b, c = is_compact(f), cc_global(f, f), _constant_finite(f)
            except Exception as exc:  # noqa: BLE001 - any exception is a failure here
                bad.append((i, repr(exc)))
                continue
            compact += a
            if not a == b == c:
                bad.append((i, (a, b, c)))
    verdict(2, not bad and compact > 0, f"2000 functions, {compact} compact, {len(bad)} failures")


def test_criterion_3_lp_oracle(verdict):
    tol = F(1, 10 ** 9)
    miss = []
    for i in range(500):
        rng = instance_rng(SEED, "lp", i)
        mu, nu = random_atomic(rng, 5), random_atomic(rng, 5)
        enc, bf = lp_distance(mu, nu, tol), lp_bruteforce(mu, nu)
        if not enc.lo <= bf <= enc.hi:
            miss.append(i)
    dirac_bad = []
    for i in range(100):
        rng = instance_rng(SEED, "dirac", i)
        x, y = F(rng.randint(0, 997), 997), F(rng.randint(0, 991), 991)
        enc = lp_distance(Measure1D.dirac(x), Measure1D.dirac(y), tol)
        if not enc.lo == enc.hi == min(abs(x - y), 1):
            dirac_bad.append(i)
    verdict(3, not miss and not dirac_bad,
            f"500 atomic pairs, {len(miss)} misses; 100 Dirac pairs, {len(dirac_bad)} inexact")


def test_criterion_4_metric_sanity(verdict):
    tol = F(1, 50)
    bad = []
    for i in range(200):
        rng = instance_rng(SEED, "metric", i)
        draw = (lambda: random_atomic(rng, 4)) if i % 2 else (lambda: random_measure(rng, max_atoms=2, max_cells=3))
        a, b, c = draw(), draw(), draw()
        ab, ba = lp_distance(a, b, tol), lp_distance(b, a, tol)
        bc, ac = lp_distance(b, c, tol), lp_distance(a, c, tol)
        aa = lp_distance(a, a, tol)
        checks = {
            "symmetry": ab.lo <= ba.hi and ba.lo <= ab.hi,
            "triangle": ac.lo <= ab.hi + bc.hi + 3 * tol,
            "self": aa.lo == 0 <= aa.hi,
        }
        bad += [(i, k) for k, v in checks.items() if not v]
    verdict(4, not bad, f"200 triples at tol {tol}, {len(bad)} violations")


def test_criterion_5_axioms(verdict):
    report = axiom_suite(None, SuiteParams(count=1000))
    declared = sup_cu([Compact(n) for n in range(1, 6)], DECLARED, k=3)
    ok = (total_violations(report) == 0 and declared == Affine((INF, INF, INF))
          and report.get("sup_declared_compacts", {}).get("instances", 0) > 0)
    counts = ", ".join(f"{k} {v['violations']}/{v['instances']}" for k, v in report.items())
    verdict(5, ok, f"violations per axiom: {counts}")


def test_criterion_6_realization(verdict):
    report = realize_suite(None, count=500, seed=SEED)
    verdict(6, total_violations(report) == 0,
            f"{report['realize']['instances']} triples, {report['realize']['violations']} violations")


def test_criterion_7_fullness(verdict):
    short = []
    for i in range(50):
        h = random_faithful_map(instance_rng(SEED, "fullness", i))
        rep = spectrum_fullness_check(h, 64)
        if not (rep.cells == 64 * h.k and rep.positive == rep.cells and rep.min_mass > 0):
            short.append(i)
    rng = instance_rng(SEED, "unfaithful", 0)
    h_bad = MeasureMap((Measure1D.lebesgue(), random_measure(rng, faithful=False)))
    rejected = not h_bad.is_faithful()
    for call in (lambda: spectrum_fullness_check(h_bad, 64),
                 lambda: gamma_h(h_bad, NONCOMPACT)):
        try:
            call()
            rejected = False
        except NotFaithful:
            pass
    verdict(7, not short and rejected,
            f"50 faithful maps, {len(short)} with an empty cell; non-faithful vertex rejected: {rejected}")


def test_criterion_8_spectral_dominance(verdict):
    worst, bad = -np.inf, []
    for i in range(200):
        rng = instance_rng(SEED, "weyl", i)
        n = rng.randint(1, 12)
        a, b = random_symmetric(rng, n), random_symmetric(rng, n)
        gap = orbit_distance_sorted(a, b)
        hi = float(lp_orbit_distance(a, b, F(1, 10 ** 9)).hi)
        worst = max(worst, hi - gap)
        if hi > gap + 1e-8:
            bad.append(i)
    sorted_gap, enc = exhibit_rank_one(4)
    exhibit = sorted_gap == 1 and abs(enc.lo - F(1, 4)) <= F(1, 10 ** 9) >= abs(enc.hi - F(1, 4))
    verdict(8, not bad and exhibit,
            f"200 pairs, {len(bad)} above sorted gap (max excess {worst:.2e}); "
            f"exhibit sorted={sorted_gap} d_LP=[{enc.lo}, {enc.hi}]")


def test_criterion_9_eigensolver(verdict):
    corpus = eigen_corpus(50)
    assert all(np.asarray(a).shape == (3, 3) for a in corpus)
    err = max(max(abs(x - y) for x, y in zip(eigenvalues(a), cubic_eigenvalues(a))) for a in corpus)
    verdict(9, err <= 1e-10, f"{len(corpus)} 3x3 matrices, max error {err:.2e}")


def test_criterion_10_dini(verdict):
    bad = []
    for i in range(200):
        inst = random_dini_instance(instance_rng(SEED, "dini", i))
        try:
            n0 = dini_index(inst.r, inst.target, inst.chain)
        except Exception as exc:  # noqa: BLE001
            bad.append((i, repr(exc)))
            continue
        above = lambda g: all(x > y for x, y in zip(g.values, inst.r))  # noqa: E731
        if not above(inst.chain[n0]) or any(above(g) for g in inst.chain[:n0]):
            bad.append((i, n0))
    verdict(10, not bad, f"200 instances, {len(bad)} without a valid least index")
