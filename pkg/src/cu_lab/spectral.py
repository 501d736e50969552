"""Spectral data of real symmetric matrices, and the uniform-distance formula
over the model trace simplex.

This is the one floating-point corner of the package: eigenvalues come out of
a cyclic Jacobi solver as doubles and are snapped to nearby simple rationals
before they reach the exact measure engine.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
import numpy as np

from ._rational import as_fraction, fmt_rational
from .cu_model import MeasureMap, QTPoint, _map_instances, h_eval
from .errors import DimensionMismatch, NoConvergence, RescaleNeeded
from .measures import LPInterval, Measure1D, lp_distance

SNAP_TOL = 1e-9
MAX_SWEEPS = 100


def as_symmetric(a) -> np.ndarray:
    """Validate a square, exactly symmetric input and return it as float64."""
    if isinstance(a, np.ndarray):
        m = np.asarray(a, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if not np.array_equal(m, m.T):
            raise ValueError("matrix is not symmetric")
        return m
    rows = [list(r) for r in a]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    exact = [[as_fraction(x) for x in r] for r in rows]
    if any(exact[i][j] != exact[j][i] for i in range(n) for j in range(i)):
        raise ValueError("matrix is not symmetric")
    return np.array([[float(x) for x in r] for r in exact], dtype=float).reshape(n, n)


def _off(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - np.diag(np.diag(m))))


def _rotate(m: np.ndarray, p: int, q: int) -> None:
    # one Jacobi rotation annihilating m[p, q], with the stable diagonal updates
    apq = m[p, q]
    theta = (m[q, q] - m[p, p]) / (2.0 * apq)
    if abs(theta) > 1e150:
        t = 0.5 / abs(theta)
    else:
        t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    tau = s / (1.0 + c)
    m[p, p] -= t * apq
    m[q, q] += t * apq
    m[p, q] = m[q, p] = 0.0
    for r in range(m.shape[0]):
        if r in (p, q):
            continue
        arp, arq = m[r, p], m[r, q]
        m[r, p] = m[p, r] = arp - s * (arq + tau * arp)
        m[r, q] = m[q, r] = arq + s * (arp - tau * arq)


def eigenvalues(a, tol: float = 1e-12, max_sweeps: int = MAX_SWEEPS) -> list[float]:
    """Cyclic Jacobi; stops once the off-diagonal Frobenius norm is below ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = as_symmetric(a).copy()
    n = m.shape[0]
    for _ in range(max_sweeps + 1):
        if _off(m) < tol:
            return sorted(float(x) for x in np.diag(m))
        for p in range(n - 1):
            for q in range(p + 1, n):
                if m[p, q] != 0.0:
                    _rotate(m, p, q)
    raise NoConvergence(f"off-diagonal norm {_off(m):.3e} after {max_sweeps} sweeps")


def snap(x: float, tol: float = SNAP_TOL) -> Fraction:
    """Simplest rational (by denominator 1, 10, ..., 10**9) within ``tol`` of ``x``."""
    exact = Fraction(x)
    for e in range(10):
        c = exact.limit_denominator(10 ** e)
        if abs(float(c) - x) <= tol:
            return c
    return exact.limit_denominator(10 ** 9)


@dataclass(frozen=True)
class SnapReport:
    raw: tuple[float, ...]
    snapped: tuple[Fraction, ...]

    @property
    def max_error(self) -> float:
        if not self.raw:
            return 0.0
        return max(abs(float(s) - r) for r, s in zip(self.raw, self.snapped))

    def to_json(self) -> dict:
        return {"raw": list(self.raw), "snapped": [fmt_rational(s) for s in self.snapped],
                "max_error": self.max_error}


def snapped_spectrum(a, tol: float = SNAP_TOL) -> SnapReport:
    raw = eigenvalues(a)
    out = []
    for lam in raw:
        if -tol <= lam < 0:
            lam_s = Fraction(0)
        elif 1 < lam <= 1 + tol:
            lam_s = Fraction(1)
        elif 0 <= lam <= 1:
            lam_s = min(max(snap(lam, tol), Fraction(0)), Fraction(1))
        else:
            raise RescaleNeeded(f"eigenvalue {lam!r} lies outside [0, 1]")
        out.append(lam_s)
    return SnapReport(tuple(raw), tuple(out))


def spectral_measure(a, tol: float = SNAP_TOL) -> Measure1D:
    """``(1/n) sum_i delta_{lambda_i}`` under the normalized trace."""
    spec = snapped_spectrum(a, tol).snapped
    n = len(spec)
    return Measure1D.atomic([(lam, Fraction(1, n)) for lam in spec])


def orbit_distance_sorted(a, b) -> float:
    la, lb = eigenvalues(a), eigenvalues(b)
    if len(la) != len(lb):
        raise DimensionMismatch(f"{len(la)}x{len(la)} vs {len(lb)}x{len(lb)}")
    return max((abs(x - y) for x, y in zip(la, lb)), default=0.0)


def lp_orbit_distance(a, b, tol) -> LPInterval:
    return lp_distance(spectral_measure(a), spectral_measure(b), tol)


def barycentric_grid(k: int, resolution: int) -> list[QTPoint]:
    """All points of the simplex whose coordinates are multiples of 1/resolution."""
    pts = []
    for cuts in itertools.combinations(range(resolution + k - 1), k - 1):
        parts, prev = [], -1
        for c in (*cuts, resolution + k - 1):
            parts.append(c - prev - 1)
            prev = c
        pts.append(QTPoint(tuple(Fraction(p, resolution) for p in parts)))
    return pts


def _du_point(h1: MeasureMap, h2: MeasureMap, tau: QTPoint, tol) -> LPInterval:
    return lp_distance(h_eval(h1, tau), h_eval(h2, tau), tol)


@dataclass(frozen=True)
class DuEstimate:
    estimate: Fraction
    argmax: QTPoint
    mesh: Fraction
    points: int
    lower: Fraction

    def to_json(self) -> dict:
        return {"estimate": fmt_rational(self.estimate), "lower": fmt_rational(self.lower),
                "argmax": self.argmax.to_json(), "mesh": fmt_rational(self.mesh),
                "points": self.points}


def du_formula(h1: MeasureMap, h2: MeasureMap, resolution: int, tol) -> DuEstimate:
    """Grid estimate of ``sup_tau d_LP(h1(tau), h2(tau))``.

    ``estimate`` is the largest upper endpoint over the grid, ``lower`` the
    largest lower endpoint (a certified lower bound for the supremum).
    """
    if h1.k != h2.k:
        raise DimensionMismatch("measure maps live on simplices of different dimension")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    grid = barycentric_grid(h1.k, resolution)
    encl = _map_instances(_du_point, [(h1, h2, tau, tol) for tau in grid])
    best = max(range(len(grid)), key=lambda i: (encl[i].hi, -i))
    return DuEstimate(encl[best].hi, grid[best], Fraction(1, resolution), len(grid),
                      max(e.lo for e in encl))


def exhibit_rank_one(n: int) -> tuple[float, LPInterval]:
    """The pair (diag(0,...,0,1), 0): sorted gap 1 against d_LP = 1/n."""
    a = np.zeros((n, n))
    a[-1, -1] = 1.0
    z = np.zeros((n, n))
    return orbit_distance_sorted(a, z), lp_orbit_distance(a, z, Fraction(1, 10 ** 9))


def matrix_from_json(data) -> np.ndarray:
    if isinstance(data, dict):
        data = data["rows"] if "rows" in data else data["matrix"]
    return as_symmetric(data)


__all__ = [
    "as_symmetric", "eigenvalues", "snap", "SnapReport", "snapped_spectrum", "spectral_measure",
    "orbit_distance_sorted", "lp_orbit_distance", "barycentric_grid", "DuEstimate", "du_formula",
    "exhibit_rank_one", "matrix_from_json", "SNAP_TOL",
]
