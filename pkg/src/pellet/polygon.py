"""Newton-polygon screening of the index k, and the all-k driver.

phi can only have two positive roots at an index k that is the abscissa
of a vertex of the upper convex hull of the points ``(j, log|a_j|)``, so
only those indices are worth a detection pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .detection import DEFAULT_TOL, Detection, Existence, detect
from .errors import InvalidInputError, PelletError
from .poly import PelletInstance, Polynomial, pellet_instance
from .solver import AnnulusResult, pellet_annulus

_LOG_FLOOR = math.log(np.finfo(np.float64).tiny)
# cross products within this relative band count as collinear (not a vertex)
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class PolygonCandidates:
    support: tuple
    vertices: tuple
    candidates: tuple


@dataclass(frozen=True)
class PelletAnalysis:
    """Outcome for one index: the detection, the annulus when roots exist,
    or the error that stopped the analysis."""

    k: int
    detection: Optional[Detection] = None
    annulus: Optional[AnnulusResult] = None
    error: Optional[str] = None
    error_kind: Optional[str] = None

    @property
    def exists(self) -> Optional[Existence]:
        return None if self.detection is None else self.detection.exists


def upper_hull(points) -> list:
    """Strict upper convex hull of points sorted by abscissa (monotone chain)."""
    hull: list = []
    for p in points:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            cross = (x1 - x0) * (p[1] - y0) - (y1 - y0) * (p[0] - x0)
            tie = _TIE_TOL * (p[0] - x0) * max(1.0, abs(y0), abs(y1), abs(p[1]))
            if cross >= -tie:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def candidate_ks(p: Polynomial) -> PolygonCandidates:
    mags = np.abs(p.coefficients)
    if mags[0] == 0:
        raise InvalidInputError("a_0 = 0: strip the zero roots before screening")
    return candidates_from_magnitudes(mags)


def candidates_from_magnitudes(mags) -> PolygonCandidates:
    mags = np.asarray(mags, dtype=np.float64)
    n = mags.shape[0] - 1
    support = [(j, max(math.log(m), _LOG_FLOOR) if m > 0 else _LOG_FLOOR) for j, m in enumerate(mags) if m != 0]
    vertices = [j for j, _ in upper_hull(support)]
    cands = tuple(j for j in vertices if 1 <= j <= n - 1)
    return PolygonCandidates(tuple(support), tuple(vertices), cands)


def analyze_instance(
    inst: PelletInstance,
    tol: float = DEFAULT_TOL,
    margin_tol: float | None = None,
    max_iter: int | None = None,
) -> PelletAnalysis:
    """Detection followed, when phi has two roots, by the annulus computation.

    ``max_iter`` caps both the outer and inner solver loops.
    """
    caps = {} if max_iter is None else {"max_outer": max_iter, "max_inner": max_iter}
    try:
        det = detect(inst, tol, margin_tol)
    except PelletError as exc:
        return PelletAnalysis(inst.k, error=str(exc), error_kind=type(exc).__name__)
    if det.exists is not Existence.YES:
        return PelletAnalysis(inst.k, detection=det)
    try:
        ann = pellet_annulus(inst, det.x_star, tol, **caps)
    except PelletError as exc:
        return PelletAnalysis(inst.k, detection=det, error=str(exc), error_kind=type(exc).__name__)
    return PelletAnalysis(inst.k, detection=det, annulus=ann)


def analyze_k(p: Polynomial, k: int, tol: float = DEFAULT_TOL, max_iter: int | None = None) -> PelletAnalysis:
    try:
        inst = pellet_instance(p, k)
    except InvalidInputError as exc:
        return PelletAnalysis(k, error=str(exc), error_kind=type(exc).__name__)
    return analyze_instance(inst, tol, max_iter=max_iter)


def analyze_all(p: Polynomial, tol: float = DEFAULT_TOL, max_iter: int | None = None) -> list:
    """Analyses for every Newton-polygon candidate k, sorted by k."""
    cands = candidate_ks(p).candidates
    return [analyze_k(p, k, tol, max_iter) for k in cands if p.coefficients[k] != 0]
