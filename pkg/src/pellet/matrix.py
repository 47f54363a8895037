"""Generalized Pellet bounds for matrix polynomials.

For ``P(z) = A_n z^n + ... + A_0`` the auxiliary polynomial uses induced
norms: ``eta_j = ||A_j|| / ||A_n||`` and ``eta_k = ||A_k^-1||^-1 / ||A_n||``.
When it has two positive roots r < R, exactly ``k m`` eigenvalues lie in
the closed disk of radius r and none in ``r < |z| < R``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .detection import DEFAULT_TOL, Existence, detect
from .errors import InvalidInputError, InvalidStartError, SingularMatrixError
from .poly import PelletInstance
from .polygon import PelletAnalysis, analyze_instance, candidates_from_magnitudes
from .solver import AnnulusResult, pellet_annulus

POWER_TOL = 1e-10
POWER_MAX_ITER = 20000
_EPS = np.finfo(np.float64).eps


class NormKind(str, enum.Enum):
    ONE = "one"
    INF = "inf"
    TWO = "two"


@dataclass(frozen=True)
class MatrixPolynomial:
    matrices: np.ndarray  # shape (n + 1, m, m), ascending degree

    def __post_init__(self):
        A = np.array(self.matrices, dtype=np.complex128)
        if A.ndim != 3 or A.shape[1] != A.shape[2]:
            raise InvalidInputError("matrices must have shape (n+1, m, m)")
        if A.shape[0] < 3:
            raise InvalidInputError("matrix polynomial needs degree n >= 2")
        if not np.all(np.isfinite(A)):
            raise InvalidInputError("matrix entries must be finite")
        if not np.any(A[0]):
            raise InvalidInputError("A_0 must be nonzero")
        if not np.any(A[-1]):
            raise InvalidInputError("A_n must be nonzero")
        A.setflags(write=False)
        object.__setattr__(self, "matrices", A)

    @property
    def m(self) -> int:
        return self.matrices.shape[1]

    @property
    def n(self) -> int:
        return self.matrices.shape[0] - 1

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "matrices": [[[[float(v.real), float(v.imag)] for v in row] for row in A] for A in self.matrices],
        }


def matrix_polynomial_from_json(data) -> MatrixPolynomial:
    try:
        m = int(data["m"])
        mats = data["matrices"]
        A = np.array([[[complex(v[0], v[1]) for v in row] for row in M] for M in mats], dtype=np.complex128)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise InvalidInputError(f"malformed matrix polynomial JSON: {exc}") from exc
    if A.ndim != 3 or A.shape[1:] != (m, m):
        raise InvalidInputError(f"every matrix must be {m}x{m}")
    return MatrixPolynomial(A)


def load_matrix_polynomial(path) -> MatrixPolynomial:
    return matrix_polynomial_from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# small dense linear algebra
# ---------------------------------------------------------------------------


def lu_factor(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """LU with partial pivoting: returns ``(perm, L, U)`` with ``A[perm] = L @ U``.

    Raises SingularMatrixError when a pivot falls to ``m * eps * ||A||_inf``.
    """
    U = np.array(A, dtype=np.complex128)
    m = U.shape[0]
    if U.shape != (m, m):
        raise InvalidInputError("lu_factor needs a square matrix")
    scale = float(np.abs(U).sum(axis=1).max()) if m else 0.0
    cutoff = m * _EPS * scale
    L = np.eye(m, dtype=np.complex128)
    perm = np.arange(m)
    for j in range(m):
        p = j + int(np.argmax(np.abs(U[j:, j])))
        if abs(U[p, j]) <= cutoff:
            raise SingularMatrixError("matrix is singular to working precision")
        if p != j:
            U[[j, p]] = U[[p, j]]
            L[[j, p], :j] = L[[p, j], :j]
            perm[[j, p]] = perm[[p, j]]
        L[j + 1 :, j] = U[j + 1 :, j] / U[j, j]
        U[j + 1 :, j:] -= np.outer(L[j + 1 :, j], U[j, j:])
        U[j + 1 :, j] = 0.0
    return perm, L, U


def lu_inverse(A) -> np.ndarray:
    perm, L, U = lu_factor(A)
    m = L.shape[0]
    X = np.eye(m, dtype=np.complex128)[perm]
    # forward substitution, unit lower triangular
    for i in range(m):
        X[i] -= L[i, :i] @ X[:i]
    for i in range(m - 1, -1, -1):
        X[i] = (X[i] - U[i, i + 1 :] @ X[i + 1 :]) / U[i, i]
    return X


def _largest_singular_value(A, tol=POWER_TOL, max_iter=POWER_MAX_ITER, seed=0x5EED):
    A = np.asarray(A, dtype=np.complex128)
    B = A.conj().T @ A
    if not np.any(B):
        return 0.0
    rng = np.random.default_rng(seed)
    m = B.shape[0]
    best = 0.0
    for _attempt in range(2):
        v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(max_iter):
            w = B @ v
            lam = float(np.vdot(v, w).real)
            nw = np.linalg.norm(w)
            if nw == 0.0:
                break
            if np.linalg.norm(w - lam * v) <= tol * lam:
                return float(np.sqrt(max(lam, best)))
            v = w / nw
        # stagnated: keep the estimate (a lower bound) and restart once
        best = max(best, lam)
    return float(np.sqrt(best))


def induced_norm(A, kind: NormKind | str) -> float:
    kind = NormKind(kind)
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError("induced_norm needs a square matrix")
    if kind is NormKind.ONE:
        return float(np.abs(A).sum(axis=0).max())
    if kind is NormKind.INF:
        return float(np.abs(A).sum(axis=1).max())
    return _largest_singular_value(A)


def inverse_norm_reciprocal(A, kind: NormKind | str) -> float:
    """``1 / ||A^-1||`` via an explicit LU-based inverse."""
    return 1.0 / induced_norm(lu_inverse(A), kind)


# ---------------------------------------------------------------------------
# Pellet machinery
# ---------------------------------------------------------------------------


def matrix_pellet_instance(P: MatrixPolynomial, k: int, kind: NormKind | str) -> PelletInstance:
    n = P.n
    if not 1 <= k <= n - 1:
        raise InvalidInputError(f"k={k} out of range 1..{n - 1}")
    norms = np.array([induced_norm(A, kind) for A in P.matrices])
    lead = norms[n]
    eta = norms / lead
    eta[n] = 1.0
    eta[k] = inverse_norm_reciprocal(P.matrices[k], kind) / lead
    return PelletInstance(eta, k)


def _margin_tol(kind) -> float | None:
    # power-iteration norms carry ~POWER_TOL relative error
    return POWER_TOL if NormKind(kind) is NormKind.TWO else None


def analyze_matrix_k(
    P: MatrixPolynomial,
    k: int,
    kind: NormKind | str,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> PelletAnalysis:
    try:
        inst = matrix_pellet_instance(P, k, kind)
    except (InvalidInputError, SingularMatrixError) as exc:
        return PelletAnalysis(k, error=str(exc), error_kind=type(exc).__name__)
    res = analyze_instance(inst, tol, _margin_tol(kind), max_iter)
    if res.annulus is not None:
        res = replace(res, annulus=replace(res.annulus, zero_count=k * P.m))
    return res


def matrix_candidate_ks(P: MatrixPolynomial, kind: NormKind | str) -> tuple:
    """Newton-polygon screen for the matrix case.

    Interior points use ``||A_j^-1||^-1`` (0 for singular ``A_j``). Those
    values never exceed ``||A_j||``, so an index that separates is still a
    vertex of this hull.
    """
    n = P.n
    w = np.empty(n + 1)
    w[0] = induced_norm(P.matrices[0], kind)
    w[n] = induced_norm(P.matrices[n], kind)
    for j in range(1, n):
        try:
            w[j] = inverse_norm_reciprocal(P.matrices[j], kind)
        except SingularMatrixError:
            w[j] = 0.0
    return candidates_from_magnitudes(w).candidates


def matrix_annulus(P: MatrixPolynomial, k: int, kind: NormKind | str, tol: float = DEFAULT_TOL) -> AnnulusResult:
    inst = matrix_pellet_instance(P, k, kind)
    det = detect(inst, tol, _margin_tol(kind))
    if det.exists is not Existence.YES:
        raise InvalidStartError(f"no Pellet separation at k={k} (detection: {det.exists.value})")
    return replace(pellet_annulus(inst, det.x_star, tol), zero_count=k * P.m)
