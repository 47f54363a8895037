"""Certification machinery, independent of the Pellet iteration.

* ``all_roots``: every complex zero of a polynomial by Aberth-Ehrlich sweeps.
* ``reference_radii``: r and R of phi by plain bisection, evaluating phi as
  an explicit power sum rather than through the solver's Horner kernels.
* ``count_in_disk``: closed-disk zero counts for checking the k / n-k split.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .detection import one_sign_change_bound
from .errors import ConvergenceError, InvalidInputError
from .poly import PelletInstance, Polynomial

ABERTH_TOL = 1e-14
MAX_SWEEPS = 500


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    residual: float
    sweeps: int
    converged: bool

    def __len__(self) -> int:
        return self.roots.shape[0]


def cauchy_radius(p: Polynomial) -> float:
    """Unique positive root of ``|a_n| x^n - sum_{j<n} |a_j| x^j``; every zero
    of ``p`` lies in the closed disk of this radius."""
    mags = np.abs(p.coefficients) / abs(p.coefficients[-1])
    c = -mags
    c[-1] = 1.0
    if not np.any(c[:-1] < 0):
        return 0.0
    c = np.where(c == 0, 0.0, c)  # drops -0.0
    x = 1.0 + float(mags[:-1].max())
    # Newton from the right on a function convex beyond its root
    for _ in range(200):
        f, d = kernels.horner(c, x)
        x_new = x - f / d
        if not x_new < x:
            break
        if x - x_new <= 1e-12 * x:
            x = x_new
            break
        x = x_new
    return x


def backward_residual(p: Polynomial, roots: np.ndarray) -> float:
    """max_i |p(z_i)| / sum_j |a_j||z_i|^j."""
    a = p.coefficients
    absa = np.abs(a)
    worst = 0.0
    for z in roots:
        value, _ = kernels.horner_complex(a, complex(z))
        scale = kernels.horner(absa, abs(z))[0]
        worst = max(worst, abs(value) / scale if scale > 0 else abs(value))
    return worst


def all_roots(p: Polynomial, tol: float = ABERTH_TOL, max_sweeps: int = MAX_SWEEPS) -> RootSet:
    """All zeros of ``p`` with multiplicity.

    Starting points sit on the Cauchy circle at angles ``2 pi i / n + 0.4``.
    Non-convergence is reported through ``RootSet.converged`` and a warning.
    """
    n = p.degree
    if n < 1:
        raise InvalidInputError("degree must be at least 1")
    a = np.ascontiguousarray(p.coefficients / p.coefficients[-1])
    rho = cauchy_radius(p)
    if rho == 0.0:
        return RootSet(np.zeros(n, dtype=np.complex128), 0.0, 0, True)
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    z = np.ascontiguousarray(rho * np.exp(1j * angles))
    sweeps, converged = kernels.aberth(a, z, tol, max_sweeps)
    residual = backward_residual(p, z)
    if not converged:
        warnings.warn(f"Aberth iteration did not converge in {max_sweeps} sweeps (residual {residual:.3e})", RuntimeWarning)
    return RootSet(z, residual, int(sweeps), bool(converged))


def count_in_disk(roots, radius: float, slack: float = 0.0) -> int:
    """Number of roots with ``|z| <= radius * (1 + slack)``."""
    z = roots.roots if isinstance(roots, RootSet) else np.asarray(roots)
    return int(np.count_nonzero(np.abs(z) <= radius * (1.0 + slack)))


def count_outside_disk(roots, radius: float, slack: float = 0.0) -> int:
    """Number of roots with ``|z| >= radius * (1 - slack)``."""
    z = roots.roots if isinstance(roots, RootSet) else np.asarray(roots)
    return int(np.count_nonzero(np.abs(z) >= radius * (1.0 - slack)))


def count_in_annulus(roots, r: float, R: float, slack: float = 0.0) -> int:
    """Roots strictly inside ``r(1+slack) < |z| < R(1-slack)``."""
    z = roots.roots if isinstance(roots, RootSet) else np.asarray(roots)
    m = np.abs(z)
    return int(np.count_nonzero((m > r * (1.0 + slack)) & (m < R * (1.0 - slack))))


def outer_root_bound(inst: PelletInstance) -> float:
    """A point beyond R: the positive root bound of
    ``sum_{j>k} eta_j x^j - eta_k x^k``, which lies below phi."""
    k = inst.k
    c = np.concatenate(([-inst.eta[k]], inst.eta[k + 1 :]))
    return one_sign_change_bound(c)


def reference_radii(inst: PelletInstance, x_seed: float, tol: float = 1e-15, max_iter: int = 4000) -> tuple[float, float]:
    """Positive roots of phi by bisection on ``[0, x_seed]`` and ``[x_seed, B]``."""
    c = np.ascontiguousarray(inst.phi_coeffs)
    x_seed = float(x_seed)
    if not kernels.power_sum(c, x_seed) < 0:
        raise InvalidInputError("phi(x_seed) must be negative")
    B = outer_root_bound(inst)
    while kernels.power_sum(c, B) <= 0:
        # rounding at the bound itself; step outward
        B *= 1.0 + 1e-8
    if not B > x_seed:
        raise ConvergenceError("no sign change to the right of x_seed", bracket=(x_seed, B))
    lo, hi, _ = kernels.bisect(c, 0.0, x_seed, tol, max_iter)
    r = 0.5 * (lo + hi)
    lo, hi, _ = kernels.bisect(c, x_seed, B, tol, max_iter)
    R = 0.5 * (lo + hi)
    return r, R


def det2_polynomial(matrices) -> np.ndarray:
    """Coefficients (ascending) of det P(z) for a 2x2 matrix polynomial."""
    A = np.asarray(matrices, dtype=np.complex128)
    if A.shape[1:] != (2, 2):
        raise InvalidInputError("det2_polynomial needs 2x2 coefficient matrices")
    e = [[A[:, i, j] for j in range(2)] for i in range(2)]
    return np.convolve(e[0][0], e[1][1]) - np.convolve(e[0][1], e[1][0])


def det_polynomial(matrices) -> np.ndarray:
    """Coefficients (ascending) of det P(z), trailing negligible terms dropped.

    2x2 problems are expanded exactly; larger ones are interpolated from
    determinants at ``n m + 1`` roots of unity on a circle of radius
    ``rho = (||A_0|| / ||A_n||)^(1/n)``, which balances the coefficient sizes.
    """
    A = np.asarray(matrices, dtype=np.complex128)
    n, m = A.shape[0] - 1, A.shape[1]
    if m == 2:
        c = det2_polynomial(A)
    else:
        a0 = np.linalg.norm(A[0])
        an = np.linalg.norm(A[n])
        rho = (a0 / an) ** (1.0 / n) if a0 > 0 and an > 0 else 1.0
        N = n * m + 1
        z = rho * np.exp(2j * np.pi * np.arange(N) / N)
        vals = np.array([np.linalg.det(np.tensordot(zi ** np.arange(n + 1), A, axes=1)) for zi in z])
        c = np.fft.fft(vals) / N
        c = c * rho ** -np.arange(N)
    scale = np.abs(c).max()
    last = len(c) - 1
    while last > 0 and abs(c[last]) <= 1e-13 * scale:
        last -= 1
    return c[: last + 1]
