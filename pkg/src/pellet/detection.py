"""Decide whether phi has two positive roots.

``phi`` has two positive roots exactly when ``phi(x*) < 0``, where ``x*``
is the unique positive root of

    chi(x) = sum_j (j - k) eta_j x^j,

the numerator of the derivative of ``x^-k phi(x)``. ``chi`` does not depend
on ``eta_k``, so the same ``x*`` also gives the smallest ``eta_k`` that
still separates the zeros: ``sigma(x*) / x*^k`` with ``sigma = phi + 2 eta_k x^k``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, InvalidInputError
from .poly import PelletInstance, eval_phi

DEFAULT_TOL = 1e-12
CHI_MAX_ITER = 200
# Newton steps longer than this fraction of x count as far from the root
_FAR = 0.01


class Existence(str, enum.Enum):
    YES = "yes"
    NO = "no"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ChiPolynomial:
    """Signed dense coefficients of chi, ascending, zero at degree ``k``."""

    coefficients: np.ndarray
    k: int

    @property
    def n(self) -> int:
        return self.coefficients.shape[0] - 1

    def value_deriv(self, x: float) -> tuple[float, float]:
        return kernels.horner(self.coefficients, float(x))

    def __call__(self, x: float) -> float:
        return self.value_deriv(x)[0]


@dataclass(frozen=True)
class Detection:
    exists: Existence
    x_star: float
    phi_at_xstar: float
    threshold: float
    margin: float
    chi_newton_steps: int
    tol_margin: float

    def to_json(self) -> dict:
        return {
            "exists": self.exists.value,
            "x_star": self.x_star,
            "phi_at_xstar": self.phi_at_xstar,
            "threshold": self.threshold,
            "margin": self.margin,
            "chi_newton_steps": self.chi_newton_steps,
            "tol_margin": self.tol_margin,
        }


def build_chi(inst: PelletInstance) -> ChiPolynomial:
    j = np.arange(inst.n + 1, dtype=np.float64)
    c = (j - inst.k) * inst.eta
    c[inst.k] = 0.0
    c.setflags(write=False)
    return ChiPolynomial(c, inst.k)


def one_sign_change_bound(coeffs: np.ndarray) -> float:
    """Upper bound on the positive root of a polynomial whose coefficients
    are <= 0 up to some degree and >= 0 above it.

    With ``P`` the sum of the positive coefficients (lowest such degree
    ``m``) and ``N`` the sum of the magnitudes of the negative ones (highest
    such degree ``l``): if the value at 1 is negative the root is at most
    ``(N/P)^(1/(m-l))``, if positive at most ``(N/P)^(1/n)``, and it is 1
    when the value at 1 vanishes.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    pos = np.flatnonzero(c > 0)
    neg = np.flatnonzero(c < 0)
    if pos.size == 0 or neg.size == 0 or neg[-1] >= pos[0]:
        raise InvalidInputError("coefficients must have exactly one sign change, negatives below positives")
    P = float(c[pos].sum())
    N = float(-c[neg].sum())
    at_one = P - N
    if at_one == 0.0:
        return 1.0
    n = c.shape[0] - 1
    m, ell = int(pos[0]), int(neg[-1])
    expo = 1.0 / (m - ell) if at_one < 0 else 1.0 / n
    return (N / P) ** expo


def positive_root_upper_bound(chi: ChiPolynomial) -> float:
    return one_sign_change_bound(chi.coefficients)


def solve_chi_root(chi: ChiPolynomial, tol: float = DEFAULT_TOL, max_iter: int = CHI_MAX_ITER) -> tuple[float, int]:
    """Positive root of chi by Newton from the right, safeguarded by bisection.

    Returns ``(x_star, steps)``. The returned point is the last iterate
    with ``chi >= 0``, i.e. it never lies left of the root.
    """
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    hi = positive_root_upper_bound(chi)
    fhi, dhi = chi.value_deriv(hi)
    if fhi == 0.0:
        return hi, 0
    lo = 0.0
    steps = 0
    # far from the root chi behaves like x^N and plain Newton only shrinks x
    # by about 1/N per step; lengthened steps are tried there and kept only
    # while they stay right of the root
    stretch = 1.0
    while steps < max_iter:
        if hi - lo <= tol * hi:
            return hi, steps
        x = hi - fhi / dhi if dhi > 0 else lo
        steps += 1
        if dhi > 0 and x >= hi:
            # correction below one ulp of hi
            return hi, steps
        if stretch > 1.0:
            xs = hi - stretch * (hi - x)
            if lo < xs < x:
                fs, ds = chi.value_deriv(xs)
                if fs >= 0:
                    stretch = min(2.0 * stretch, chi.n)
                    step = hi - xs
                    hi, fhi, dhi = xs, fs, ds
                    if fs == 0.0 or step <= tol * hi:
                        return hi, steps
                    continue
                lo = xs
            stretch = 1.0
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
        fx, dx = chi.value_deriv(x)
        if fx < 0:
            lo = x
            continue
        step = hi - x
        if step > _FAR * hi:
            stretch = 2.0
        hi, fhi, dhi = x, fx, dx
        if fx == 0.0 or step <= tol * hi:
            return hi, steps
    raise ConvergenceError(f"chi root not found in {max_iter} steps", bracket=(lo, hi), iterations=steps)


def separation_threshold(inst: PelletInstance, x_star: float) -> float:
    """``sigma(x*) / x*^k``: |a_k| must exceed this for separation at ``k``."""
    if not x_star > 0:
        raise InvalidInputError("x_star must be positive")
    return kernels.sigma_ratio(inst.eta, inst.k, float(x_star))


def detect(inst: PelletInstance, tol: float = DEFAULT_TOL, margin_tol: float | None = None) -> Detection:
    """Three-valued test for two positive roots of phi.

    ``margin_tol`` widens the indeterminate band beyond ``tol`` when the
    coefficients themselves are only known to that relative accuracy.
    """
    chi = build_chi(inst)
    x_star, steps = solve_chi_root(chi, tol)
    phi_star, _ = eval_phi(inst, x_star)
    threshold = separation_threshold(inst, x_star)
    band = max(tol, margin_tol or 0.0)
    tol_margin = band * max(1.0, threshold) * x_star**inst.k
    if phi_star < -tol_margin:
        exists = Existence.YES
    elif phi_star > tol_margin:
        exists = Existence.NO
    else:
        exists = Existence.INDETERMINATE
    return Detection(
        exists=exists,
        x_star=x_star,
        phi_at_xstar=phi_star,
        threshold=threshold,
        margin=float(inst.eta[inst.k]) - threshold,
        chi_newton_steps=steps,
        tol_margin=tol_margin,
    )

