"""Complex polynomials and the real auxiliary polynomial phi built from them.

For ``p(z) = a_n z^n + ... + a_0`` and an index ``k`` the auxiliary
polynomial is

    phi(x) = x^n + eta_{n-1} x^{n-1} + ... - eta_k x^k + ... + eta_0,
    eta_j  = |a_j| / |a_n|.

``phi`` splits as ``phi1 + phi2`` with ``phi1`` holding the terms above
degree ``k`` and ``phi2`` the rest (including the negative ``-eta_k x^k``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import InvalidInputError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial with ascending coefficients ``a_0 .. a_n``."""

    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _frozen(np.asarray(self.coefficients, dtype=np.complex128)))

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coefficients)

    def to_json(self) -> dict:
        return {"coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients]}


def _as_complex(c) -> complex:
    if isinstance(c, (list, tuple, np.ndarray)):
        if len(c) != 2:
            raise InvalidInputError(f"coefficient pair must be [re, im], got {c!r}")
        return complex(float(c[0]), float(c[1]))
    return complex(c)


def make_polynomial(coeffs: Iterable) -> Polynomial:
    """Validate and build a :class:`Polynomial`.

    ``coeffs`` is ascending in degree; entries are complex numbers or
    ``(re, im)`` pairs.
    """
    values = [_as_complex(c) for c in coeffs]
    if not values:
        raise InvalidInputError("polynomial needs at least one coefficient")
    a = np.array(values, dtype=np.complex128)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("coefficients must be finite")
    if a[-1] == 0:
        raise InvalidInputError("leading coefficient is zero")
    return Polynomial(a)


@dataclass(frozen=True)
class PelletInstance:
    """Nonnegative, monic coefficient vector ``eta`` with distinguished index ``k``.

    ``phi_coeffs`` is ``eta`` with the sign at index ``k`` flipped.
    """

    eta: np.ndarray
    k: int
    phi_coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=np.float64)
        if eta.ndim != 1 or eta.shape[0] < 3:
            raise InvalidInputError("eta must be a vector of length >= 3 (degree >= 2)")
        n = eta.shape[0] - 1
        k = int(self.k)
        if not 1 <= k <= n - 1:
            raise InvalidInputError(f"k={k} out of range 1..{n - 1}")
        if not np.all(np.isfinite(eta)) or np.any(eta < 0):
            raise InvalidInputError("eta must be finite and nonnegative")
        if eta[0] <= 0 or eta[k] <= 0:
            raise InvalidInputError("eta_0 and eta_k must be positive")
        if eta[n] != 1.0:
            raise InvalidInputError("eta must be normalized so that eta_n = 1")
        c = eta.copy()
        c[k] = -c[k]
        object.__setattr__(self, "eta", _frozen(eta))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "phi_coeffs", _frozen(c))

    @property
    def n(self) -> int:
        return self.eta.shape[0] - 1

    @property
    def is_trinomial(self) -> bool:
        """True when phi only has the terms of degree 0, k and n."""
        inner = np.delete(self.eta[1:-1], self.k - 1)
        return not np.any(inner)

    def with_eta_k(self, value: float) -> "PelletInstance":
        eta = self.eta.copy()
        eta[self.k] = value
        return PelletInstance(eta, self.k)


def pellet_instance(p: Polynomial, k: int) -> PelletInstance:
    """Auxiliary-polynomial instance of ``p`` at index ``k``."""
    n = p.degree
    if n < 3:
        raise InvalidInputError(f"scalar Pellet analysis needs degree >= 3, got {n}")
    if not 1 <= k <= n - 1:
        raise InvalidInputError(f"k={k} out of range 1..{n - 1}")
    mags = np.abs(p.coefficients)  # hypot, no overflow in the squares
    if mags[0] == 0 or mags[k] == 0:
        raise InvalidInputError("a_0 and a_k must be nonzero")
    eta = mags / mags[n]
    eta[n] = 1.0
    return PelletInstance(eta, k)


def _check_x(x: float, strict: bool = False) -> float:
    x = float(x)
    if not np.isfinite(x) or x < 0 or (strict and x == 0):
        raise InvalidInputError(f"x must be {'positive' if strict else 'nonnegative'}, got {x}")
    return x


def eval_phi(inst: PelletInstance, x: float) -> tuple[float, float]:
    """Return ``(phi(x), phi'(x))`` from one Horner pass."""
    return kernels.horner(inst.phi_coeffs, _check_x(x))


def eval_phi_split(inst: PelletInstance, x: float) -> tuple[float, float, float, float]:
    """Return ``(phi1, phi1', phi2, phi2')`` at ``x > 0``."""
    return kernels.split(inst.phi_coeffs, inst.k, _check_x(x, strict=True))


def phi_scale(inst: PelletInstance, x: float) -> float:
    """Sum of the term magnitudes ``sum_j eta_j x^j``.

    The rounding error of any evaluation of phi at ``x`` is a small
    multiple of this, so it is the natural yardstick for slack.
    """
    return kernels.horner(inst.eta, _check_x(x))[0]


def load_polynomial(path) -> Polynomial:
    data = json.loads(Path(path).read_text())
    return polynomial_from_json(data)


def polynomial_from_json(data) -> Polynomial:
    if not isinstance(data, dict) or "coefficients" not in data:
        raise InvalidInputError('polynomial JSON must be an object with a "coefficients" list')
    coeffs = data["coefficients"]
    if not isinstance(coeffs, list):
        raise InvalidInputError('"coefficients" must be a list of [re, im] pairs')
    return make_polynomial(coeffs)


def polynomial_from_real(coeffs: Sequence[float]) -> Polynomial:
    return make_polynomial([complex(c) for c in coeffs])
