"""Shared generators and reference helpers for the test suite."""

import numpy as np

from pellet.poly import make_polynomial

Q_COEFFS = [-4, 1 + 1j, -2, 15, 0.5, 0, 3, 1, 1]


def q_polynomial():
    return make_polynomial(Q_COEFFS)


def random_polynomial(rng, n_min=3, n_max=30, decades=3.0, p_zero=0.1):
    """Coefficients with log-uniform magnitudes 10^U(-decades, decades) and
    uniform phases; interior coefficients vanish with probability p_zero."""
    n = int(rng.integers(n_min, n_max + 1))
    mags = 10.0 ** rng.uniform(-decades, decades, n + 1)
    phases = rng.uniform(0, 2 * np.pi, n + 1)
    a = mags * np.exp(1j * phases)
    interior = rng.random(n + 1) < p_zero
    interior[0] = interior[n] = False
    a[interior] = 0
    return make_polynomial(a)


def naive_phi(inst, x):
    """phi(x) as an explicit power sum (exact-ish reference)."""
    return float(sum(c * x**j for j, c in enumerate(inst.phi_coeffs)))


def term_scale(inst, x):
    return float(sum(e * x**j for j, e in enumerate(inst.eta)))
