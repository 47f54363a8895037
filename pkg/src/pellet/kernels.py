"""Hot numeric loops.

Every kernel has two implementations: a scalar loop compiled with numba
and a numpy version. The numba path is used when numba imports and the
environment variable ``PELLET_DISABLE_NUMBA`` is unset or false. Both
namespaces stay importable (``NUMBA`` may be None) so the benchmark can
time them side by side.

Coefficient arrays are always ascending in degree.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = numba is not None and not _env_flag("PELLET_DISABLE_NUMBA")


# ---------------------------------------------------------------------------
# scalar loops (compiled by numba, never called uncompiled)
# ---------------------------------------------------------------------------


def _horner_loop(c, x):
    n = c.shape[0] - 1
    p = c[n]
    dp = 0.0
    for j in range(n - 1, -1, -1):
        dp = dp * x + p
        p = p * x + c[j]
    return p, dp


def _split_loop(c, k, x):
    # phi1 = sum_{j>k} c_j x^j, phi2 = sum_{j<=k} c_j x^j
    n = c.shape[0] - 1
    p1 = c[n]
    d1 = 0.0
    for j in range(n - 1, k, -1):
        d1 = d1 * x + p1
        p1 = p1 * x + c[j]
    # p1 currently holds sum_{j>k} c_j x^{j-k-1}
    xk1 = 1.0
    for _ in range(k + 1):
        xk1 *= x
    d1 = d1 * xk1 + (k + 1) * p1 * (xk1 / x)
    p1 = p1 * xk1
    p2 = c[k]
    d2 = 0.0
    for j in range(k - 1, -1, -1):
        d2 = d2 * x + p2
        p2 = p2 * x + c[j]
    return p1, d1, p2, d2


def _sigma_ratio_loop(eta, k, x):
    # sigma(x) / x^k without forming x^k: Horner in x above k, in 1/x below k
    n = eta.shape[0] - 1
    hi = 0.0
    for j in range(n, k, -1):
        hi = (hi + eta[j]) * x
    lo = 0.0
    u = 1.0 / x
    for j in range(0, k):
        lo = (lo + eta[j]) * u
    return hi + lo


def _trinomial_terms_loop(eta, k, x):
    # term values alpha*x^n, beta*x^k, gamma of the tangent trinomial at x
    n = eta.shape[0] - 1
    a = 0.0
    g_hi = 0.0
    g_lo = 0.0
    s_lo = 0.0
    xj = 1.0
    xk = 1.0
    for j in range(n + 1):
        t = eta[j] * xj
        if j < k:
            g_lo += (k - j) * t
            s_lo += j * t
        elif j == k:
            xk = xj
        else:
            a += j * t
            g_hi += (n - j) * t
        xj *= x
    return a / n, eta[k] * xk - s_lo / k, g_hi / n + g_lo / k


def _power_sum_loop(c, x):
    s = 0.0
    for j in range(c.shape[0]):
        s += c[j] * x**j
    return s


def _bisect_loop(c, lo, hi, tol, max_iter):
    # the power sum is inlined: numba cannot cache a kernel that closes over
    # another compiled function
    m = c.shape[0]
    flo = 0.0
    for j in range(m):
        flo += c[j] * lo**j
    steps = 0
    while steps < max_iter:
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * hi or mid <= lo or mid >= hi:
            break
        fm = 0.0
        for j in range(m):
            fm += c[j] * mid**j
        if (fm > 0.0) == (flo > 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
        steps += 1
    return lo, hi, steps


def _horner_complex_loop(c, z):
    n = c.shape[0] - 1
    p = c[n]
    dp = 0.0 + 0.0j
    for j in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[j]
    return p, dp


def _aberth_loop(c, z, tol, max_sweeps):
    # Gauss-Seidel Aberth-Ehrlich sweeps; z is updated in place
    n = z.shape[0]
    m = c.shape[0]
    noise = 4.0 * n * 2.220446049250313e-16
    done = np.zeros(n, dtype=np.bool_)
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        sweeps += 1
        all_done = True
        for i in range(n):
            if done[i]:
                continue
            # p, p' and the term-magnitude sum by Horner (inlined, see _bisect_loop)
            zi = z[i]
            az = abs(zi)
            p = c[m - 1]
            dp = 0.0 + 0.0j
            scale = abs(c[m - 1])
            for j in range(m - 2, -1, -1):
                dp = dp * zi + p
                p = p * zi + c[j]
                scale = scale * az + abs(c[j])
            # residual at rounding level: further corrections are noise
            # (this is what stops clusters and multiple roots)
            if abs(p) <= noise * scale:
                done[i] = True
                continue
            s = 0.0 + 0.0j
            for j in range(n):
                if j != i:
                    s += 1.0 / (zi - z[j])
            den = dp - p * s
            if den == 0.0:
                w = 1e-8 * (az + 1.0) + 0.0j
            else:
                w = p / den
            z[i] = zi - w
            if abs(w) <= tol * abs(z[i]):
                done[i] = True
            else:
                all_done = False
        if all_done:
            converged = True
            break
    return sweeps, converged


# ---------------------------------------------------------------------------
# numpy versions
# ---------------------------------------------------------------------------


def _horner_numpy(c, x):
    n = c.shape[0] - 1
    powers = x ** np.arange(n + 1, dtype=np.float64)
    return float(c @ powers), float((np.arange(1, n + 1) * c[1:]) @ powers[:-1])


def _split_numpy(c, k, x):
    n = c.shape[0] - 1
    j = np.arange(n + 1, dtype=np.float64)
    powers = x**j
    dpowers = j * x ** np.maximum(j - 1.0, 0.0)
    hi = slice(k + 1, None)
    lo = slice(0, k + 1)
    return (
        float(c[hi] @ powers[hi]),
        float(c[hi] @ dpowers[hi]),
        float(c[lo] @ powers[lo]),
        float(c[lo] @ dpowers[lo]),
    )


def _sigma_ratio_numpy(eta, k, x):
    rel = np.arange(eta.shape[0], dtype=np.float64) - k
    terms = eta * x**rel
    return float(terms[:k].sum() + terms[k + 1 :].sum())


def _trinomial_terms_numpy(eta, k, x):
    n = eta.shape[0] - 1
    j = np.arange(n + 1, dtype=np.float64)
    t = eta * x**j
    lo, hi = t[:k], t[k + 1 :]
    a = float((j[k + 1 :] * hi).sum()) / n
    g = float(((n - j[k + 1 :]) * hi).sum()) / n + float(((k - j[:k]) * lo).sum()) / k
    b = float(t[k]) - float((j[:k] * lo).sum()) / k
    return a, b, g


def _power_sum_numpy(c, x):
    return float(c @ (x ** np.arange(c.shape[0], dtype=np.float64)))


def _horner_complex_numpy(c, z):
    n = c.shape[0] - 1
    powers = z ** np.arange(n + 1)
    return complex(c @ powers), complex((np.arange(1, n + 1) * c[1:]) @ powers[:-1])


def _bisect_numpy(c, lo, hi, tol, max_iter):
    flo = _power_sum_numpy(c, lo)
    steps = 0
    while steps < max_iter:
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * hi or mid <= lo or mid >= hi:
            break
        fm = _power_sum_numpy(c, mid)
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
        steps += 1
    return lo, hi, steps


def _aberth_numpy(c, z, tol, max_sweeps):
    n = z.shape[0]
    noise = 4.0 * n * np.finfo(np.float64).eps
    absc = np.abs(c)
    done = np.zeros(n, dtype=bool)
    for sweep in range(1, max_sweeps + 1):
        for i in np.flatnonzero(~done):
            p, dp = _horner_complex_numpy(c, z[i])
            if abs(p) <= noise * _power_sum_numpy(absc, abs(z[i])):
                done[i] = True
                continue
            diff = z[i] - np.delete(z, i)
            s = complex(np.sum(1.0 / diff))
            den = dp - p * s
            w = p / den if den != 0 else complex(1e-8 * (abs(z[i]) + 1.0))
            z[i] -= w
            done[i] = abs(w) <= tol * abs(z[i])
        if done.all():
            return sweep, True
    return max_sweeps, False


NUMPY = SimpleNamespace(
    name="numpy",
    horner=_horner_numpy,
    split=_split_numpy,
    sigma_ratio=_sigma_ratio_numpy,
    trinomial_terms=_trinomial_terms_numpy,
    power_sum=_power_sum_numpy,
    bisect=_bisect_numpy,
    horner_complex=_horner_complex_numpy,
    aberth=_aberth_numpy,
)


def _build_numba():
    jit = numba.njit(cache=True)
    return SimpleNamespace(
        name="numba",
        horner=jit(_horner_loop),
        split=jit(_split_loop),
        sigma_ratio=jit(_sigma_ratio_loop),
        trinomial_terms=jit(_trinomial_terms_loop),
        power_sum=jit(_power_sum_loop),
        bisect=jit(_bisect_loop),
        horner_complex=jit(_horner_complex_loop),
        aberth=jit(_aberth_loop),
    )


NUMBA = _build_numba() if numba is not None else None

active = NUMBA if USE_NUMBA else NUMPY

horner = active.horner
split = active.split
sigma_ratio = active.sigma_ratio
trinomial_terms = active.trinomial_terms
power_sum = active.power_sum
bisect = active.bisect
horner_complex = active.horner_complex
aberth = active.aberth
