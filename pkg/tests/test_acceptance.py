"""Exit criteria, one test per criterion.

Each check prints a single ``PASS``/``FAIL`` line with its key numbers.
Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import naive_phi, q_polynomial, random_polynomial, term_scale  # noqa: E402
from pellet.detection import Existence, build_chi, detect, solve_chi_root  # noqa: E402
from pellet.matrix import MatrixPolynomial, NormKind, analyze_matrix_k  # noqa: E402
from pellet.oracle import (  # noqa: E402
    all_roots,
    count_in_annulus,
    count_in_disk,
    count_outside_disk,
    det2_polynomial,
    reference_radii,
)
from pellet.poly import PelletInstance, eval_phi, make_polynomial, pellet_instance  # noqa: E402
from pellet.polygon import analyze_k, candidate_ks  # noqa: E402
from pellet.solver import fit_surrogate, fit_trinomial, pellet_annulus  # noqa: E402

pytestmark = pytest.mark.acceptance

COUNT_SLACK = 1e-8


def _line(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}", flush=True)


def _q_pipeline():
    p = q_polynomial()
    inst = pellet_instance(p, 3)
    det = detect(inst, 1e-12)
    ann = pellet_annulus(inst, det.x_star, 1e-12)
    ref = reference_radii(inst, det.x_star)
    roots = all_roots(p)
    return det, ann, ref, roots


def check_q_end_to_end():
    _q_pipeline()  # compile and warm caches; timing below is steady state
    t0 = time.perf_counter()
    det, ann, (r_ref, R_ref), roots = _q_pipeline()
    elapsed = time.perf_counter() - t0
    err = max(abs(ann.r - r_ref) / r_ref, abs(ann.R - R_ref) / R_ref)
    inside = count_in_disk(roots, ann.r, COUNT_SLACK)
    outside = count_outside_disk(roots, ann.R, COUNT_SLACK)
    between = count_in_annulus(roots, ann.r, ann.R)
    ok = (
        det.exists is Existence.YES
        and err <= 1e-10
        and roots.converged
        and (inside, outside, between) == (3, 5, 0)
        and elapsed < 1.0
    )
    detail = (
        f"r={ann.r:.15g} R={ann.R:.15g} rel.err vs bisection {err:.1e}; "
        f"oracle {inside} inside / {outside} outside / {between} between; {elapsed * 1e3:.2f} ms"
    )
    return ok, detail


def check_iteration_counts():
    inst = pellet_instance(q_polynomial(), 3)
    _, chi_steps = solve_chi_root(build_chi(inst), 1e-12)
    det = detect(inst, 1e-12)
    ann = pellet_annulus(inst, det.x_star, 1e-12)
    outer_r, outer_R = ann.outer_iterations

    def tail_nonincreasing(c):
        t = c[2:]
        return all(a >= b for a, b in zip(t, t[1:]))

    ok = (
        chi_steps <= 10
        and max(outer_r, outer_R) <= 12
        and tail_nonincreasing(ann.inner_counts_R)
        and tail_nonincreasing(ann.inner_counts_r)
    )
    detail = (
        f"chi steps {chi_steps}; outer r/R {outer_r}/{outer_R}; "
        f"inner R {list(ann.inner_counts_R)} r {list(ann.inner_counts_r)}"
    )
    return ok, detail


def check_monotone_suite(n_poly=200, seed=20240601):
    rng = np.random.default_rng(seed)
    violations = []
    annuli = 0
    worst = 0.0
    for trial in range(n_poly):
        p = random_polynomial(rng, n_min=3, n_max=30)
        for k in candidate_ks(p).candidates:
            res = analyze_k(p, k)
            if res.exists is not Existence.YES:
                continue
            if res.annulus is None:
                violations.append((trial, k, res.error))
                continue
            annuli += 1
            ann = res.annulus
            inst = pellet_instance(p, k)
            if np.any(np.diff(ann.iterates_R) < 0) or np.any(np.diff(ann.iterates_r) > 0):
                violations.append((trial, k, "non-monotone"))
            for x in ann.iterates_R + ann.iterates_r:
                if naive_phi(inst, x) > 1e-10 * term_scale(inst, x):
                    violations.append((trial, k, f"phi({x}) > 0"))
            r_ref, R_ref = reference_radii(inst, ann.x_start)
            err = max(abs(ann.r - r_ref) / r_ref, abs(ann.R - R_ref) / R_ref)
            worst = max(worst, err)
            if err > 1e-9:
                violations.append((trial, k, f"radius error {err:.2e}"))
    ok = not violations and annuli > 0
    detail = f"{n_poly} polynomials, {annuli} annuli, worst rel.err {worst:.1e}, violations {violations[:3]}"
    return ok, detail


def _fd_derivative(inst, x):
    # central difference, step ~ cbrt(eps) * x
    h = np.cbrt(np.finfo(float).eps) * max(x, 1e-3)
    return (naive_phi(inst, x + h) - naive_phi(inst, x - h)) / (2 * h)


def _dscale(inst, x):
    j = np.arange(inst.n + 1)
    return float(np.sum(j[1:] * inst.eta[1:] * x ** (j[1:] - 1)))


def _fit_points(n_inst=40, seed=7):
    """(instance, fit point, R) triples: q at 1.02 plus every outer iterate of random instances."""
    q3 = pellet_instance(q_polynomial(), 3)
    pts = [(q3, 1.02, reference_radii(q3, 1.02)[1])]
    rng = np.random.default_rng(seed)
    found = 0
    while found < n_inst:
        p = random_polynomial(rng, n_min=3, n_max=20)
        for k in candidate_ks(p).candidates:
            res = analyze_k(p, k)
            if res.annulus is None:
                continue
            found += 1
            inst = pellet_instance(p, k)
            _, R_ref = reference_radii(inst, res.annulus.x_start)
            for x in res.annulus.iterates_R[:-1] + res.annulus.iterates_r[1:-1]:
                pts.append((inst, float(x), R_ref))
    return pts


def check_domination_tangency():
    points = _fit_points()
    bad = []
    worst_tan = worst_fd = 0.0
    for inst, xb, R_ref in points:
        tri = fit_trinomial(inst, xb)
        sur = fit_surrogate(tri, xb)
        top = 1.5 * R_ref
        for x in np.linspace(0.0, top, 241):
            scale = term_scale(inst, x) + tri.scale(x)
            phi = naive_phi(inst, x)
            f = tri(x)
            if phi > f + 1e-10 * scale:
                bad.append(("phi>f", xb, x))
            h = sur(x)
            if math.isfinite(h) and f > h + 1e-10 * scale:
                bad.append(("f>h", xb, x))
        d_phi = eval_phi(inst, xb)[1]
        fd = _fd_derivative(inst, xb)
        dscale = _dscale(inst, xb)
        worst_fd = max(worst_fd, abs(fd - d_phi) / dscale)
        if abs(fd - d_phi) > 1e-6 * dscale:
            bad.append(("fd", xb, fd, d_phi))
        tan = abs(tri.value_deriv(xb)[1] - d_phi) / dscale
        worst_tan = max(worst_tan, tan)
        if tan > 1e-8:
            bad.append(("tangency", xb, tan))
    ok = not bad
    detail = (
        f"{len(points)} fit points; worst |f'-phi'|/scale {worst_tan:.1e}; "
        f"worst FD check {worst_fd:.1e}; failures {bad[:3]}"
    )
    return ok, detail


def check_threshold_sharpness(n_shapes=100, seed=99):
    rng = np.random.default_rng(seed)
    fails = []
    worst_min = 0.0
    for trial in range(n_shapes):
        n = int(rng.integers(3, 21))
        k = int(rng.integers(1, n))
        eta = 10.0 ** rng.uniform(-2, 2, n + 1)
        eta[n] = 1.0
        base = PelletInstance(eta, k)
        d = detect(base)
        T = d.threshold
        up = detect(base.with_eta_k(T * (1 + 1e-3))).exists
        down = detect(base.with_eta_k(T * (1 - 1e-3))).exists
        if up is not Existence.YES or down is not Existence.NO:
            fails.append((trial, up.value, down.value))
        # independent check: T is the minimum of sigma(x)/x^k
        xs = d.x_star * np.exp(np.linspace(-1, 1, 401))
        ratios = [(naive_phi(base, x) + 2 * eta[k] * x**k) / x**k for x in xs]
        gap = (T - min(ratios)) / T
        worst_min = max(worst_min, gap)
        if gap > 1e-12:
            fails.append((trial, "min", gap))
    ok = not fails
    detail = f"{n_shapes} shapes flip at +-1e-3; threshold below grid minimum by at most {worst_min:.1e}; failures {fails[:3]}"
    return ok, detail


def check_polygon_soundness(n_poly=500, seed=4242):
    rng = np.random.default_rng(seed)
    missing = []
    separations = 0
    for trial in range(n_poly):
        p = random_polynomial(rng, n_min=3, n_max=25)
        cands = set(candidate_ks(p).candidates)
        for k in range(1, p.degree):
            if p.coefficients[k] == 0:
                continue
            if detect(pellet_instance(p, k)).exists is Existence.YES:
                separations += 1
                if k not in cands:
                    missing.append((trial, k))
    ok = not missing
    detail = f"{n_poly} polynomials, {separations} separating k, missing from candidates: {missing[:5]}"
    return ok, detail


def _random_matrix_poly(rng):
    """2x2 matrix polynomial whose A_k dominates in every norm (retries until it does)."""
    while True:
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n))
        A = (rng.standard_normal((n + 1, 2, 2)) + 1j * rng.standard_normal((n + 1, 2, 2))) * 10.0 ** rng.uniform(
            -1, 1, (n + 1, 1, 1)
        )
        A[k] *= 10.0 ** rng.uniform(1.5, 3.0)
        P = MatrixPolynomial(A)
        results = {kind: analyze_matrix_k(P, k, kind) for kind in NormKind}
        if all(r.annulus is not None for r in results.values()):
            return P, k, results


def check_matrix_desk_scale(n_poly=50, seed=31337):
    rng = np.random.default_rng(seed)
    bad = []
    for trial in range(n_poly):
        P, k, results = _random_matrix_poly(rng)
        roots = all_roots(make_polynomial(det2_polynomial(P.matrices)))
        if not roots.converged:
            bad.append((trial, "oracle"))
            continue
        for kind, res in results.items():
            ann = res.annulus
            inside = count_in_disk(roots, ann.r, COUNT_SLACK)
            between = count_in_annulus(roots, ann.r, ann.R, COUNT_SLACK)
            if inside != 2 * k or between != 0 or ann.zero_count != 2 * k:
                bad.append((trial, kind.value, inside, between, 2 * k))
    # diagonal reduction: A_j = a_j I reproduces the scalar pipeline
    drng = np.random.default_rng(seed + 1)
    polys = [q_polynomial()] + [random_polynomial(drng, n_max=12, p_zero=0.0) for _ in range(20)]
    worst = 0.0
    compared = 0
    for p in polys:
        P = MatrixPolynomial(np.array([a * np.eye(2) for a in p.coefficients]))
        for k in candidate_ks(p).candidates:
            scalar = analyze_k(p, k)
            if scalar.annulus is None:
                continue
            for kind in NormKind:
                mat = analyze_matrix_k(P, k, kind)
                if mat.annulus is None:
                    bad.append(("diag", k, kind.value, mat.exists))
                    continue
                compared += 1
                err = max(
                    abs(mat.annulus.r - scalar.annulus.r) / scalar.annulus.r,
                    abs(mat.annulus.R - scalar.annulus.R) / scalar.annulus.R,
                )
                worst = max(worst, err)
                if err > 1e-12:
                    bad.append(("diag", k, kind.value, err))
    ok = not bad
    detail = (
        f"{n_poly} random 2x2 problems x 3 norms; diagonal reduction {compared} comparisons, "
        f"worst rel.diff {worst:.1e}; failures {bad[:3]}"
    )
    return ok, detail


CRITERIA = [
    ("q example end-to-end", check_q_end_to_end),
    ("iteration-count envelopes", check_iteration_counts),
    ("monotone-bound suite", check_monotone_suite),
    ("domination and tangency", check_domination_tangency),
    ("threshold sharpness", check_threshold_sharpness),
    ("Newton-polygon soundness", check_polygon_soundness),
    ("matrix desk-scale", check_matrix_desk_scale),
]


@pytest.mark.parametrize("name, check", CRITERIA, ids=[c[0].replace(" ", "-") for c in CRITERIA])
def test_criterion(name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print()
        _line(name, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, check in CRITERIA:
        ok, detail = check()
        _line(name, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
