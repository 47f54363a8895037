import math

import numpy as np
import pytest

from helpers import q_polynomial
from pellet.detection import Existence
from pellet.errors import InvalidInputError, InvalidStartError, SingularMatrixError
from pellet.matrix import (
    MatrixPolynomial,
    NormKind,
    analyze_matrix_k,
    induced_norm,
    inverse_norm_reciprocal,
    lu_factor,
    lu_inverse,
    matrix_annulus,
    matrix_candidate_ks,
    matrix_pellet_instance,
    matrix_polynomial_from_json,
)
from pellet.poly import pellet_instance
from pellet.polygon import analyze_k

KINDS = list(NormKind)


def diag10():
    I = np.eye(2)
    return MatrixPolynomial(np.array([I, 10 * I, I]))


def test_norm_examples():
    assert induced_norm(np.diag([3.0, -4.0]), "one") == 4
    assert induced_norm(np.array([[0.0, 1.0], [0.0, 0.0]]), "inf") == 1
    assert induced_norm(np.array([[3.0, 0.0], [4.0, 0.0]]), "two") == pytest.approx(5, rel=1e-10)


def test_two_norm_matches_svd():
    rng = np.random.default_rng(7)
    for m in (2, 3, 5):
        A = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        assert induced_norm(A, NormKind.TWO) == pytest.approx(np.linalg.norm(A, 2), rel=1e-9)


def test_induced_norm_shape_check():
    with pytest.raises(InvalidInputError):
        induced_norm(np.ones((2, 3)), "one")


def test_lu_reconstructs():
    rng = np.random.default_rng(8)
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    perm, L, U = lu_factor(A)
    np.testing.assert_allclose(L @ U, A[perm], atol=1e-13)
    np.testing.assert_allclose(lu_inverse(A) @ A, np.eye(4), atol=1e-12)


@pytest.mark.parametrize("kind", KINDS)
def test_inverse_norm_reciprocal_identity(kind):
    assert inverse_norm_reciprocal(np.eye(3), kind) == pytest.approx(1.0, rel=1e-12)


def test_inverse_norm_reciprocal_diag():
    assert inverse_norm_reciprocal(np.diag([2.0, 4.0]), "one") == 2.0


def test_singular():
    with pytest.raises(SingularMatrixError):
        inverse_norm_reciprocal(np.array([[1.0, 1.0], [0.0, 0.0]]), "one")


def test_matrix_polynomial_validation():
    with pytest.raises(InvalidInputError):
        MatrixPolynomial(np.zeros((3, 2, 3)))
    with pytest.raises(InvalidInputError):
        MatrixPolynomial(np.array([np.eye(2), np.eye(2)]))
    with pytest.raises(InvalidInputError):
        MatrixPolynomial(np.array([np.zeros((2, 2)), np.eye(2), np.eye(2)]))


def test_json_round_trip():
    P = diag10()
    Q = matrix_polynomial_from_json(P.to_json())
    np.testing.assert_array_equal(P.matrices, Q.matrices)
    with pytest.raises(InvalidInputError):
        matrix_polynomial_from_json({"m": 3, "matrices": P.to_json()["matrices"]})


@pytest.mark.parametrize("kind", KINDS)
def test_diagonal_reduction(kind):
    a = q_polynomial().coefficients
    P = MatrixPolynomial(np.array([c * np.eye(2) for c in a]))
    inst = matrix_pellet_instance(P, 3, kind)
    np.testing.assert_allclose(inst.eta, pellet_instance(q_polynomial(), 3).eta, rtol=1e-9)
    ann = matrix_annulus(P, 3, kind)
    scalar = analyze_k(q_polynomial(), 3).annulus
    assert ann.r == pytest.approx(scalar.r, rel=1e-9)
    assert ann.R == pytest.approx(scalar.R, rel=1e-9)
    assert ann.zero_count == 6


def test_diag10_closed_form():
    ann = matrix_annulus(diag10(), 1, "one")
    assert ann.R == pytest.approx(5 + math.sqrt(24), rel=1e-14)
    # 5 - sqrt(24) loses digits; use the reciprocal form
    assert ann.r == pytest.approx(1 / (5 + math.sqrt(24)), rel=1e-14)
    assert ann.zero_count == 2


def test_weak_middle_coefficient_gives_no():
    I = np.eye(2)
    P = MatrixPolynomial(np.array([I, 0.5 * I, I]))
    assert analyze_matrix_k(P, 1, "one").exists is Existence.NO
    with pytest.raises(InvalidStartError):
        matrix_annulus(P, 1, "one")


def test_singular_ak_reported():
    I = np.eye(2)
    P = MatrixPolynomial(np.array([I, np.array([[1.0, 1.0], [0.0, 0.0]]), I, I]))
    res = analyze_matrix_k(P, 1, "inf")
    assert res.error_kind == "SingularMatrixError"


def test_two_norm_uses_wider_band():
    # eta_1 at the threshold up to a relative 1e-11: decided for 1-norm, not for 2-norm
    I = np.eye(2)
    P = MatrixPolynomial(np.array([I, 2.0 * (1 + 1e-11) * I, I]))
    assert analyze_matrix_k(P, 1, "one").exists is Existence.YES
    assert analyze_matrix_k(P, 1, "two").exists is Existence.INDETERMINATE


def test_matrix_candidates():
    I = np.eye(2)
    P = MatrixPolynomial(np.array([I, np.zeros((2, 2)), 100 * I, np.zeros((2, 2)), I]))
    assert matrix_candidate_ks(P, "one") == (2,)
