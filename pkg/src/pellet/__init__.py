"""Pellet annulus bounds for polynomial and matrix-polynomial zeros."""

from .detection import (
    ChiPolynomial,
    Detection,
    Existence,
    build_chi,
    detect,
    positive_root_upper_bound,
    separation_threshold,
    solve_chi_root,
)
from .errors import (
    ConvergenceError,
    InvalidInputError,
    InvalidStartError,
    PelletError,
    SingularMatrixError,
)
from .matrix import (
    MatrixPolynomial,
    NormKind,
    induced_norm,
    inverse_norm_reciprocal,
    matrix_annulus,
    matrix_pellet_instance,
)
from .oracle import RootSet, all_roots, count_in_disk, reference_radii
from .poly import (
    PelletInstance,
    Polynomial,
    eval_phi,
    eval_phi_split,
    make_polynomial,
    pellet_instance,
)
from .polygon import PelletAnalysis, PolygonCandidates, analyze_all, candidate_ks
from .solver import (
    AnnulusResult,
    Surrogate,
    Trinomial,
    fit_surrogate,
    fit_trinomial,
    pellet_annulus,
    solve_trinomial_root,
    surrogate_roots,
)

__version__ = "0.1.0"
