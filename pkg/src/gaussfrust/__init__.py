"""Maximal pairwise entanglement in permutation-symmetric networks of harmonic oscillators."""

from .entanglement import (
    TwoModeStandardForm,
    eof_from_delta,
    epr_uncertainty_global,
    epr_uncertainty_local,
    pure_cm_from_xy,
    reduce_two_mode,
    standard_form,
)
from .errors import (
    ConvergenceError,
    GaussFrustError,
    GroupTooLargeError,
    InvalidCovarianceMatrix,
    NonAbelianCommutantError,
    NotSymmetricGraphError,
    NumericalInstabilityError,
    ParameterError,
    RouteMismatchError,
    SingularMatrixError,
    SwapHypothesisError,
)
from .graphs import Graph, GraphSpec, adjacency, build_graph, check_symmetric_graph, format_graph, parse_graph
from .groups import PermGroup, commutant_blocks, cyclic_group, group_closure, twirl, twirl_cm
from .linalg import CovarianceMatrix, mat_func, sym_eig, symplectic_eigenvalues, trace_norm, validate_cm
from .solver import (
    FrustrationResult,
    HamiltonianPair,
    build_pair_edges,
    build_pair_group,
    closed_form_energy,
    commuting_spectral_energy,
    emax_for_graph,
    epsilon_sweep,
    ground_cm,
    ground_energy,
    infinite_lattice_energy,
)

__version__ = "0.1.0"
