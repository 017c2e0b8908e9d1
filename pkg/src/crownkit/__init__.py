"""crownkit: adapted hyper-Kahler structures on crown domains, numerically.

The package builds concrete matrix models of non-compact Hermitian symmetric
pairs, assembles the operator calculus of the invariant structures (I, J, K)
and their Kahler forms on the crown domain, and verifies every identity by
finite-difference exterior calculus at desk scale.
"""
from .chart_calculus import ChartPoint, chart_frame, chart_point, frame_invert, slice_point
from .crown_ops import CellPoint, FrameOperator, cell_contains, e_a, f_a, l_a, psi, psi_star
from .errors import (
    ConfigurationError,
    CrownkitError,
    DecompositionError,
    DomainError,
    FrameError,
    NotHermitianError,
    SamplingError,
    SingularityError,
    StructureError,
    UsageError,
)
from .hk_structure import (
    HKHandle,
    NumericsConfig,
    TangentVec,
    build_handle,
    I_apply,
    J_apply,
    K_apply,
    f_I,
    mu_J,
    mu_can,
    mu_general,
    omega_0_pullback,
    omega_I,
    omega_J,
    omega_K,
    omega_can,
    rho_I,
    rho_J,
    rho_can,
)
from .lie_core import (
    SUPPORTED_SPACES,
    LieAlgebraModel,
    RootDatum,
    SOSystem,
    build_algebra,
    build_so_system,
    decompose_p_vector,
    restricted_root_decomposition,
)
from .verify_suites import SUITES, VerificationReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "SUPPORTED_SPACES",
    "SUITES",
    # algebra layer
    "LieAlgebraModel",
    "RootDatum",
    "SOSystem",
    "build_algebra",
    "restricted_root_decomposition",
    "build_so_system",
    "decompose_p_vector",
    # operators
    "CellPoint",
    "FrameOperator",
    "cell_contains",
    "f_a",
    "e_a",
    "psi",
    "psi_star",
    "l_a",
    # geometry
    "HKHandle",
    "NumericsConfig",
    "TangentVec",
    "build_handle",
    "I_apply",
    "J_apply",
    "K_apply",
    "omega_I",
    "omega_J",
    "omega_K",
    "omega_can",
    "omega_0_pullback",
    "rho_J",
    "rho_I",
    "rho_can",
    "mu_J",
    "mu_can",
    "mu_general",
    "f_I",
    # chart
    "ChartPoint",
    "chart_point",
    "slice_point",
    "chart_frame",
    "frame_invert",
    # verification
    "VerificationReport",
    "run_suite",
    # errors
    "CrownkitError",
    "ConfigurationError",
    "DecompositionError",
    "StructureError",
    "NotHermitianError",
    "DomainError",
    "SingularityError",
    "FrameError",
    "SamplingError",
    "UsageError",
]
