"""Dissipative dynamics and asymptotic entanglement of two two-level atoms
coupled to a common broadband squeezed photon reservoir."""

__version__ = "0.1.0"

from .model import (
    CANONICAL,
    COLLECTIVE,
    COLLECTIVE_BASIS_MAP,
    AtomParams,
    BathParams,
    DensityMatrix,
    FidelityRangeError,
    GammaHatRangeError,
    MSqueezeBoundError,
    NegativeRateError,
    NotNormalizedError,
    ParameterError,
    RegimeError,
    fidelity_antisymmetric,
    from_collective,
    product_state_fidelity,
    to_collective,
    validate,
)
from .liouvillian import (
    NullspaceResult,
    Superoperator,
    build_generator,
    rhs_collective,
    stationary_space,
)
from .evolve import (
    IntegrationResult,
    IntegratorConfig,
    StationaryResult,
    StepUnderflowError,
    evolve_to_stationary,
    integrate,
    propagate_expm,
    trajectory,
)
from .asymptotic import (
    BelowCriticalError,
    MixtureDecomposition,
    atomic_squeeze_unitary,
    critical_fidelity,
    decompose,
    dicke_asymptotic,
    squeeze_parameter,
    two_atom_squeezed_state,
    unique_asymptotic,
)
from .entanglement import (
    NotXFormError,
    Thresholds,
    asymptotic_concurrence,
    concurrence,
    concurrence_unique,
    concurrence_x,
    resonant_min_uncertainty_profile,
    thresholds,
)

__all__ = [
    "AtomParams",
    "BathParams",
    "BelowCriticalError",
    "CANONICAL",
    "COLLECTIVE",
    "COLLECTIVE_BASIS_MAP",
    "DensityMatrix",
    "FidelityRangeError",
    "GammaHatRangeError",
    "IntegrationResult",
    "IntegratorConfig",
    "MSqueezeBoundError",
    "MixtureDecomposition",
    "NegativeRateError",
    "NotNormalizedError",
    "NotXFormError",
    "NullspaceResult",
    "ParameterError",
    "RegimeError",
    "StationaryResult",
    "StepUnderflowError",
    "Superoperator",
    "Thresholds",
    "asymptotic_concurrence",
    "atomic_squeeze_unitary",
    "build_generator",
    "concurrence",
    "concurrence_unique",
    "concurrence_x",
    "critical_fidelity",
    "decompose",
    "dicke_asymptotic",
    "evolve_to_stationary",
    "fidelity_antisymmetric",
    "from_collective",
    "integrate",
    "product_state_fidelity",
    "propagate_expm",
    "resonant_min_uncertainty_profile",
    "rhs_collective",
    "squeeze_parameter",
    "stationary_space",
    "thresholds",
    "to_collective",
    "trajectory",
    "two_atom_squeezed_state",
    "unique_asymptotic",
    "validate",
]
