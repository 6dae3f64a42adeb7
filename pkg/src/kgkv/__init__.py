"""Numerical laboratory for the 1-D Klein-Gordon equation with Kelvin-Voigt damping.

Library layout:

* :mod:`kgkv.model`       -- grids, states, energy norms, canonical test data
* :mod:`kgkv.symbol`      -- Fourier symbol of the generator, exact per-mode
  propagation, resolvent-norm oracle, eigenvalue branches
* :mod:`kgkv.greens`      -- closed-form Green's-function resolvent on the
  line and half-line, kernel L1 identities
* :mod:`kgkv.experiments` -- energy identity, approximate eigenvectors,
  range preparation and characterisation, decay-rate fits, mode-integral oracle
* :mod:`kgkv.cli`         -- ``kgkv`` command-line runner (CSV + manifest)
"""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    Boundary,
    EnergyTrace,
    Params,
    SpectralState,
    State,
    TorusGrid,
    bump_profile,
    bump_curvature_sup,
    dissipation,
    energy,
    random_smooth_state,
    smooth_state_profile,
    to_spectral,
    to_state,
    weyl_state,
    x_norm_sq,
    zero_state,
)
from .symbol import (  # noqa: F401
    EigenPair,
    Regime,
    ResolventProfile,
    ResolventSearch,
    SpectralCurves,
    SymbolMatrix,
    critical_frequency,
    eigenpair,
    mode_propagator,
    propagate,
    resolvent_apply_spectral,
    resolvent_norm,
    resolvent_profile,
    spectral_curves,
    symbol_matrix,
)
from .greens import (  # noqa: F401
    HelmholtzCoefficient,
    KernelSamples,
    KernelTailError,
    cos_half_angle_floor,
    derivative_kernel_l1,
    greens_kernel_l1,
    helmholtz_coefficient,
    kernel_samples,
    resolvent_apply_halfline,
    resolvent_apply_line,
    solution_derivative_line,
)
from .experiments import (  # noqa: F401
    DATA_CLASSES,
    DecayFit,
    EXPECTED_SLOPE_BANDS,
    RangeCheckReport,
    WeylReport,
    check_range_conditions,
    decay_trace,
    dissipation_identity_check,
    fit_decay_exponent,
    make_decay_data,
    mode_integral_energy,
    prepare_range_data,
    prepared_profile,
    weyl_report,
    weyl_residual,
)
