"""Fractional Eringen wave equation: spectral solver, quadrature oracle and diagnostics."""

__version__ = "0.1.0"

from .multiplier import (  # noqa: E402
    DispersionCurve,
    FractionalOrder,
    PhysicalParams,
    auxiliary_symbols,
    dispersion_curve,
    dispersion_symbol,
    nondimensionalize,
    nonlocality_coefficient,
    velocities,
)
from .propagator import SpectralState, e0_hat, e1_hat, evolve, half_wave_hat  # noqa: E402
from .spectral import (  # noqa: E402
    InitialData,
    Profile,
    SpatialGrid,
    WaveField,
    apply_multiplier,
    make_grid,
    sample_initial,
    solve_at_times,
    stress_strain,
)
from .quadrature import QuadratureSpec, evaluate_point, evaluate_profile, truncation_bound  # noqa: E402
