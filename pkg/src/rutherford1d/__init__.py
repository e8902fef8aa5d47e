"""Quantum vs classical closest approach in head-on Rutherford scattering."""

__version__ = "0.1.0"

from .grid import (
    Grid, UnitSystem, DEFAULT_UNITS, HBAR_C, ALPHA_FS, MASS_ALPHA,
    make_grid, quadrature,
)
from .potential import (
    PotentialTable, coupling_constant, coulomb_table, harmonic_table,
    free_table,
)
from .wavepacket import (
    WaveFunction, QuantumObservables, gaussian_packet, norm, mean_position,
    position_spread, mean_momentum, mean_force, mean_energy, observables,
)
from .propagator import (
    TridiagonalSystem, ZeroPivotError, CnPropagator, factor_tridiagonal,
    solve_tridiagonal, build_propagator, step,
)
from .classical import (
    ClassicalState, ClassicalSeries, coulomb_force, hamilton_step,
    classical_trajectory, analytic_closest_approach,
)
from .experiment import (
    RunConfig, QuantumSeries, ObservableSeries, ComparisonMetrics,
    BoundaryContaminationError, closest_approach, jensen_report, max_lag,
    run_comparison, audit_config,
)
