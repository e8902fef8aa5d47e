"""Coulomb, harmonic, and free potentials tabulated on a grid.

The Coulomb derivative is tabulated analytically rather than by
differencing the potential, so force averages carry no differentiation
error.
"""

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, UnitSystem, DEFAULT_UNITS

COULOMB = "coulomb"
HARMONIC = "harmonic"
FREE = "free"


@dataclass(frozen=True, eq=False)
class PotentialTable:
    """Potential V and derivative V' sampled on a grid."""

    grid: Grid
    v: np.ndarray = field(repr=False)
    dv: np.ndarray = field(repr=False)
    coupling_k: float
    kind: str
    softening_cut: float


def coupling_constant(z1: int, z2: int,
                      units: UnitSystem = DEFAULT_UNITS) -> float:
    """Coulomb coupling z1*z2*alpha*hbar_c in MeV fm."""
    if z1 < 1 or z2 < 1:
        raise ValueError(f"charge numbers must be positive, got ({z1}, {z2})")
    return z1 * z2 * units.alpha_fs * units.hbar_c


def coulomb_table(grid: Grid, coupling_k: float,
                  softening_cut: float | None = None) -> PotentialTable:
    """Repulsive Coulomb potential k/|x| with the source at the origin.

    Inside ``softening_cut`` (default half a cell) the potential is
    capped at k/softening_cut; the cap only matters for nodes adjacent
    to the origin and is recorded in the table for convergence checks.
    """
    if coupling_k <= 0:
        raise ValueError(f"coulomb coupling must be positive, got {coupling_k}")
    if softening_cut is None:
        softening_cut = 0.5 * grid.dx
    if softening_cut < 0:
        raise ValueError(f"softening_cut must be >= 0, got {softening_cut}")
    absx = np.abs(grid.x)
    if softening_cut == 0.0 and np.any(absx == 0.0):
        raise ValueError("grid node at x = 0 with zero softening_cut")
    reff = np.maximum(absx, softening_cut)
    v = coupling_k / reff
    dv = -np.sign(grid.x) * coupling_k / reff**2
    return PotentialTable(grid=grid, v=v, dv=dv, coupling_k=coupling_k,
                          kind=COULOMB, softening_cut=softening_cut)


def harmonic_table(grid: Grid, k_h: float) -> PotentialTable:
    """Quadratic potential k_h x^2 / 2, the Ehrenfest-equality fixture."""
    if k_h < 0:
        raise ValueError(f"harmonic constant must be >= 0, got {k_h}")
    v = 0.5 * k_h * grid.x**2
    dv = k_h * grid.x
    return PotentialTable(grid=grid, v=v, dv=dv, coupling_k=k_h,
                          kind=HARMONIC, softening_cut=0.0)


def free_table(grid: Grid) -> PotentialTable:
    """Vanishing potential."""
    zeros = np.zeros(grid.n_points)
    return PotentialTable(grid=grid, v=zeros, dv=zeros.copy(), coupling_k=0.0,
                          kind=FREE, softening_cut=0.0)
