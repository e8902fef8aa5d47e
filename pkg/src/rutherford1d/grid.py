"""Spatial mesh, unit system, and quadrature shared by all modules.

Natural units throughout: lengths in fm, energies in MeV, momenta in
MeV/c, times in fm/c, and hbar carried numerically as hbar*c in MeV fm.
"""

from dataclasses import dataclass, field

import numpy as np

HBAR_C = 197.3269631          # MeV fm
ALPHA_FS = 1.0 / 137.035999679
MASS_ALPHA = 3727.379         # MeV (m c^2)


@dataclass(frozen=True)
class UnitSystem:
    """Constants of the fm / MeV / (fm/c) unit system with c = 1."""

    hbar_c: float = HBAR_C
    alpha_fs: float = ALPHA_FS
    mass_alpha: float = MASS_ALPHA
    c: float = 1.0

    def __post_init__(self):
        if not (self.hbar_c > 0 and self.alpha_fs > 0 and self.mass_alpha > 0):
            raise ValueError("unit constants must be positive")


DEFAULT_UNITS = UnitSystem()


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform spatial mesh.

    ``x_min``/``x_max`` are the actual endpoint nodes after any
    half-cell shift; ``shift`` records the offset applied to keep
    every node away from x = 0.
    """

    x_min: float
    x_max: float
    n_points: int
    dx: float
    shift: float
    x: np.ndarray = field(repr=False)

    def __len__(self):
        return self.n_points


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid:
    """Build a uniform grid of ``n_points`` nodes on [x_min, x_max].

    If any node falls within dx/4 of x = 0, the whole grid is moved
    right by half a cell so the origin sits between nodes; the applied
    offset is recorded in ``Grid.shift``.
    """
    if not (np.isfinite(x_min) and np.isfinite(x_max)):
        raise ValueError("grid bounds must be finite")
    if x_min >= x_max:
        raise ValueError(f"x_min must be below x_max, got [{x_min}, {x_max}]")
    n_points = int(n_points)
    if n_points < 3:
        raise ValueError(f"n_points must be at least 3, got {n_points}")

    dx = (x_max - x_min) / (n_points - 1)
    x = x_min + dx * np.arange(n_points)
    shift = 0.0
    if np.min(np.abs(x)) < 0.25 * dx:
        shift = 0.5 * dx
        x = x + shift
    return Grid(x_min=x[0], x_max=x[-1], n_points=n_points, dx=dx,
                shift=shift, x=x)


def quadrature(samples: np.ndarray, grid: Grid):
    """Trapezoidal integral of ``samples`` over the grid."""
    samples = np.asarray(samples)
    if samples.shape != (grid.n_points,):
        raise ValueError(
            f"expected {grid.n_points} samples, got shape {samples.shape}")
    return np.trapezoid(samples, dx=grid.dx)
