"""Gaussian initial states and quantum expectation values.

All observables divide by the current norm so they stay meaningful
under the tiny norm drift of the linear solver; the norm itself is a
separate diagnostic.
"""

from dataclasses import dataclass

import numpy as np

from .grid import Grid, UnitSystem, DEFAULT_UNITS, quadrature
from .potential import PotentialTable

# Construction-time cap on |psi(edge)| / |psi|_peak; packets whose
# tails touch the box edges harder than this are rejected.
EDGE_AMPLITUDE_RATIO = 1e-6


@dataclass
class WaveFunction:
    """Complex amplitudes on a grid at a given time."""

    grid: Grid
    amplitudes: np.ndarray
    time: float = 0.0
    # set by the propagator: squared norm from the last step, so the
    # driver can watch drift without an extra pass over the amplitudes
    norm_sq_hint: float | None = None


@dataclass(frozen=True)
class QuantumObservables:
    """One sample of the quantum expectation values."""

    mean_x: float
    mean_p: float
    mean_force: float
    spread: float
    norm: float
    mean_energy: float
    time: float


def gaussian_packet(grid: Grid, x0: float, sigma: float, p0: float,
                    units: UnitSystem = DEFAULT_UNITS) -> WaveFunction:
    """Minimum-uncertainty packet with mean position x0, spread sigma,
    and mean momentum p0, renormalized on the discrete grid.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not (grid.x_min + 5 * sigma < x0 < grid.x_max - 5 * sigma):
        raise ValueError(
            f"x0={x0} closer than 5 sigma to a box edge "
            f"[{grid.x_min}, {grid.x_max}] with sigma={sigma}")
    u = grid.x - x0
    psi = np.exp(-u**2 / (4.0 * sigma**2) + 1j * (p0 / units.hbar_c) * u)
    psi *= (2.0 * np.pi * sigma**2) ** -0.25

    peak = np.max(np.abs(psi))
    edge = max(abs(psi[0]), abs(psi[-1]))
    if edge >= EDGE_AMPLITUDE_RATIO * peak:
        raise ValueError(
            f"packet tail at box edge is {edge / peak:.2e} of peak "
            f"(limit {EDGE_AMPLITUDE_RATIO:.0e}); enlarge the box")

    psi /= np.sqrt(quadrature(np.abs(psi)**2, grid).real)
    return WaveFunction(grid=grid, amplitudes=psi, time=0.0)


def norm(wf: WaveFunction) -> float:
    """Discrete integral of |psi|^2."""
    return float(quadrature(np.abs(wf.amplitudes)**2, wf.grid).real)


def mean_position(wf: WaveFunction) -> float:
    density = np.abs(wf.amplitudes)**2
    n = quadrature(density, wf.grid).real
    if n <= 0:
        raise ValueError("cannot average over a zero-norm state")
    return float(quadrature(wf.grid.x * density, wf.grid).real / n)


def position_spread(wf: WaveFunction) -> float:
    density = np.abs(wf.amplitudes)**2
    n = quadrature(density, wf.grid).real
    if n <= 0:
        raise ValueError("cannot average over a zero-norm state")
    mx = quadrature(wf.grid.x * density, wf.grid).real / n
    mx2 = quadrature(wf.grid.x**2 * density, wf.grid).real / n
    return float(np.sqrt(max(mx2 - mx**2, 0.0)))


def _gradient(psi: np.ndarray, dx: float) -> np.ndarray:
    """Three-point central differences, one-sided at the edges."""
    d = np.empty_like(psi)
    d[1:-1] = (psi[2:] - psi[:-2]) / (2.0 * dx)
    d[0] = (psi[1] - psi[0]) / dx
    d[-1] = (psi[-1] - psi[-2]) / dx
    return d


def mean_momentum(wf: WaveFunction,
                  units: UnitSystem = DEFAULT_UNITS) -> float:
    """hbar * integral of Im(psi* dpsi/dx), normalized."""
    psi = wf.amplitudes
    n = quadrature(np.abs(psi)**2, wf.grid).real
    if n <= 0:
        raise ValueError("cannot average over a zero-norm state")
    integrand = np.imag(np.conj(psi) * _gradient(psi, wf.grid.dx))
    return float(units.hbar_c * quadrature(integrand, wf.grid) / n)


def mean_force(wf: WaveFunction, pot: PotentialTable) -> float:
    """Average of -V'(x), the Ehrenfest force."""
    if pot.grid is not wf.grid and not np.array_equal(pot.grid.x, wf.grid.x):
        raise ValueError("potential and wave function live on different grids")
    density = np.abs(wf.amplitudes)**2
    n = quadrature(density, wf.grid).real
    if n <= 0:
        raise ValueError("cannot average over a zero-norm state")
    return float(-quadrature(density * pot.dv, wf.grid) / n)


def mean_energy(wf: WaveFunction, pot: PotentialTable,
                units: UnitSystem = DEFAULT_UNITS, mass: float | None = None) -> float:
    """<H> with the same three-point Laplacian the propagator uses.

    The Laplacian treats the box edges as Dirichlet walls (ghost
    values 0), so this is exactly the discrete energy the propagation
    conserves.
    """
    if pot.grid is not wf.grid and not np.array_equal(pot.grid.x, wf.grid.x):
        raise ValueError("potential and wave function live on different grids")
    if mass is None:
        mass = units.mass_alpha
    psi = wf.amplitudes
    n = quadrature(np.abs(psi)**2, wf.grid).real
    if n <= 0:
        raise ValueError("cannot average over a zero-norm state")
    lap = np.empty_like(psi)
    lap[1:-1] = psi[2:] - 2.0 * psi[1:-1] + psi[:-2]
    lap[0] = psi[1] - 2.0 * psi[0]
    lap[-1] = psi[-2] - 2.0 * psi[-1]
    lap /= wf.grid.dx**2
    kinetic = -(units.hbar_c**2 / (2.0 * mass)) * np.conj(psi) * lap
    integrand = kinetic.real + pot.v * np.abs(psi)**2
    return float(quadrature(integrand, wf.grid) / n)


def observables(wf: WaveFunction, pot: PotentialTable,
                units: UnitSystem = DEFAULT_UNITS,
                mass: float | None = None) -> QuantumObservables:
    """All expectation values of one state in a single record."""
    return QuantumObservables(
        mean_x=mean_position(wf),
        mean_p=mean_momentum(wf, units),
        mean_force=mean_force(wf, pot),
        spread=position_spread(wf),
        norm=norm(wf),
        mean_energy=mean_energy(wf, pot, units, mass),
        time=wf.time,
    )
