"""Cayley-form Crank-Nicolson time stepping.

One step solves

    (1 + i H dt / 2 hbar) psi(t + dt) = (1 - i H dt / 2 hbar) psi(t)

on the interior nodes, with hard Dirichlet walls (psi = 0) at both box
edges.  The left operator is LU-factored once at build time; each step
costs one tridiagonal multiply plus forward/backward substitution.
The substitution sweeps are sequential, so they are JIT-compiled.
"""

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .grid import Grid, UnitSystem, DEFAULT_UNITS
from .potential import PotentialTable
from .wavepacket import WaveFunction


class ZeroPivotError(ArithmeticError):
    """A pivot vanished during the no-pivoting LU factorization."""


@dataclass(frozen=True, eq=False)
class TridiagonalSystem:
    """Tridiagonal matrix stored as its three diagonals."""

    lower: np.ndarray = field(repr=False)
    diag: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.diag)

    def __post_init__(self):
        n = len(self.diag)
        if n < 1:
            raise ValueError("system size must be at least 1")
        if len(self.lower) != n - 1 or len(self.upper) != n - 1:
            raise ValueError(
                f"off-diagonals must have length {n - 1}, got "
                f"{len(self.lower)} and {len(self.upper)}")

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        out = self.diag * v
        out[:-1] += self.upper * v[1:]
        out[1:] += self.lower * v[:-1]
        return out


@njit(cache=True)
def _factor(lower, diag, upper):
    """LU coefficients for the Thomas sweep; flags a zero pivot."""
    n = diag.shape[0]
    inv_beta = np.empty(n, np.complex128)
    gamma = np.empty(max(n - 1, 0), np.complex128)
    beta = diag[0]
    if beta == 0:
        return inv_beta, gamma, 0
    inv_beta[0] = 1.0 / beta
    for i in range(1, n):
        gamma[i - 1] = upper[i - 1] * inv_beta[i - 1]
        beta = diag[i] - lower[i - 1] * gamma[i - 1]
        if beta == 0:
            return inv_beta, gamma, i
        inv_beta[i] = 1.0 / beta
    return inv_beta, gamma, -1


@njit(cache=True)
def _substitute(lower, inv_beta, gamma, b):
    """Forward/backward substitution with prefactored coefficients."""
    n = b.shape[0]
    x = np.empty(n, np.complex128)
    x[0] = b[0] * inv_beta[0]
    for i in range(1, n):
        x[i] = (b[i] - lower[i - 1] * x[i - 1]) * inv_beta[i]
    for i in range(n - 2, -1, -1):
        x[i] = x[i] - gamma[i] * x[i + 1]
    return x


def factor_tridiagonal(sys: TridiagonalSystem):
    """Factor once; reuse the returned coefficients across solves."""
    inv_beta, gamma, bad = _factor(
        np.ascontiguousarray(sys.lower, np.complex128),
        np.ascontiguousarray(sys.diag, np.complex128),
        np.ascontiguousarray(sys.upper, np.complex128))
    if bad >= 0:
        raise ZeroPivotError(f"zero pivot at row {bad}")
    return inv_beta, gamma


def solve_tridiagonal(sys: TridiagonalSystem, rhs_vector: np.ndarray) -> np.ndarray:
    """Solve sys . x = rhs_vector by LU factorization plus substitution."""
    b = np.ascontiguousarray(rhs_vector, np.complex128)
    if b.shape != (sys.size,):
        raise ValueError(
            f"right-hand side must have shape ({sys.size},), got {b.shape}")
    inv_beta, gamma = factor_tridiagonal(sys)
    return _substitute(
        np.ascontiguousarray(sys.lower, np.complex128), inv_beta, gamma, b)


@njit(cache=True)
def _cn_step(psi, rhs_diag, rhs_off, lhs_off, inv_beta, gamma, work):
    """Apply the right operator and solve the left one, in place.

    ``psi`` spans the full grid; the operators act on the interior.
    Returns sum |psi|^2 (compensated), so callers can watch the norm
    without another pass.
    """
    n = psi.shape[0]
    m = n - 2
    prev = 0.0 + 0.0j
    for i in range(m):
        b = rhs_off * (psi[i] + psi[i + 2]) + rhs_diag[i] * psi[i + 1]
        if i == 0:
            prev = b * inv_beta[0]
        else:
            prev = (b - lhs_off * prev) * inv_beta[i]
        work[i] = prev
    total = 0.0
    comp = 0.0
    nxt = work[m - 1]
    psi[m] = nxt
    term = nxt.real * nxt.real + nxt.imag * nxt.imag
    y = term - comp
    t = total + y
    comp = (t - total) - y
    total = t
    for i in range(m - 2, -1, -1):
        nxt = work[i] - gamma[i] * nxt
        psi[i + 1] = nxt
        term = nxt.real * nxt.real + nxt.imag * nxt.imag
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    psi[0] = 0.0 + 0.0j
    psi[n - 1] = 0.0 + 0.0j
    return total


@dataclass(eq=False)
class CnPropagator:
    """Prefactored Cayley step for a time-independent Hamiltonian."""

    grid: Grid
    dt: float
    lhs: TridiagonalSystem
    rhs: TridiagonalSystem
    boundary: str = "dirichlet"
    _inv_beta: np.ndarray = field(default=None, repr=False)
    _gamma: np.ndarray = field(default=None, repr=False)
    _work: np.ndarray = field(default=None, repr=False)

    @property
    def kinetic_off_diagonal(self) -> complex:
        """Shared off-diagonal coefficient of the right operator."""
        return complex(self.rhs.upper[0])


def build_propagator(grid: Grid, pot: PotentialTable, dt: float,
                     units: UnitSystem = DEFAULT_UNITS,
                     mass: float | None = None) -> CnPropagator:
    """Assemble both Cayley operators and factor the left one.

    Negative dt builds the exact inverse step, used for reversibility
    checks; only dt = 0 is rejected.
    """
    if dt == 0 or not np.isfinite(dt):
        raise ValueError(f"time step must be nonzero and finite, got {dt}")
    if pot.grid is not grid and not np.array_equal(pot.grid.x, grid.x):
        raise ValueError("potential table was built for a different grid")
    if mass is None:
        mass = units.mass_alpha

    m = grid.n_points - 2
    kin_off = -units.hbar_c**2 / (2.0 * mass * grid.dx**2)
    h_diag = units.hbar_c**2 / (mass * grid.dx**2) + pot.v[1:-1]
    scale = 0.5j * dt / units.hbar_c

    lhs = TridiagonalSystem(
        lower=np.full(m - 1, scale * kin_off, np.complex128),
        diag=1.0 + scale * h_diag,
        upper=np.full(m - 1, scale * kin_off, np.complex128))
    rhs = TridiagonalSystem(
        lower=np.full(m - 1, -scale * kin_off, np.complex128),
        diag=1.0 - scale * h_diag,
        upper=np.full(m - 1, -scale * kin_off, np.complex128))

    prop = CnPropagator(grid=grid, dt=dt, lhs=lhs, rhs=rhs)
    inv_beta, gamma = factor_tridiagonal(lhs)
    prop._inv_beta = inv_beta
    prop._gamma = gamma
    prop._work = np.empty(m, np.complex128)
    return prop


def step(prop: CnPropagator, wf: WaveFunction) -> WaveFunction:
    """Advance the state by one Cayley step; edge nodes stay pinned at 0."""
    if wf.grid is not prop.grid and not np.array_equal(wf.grid.x, prop.grid.x):
        raise ValueError("wave function lives on a different grid")
    psi = wf.amplitudes
    if psi.dtype != np.complex128 or not psi.flags.c_contiguous:
        psi = np.ascontiguousarray(psi, np.complex128)
        wf.amplitudes = psi
    total = _cn_step(psi, prop.rhs.diag, prop.rhs.upper[0], prop.lhs.upper[0],
                     prop._inv_beta, prop._gamma, prop._work)
    wf.time += prop.dt
    wf.norm_sq_hint = total * prop.grid.dx
    return wf
