"""Classical point-particle counterpart of the quantum run.

Hamilton's equations for one degree of freedom,

    dx/dt = p / m,    dp/dt = F(x),

integrated with classic fourth-order Runge-Kutta.  The Coulomb force
here is exact (no softening): the point particle never reaches the
origin as long as its energy is below the barrier, so the cap that
protects the grid-sampled potential is unnecessary and would bias the
turning point.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class ClassicalState:
    x: float
    p: float
    t: float = 0.0


@dataclass(frozen=True)
class ClassicalSeries:
    """Trajectory samples, one row per integrator step."""

    times: np.ndarray
    x: np.ndarray
    p: np.ndarray
    force: np.ndarray

    def __len__(self) -> int:
        return len(self.times)


def coulomb_force(coupling_k: float, min_distance: float = 1e-6) -> Callable[[float], float]:
    """Force of the bare 1/|x| potential: sign(x) * k / x**2.

    With k = 0 the force is identically zero and the distance floor is
    not enforced (free motion may cross the origin).
    """
    if coupling_k < 0:
        raise ValueError(f"coupling must be nonnegative, got {coupling_k}")
    if coupling_k == 0:
        return lambda x: 0.0

    def force(x: float) -> float:
        r = abs(x)
        if r < min_distance:
            raise ValueError(
                f"trajectory reached |x| = {r:g} fm, inside the "
                f"{min_distance:g} fm floor; energy diverges there")
        return coupling_k / (x * r)

    return force


def hamilton_step(state: ClassicalState, force: Callable[[float], float],
                  mass: float, dt: float) -> ClassicalState:
    """One RK4 step of Hamilton's equations."""
    if dt == 0 or not np.isfinite(dt):
        raise ValueError(f"time step must be nonzero and finite, got {dt}")
    if mass <= 0:
        raise ValueError(f"mass must be positive, got {mass}")
    x, p = state.x, state.p
    k1x = p / mass
    k1p = force(x)
    k2x = (p + 0.5 * dt * k1p) / mass
    k2p = force(x + 0.5 * dt * k1x)
    k3x = (p + 0.5 * dt * k2p) / mass
    k3p = force(x + 0.5 * dt * k2x)
    k4x = (p + dt * k3p) / mass
    k4p = force(x + dt * k3x)
    return ClassicalState(
        x=x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        p=p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        t=state.t + dt)


def classical_trajectory(x0: float, p0: float, mass: float, coupling_k: float,
                         dt: float, t_max: float,
                         min_distance: float = 1e-6) -> ClassicalSeries:
    """Integrate from (x0, p0) at t = 0, sampling every step up to t_max."""
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if dt <= 0:
        raise ValueError(f"trajectory time step must be positive, got {dt}")
    force = coulomb_force(coupling_k, min_distance)
    n_steps = int(round(t_max / dt))
    times = np.arange(n_steps + 1) * dt
    xs = np.empty(n_steps + 1)
    ps = np.empty(n_steps + 1)
    fs = np.empty(n_steps + 1)
    state = ClassicalState(x=x0, p=p0, t=0.0)
    xs[0], ps[0], fs[0] = state.x, state.p, force(state.x)
    for i in range(1, n_steps + 1):
        state = hamilton_step(state, force, mass, dt)
        xs[i], ps[i] = state.x, state.p
        fs[i] = force(state.x)
    return ClassicalSeries(times=times, x=xs, p=ps, force=fs)


def analytic_closest_approach(energy: float, coupling_k: float) -> float:
    """Head-on turning distance k / E for a particle of kinetic energy E."""
    if energy <= 0:
        raise ValueError(f"energy must be positive, got {energy}")
    if coupling_k <= 0:
        raise ValueError(f"coupling must be positive, got {coupling_k}")
    return coupling_k / energy
