"""Paired quantum/classical runs and their comparison metrics.

One experiment propagates a Gaussian packet per requested width through
the Coulomb barrier while integrating the matching point particle, all
on a shared time axis, then reduces the sampled series to the headline
quantities: distance and time of closest approach, Jensen check of the
initial mean force, force-crossover time, and the maximum position lag
of the quantum packet behind the classical particle.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .grid import make_grid, DEFAULT_UNITS, MASS_ALPHA
from .potential import coupling_constant, coulomb_table, free_table
from .wavepacket import gaussian_packet, observables
from .propagator import build_propagator, step
from .classical import classical_trajectory, analytic_closest_approach

# relative amplitude at the edge-adjacent nodes above which a sample is
# considered contaminated by wall reflection
BOUNDARY_LEAK_RATIO = 1e-6

# hard sanity bound on the sampled norm; exceeding it means the run is
# numerically broken, not merely imprecise
NORM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class RunConfig:
    """Full description of one comparison experiment."""

    x0: float = -500.0
    p0: float = 386.13
    sigma_list: tuple = (20.0, 50.0)
    z1: int = 2
    z2: int = 79
    mass: float = MASS_ALPHA
    x_min: float = -1600.0
    x_max: float = 200.0
    n_points: int = 144001
    dt: float = 0.0625
    t_max: float = 12000.0
    sample_every: int = 96
    softening_cut: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "sigma_list", tuple(self.sigma_list))

    def validate(self) -> None:
        if not self.sigma_list:
            raise ValueError("sigma_list must not be empty")
        if any(s <= 0 or not math.isfinite(s) for s in self.sigma_list):
            raise ValueError(f"sigma_list entries must be positive, got {list(self.sigma_list)}")
        if len(set(self.sigma_list)) != len(self.sigma_list):
            raise ValueError(f"sigma_list entries must be distinct, got {list(self.sigma_list)}")
        if not (self.x0 < 0):
            raise ValueError(f"x0 must be negative (approach geometry), got {self.x0}")
        if not (self.p0 > 0):
            raise ValueError(f"p0 must be positive (approach geometry), got {self.p0}")
        if self.z1 < 0 or self.z2 < 0:
            raise ValueError(f"z1 and z2 must be nonnegative integers, got {self.z1}, {self.z2}")
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not (self.x_min < self.x_max):
            raise ValueError(f"x_min must be below x_max, got {self.x_min}, {self.x_max}")
        if self.n_points < 3:
            raise ValueError(f"n_points must be at least 3, got {self.n_points}")
        if self.dt <= 0 or not math.isfinite(self.dt):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_max <= 0 or not math.isfinite(self.t_max):
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.sample_every < 1:
            raise ValueError(f"sample_every must be at least 1, got {self.sample_every}")
        if self.softening_cut is not None and self.softening_cut <= 0:
            raise ValueError(f"softening_cut must be positive, got {self.softening_cut}")


@dataclass(frozen=True)
class QuantumSeries:
    """Sampled expectation values for one packet width."""

    mean_x: np.ndarray
    mean_p: np.ndarray
    mean_force: np.ndarray
    spread: np.ndarray
    norm: np.ndarray
    mean_energy: np.ndarray


@dataclass(frozen=True)
class ObservableSeries:
    """Everything sampled on the shared time axis."""

    times: np.ndarray
    classical_x: np.ndarray
    classical_p: np.ndarray
    classical_force: np.ndarray
    sigma_list: tuple
    quantum: dict

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class ComparisonMetrics:
    closest_approach_classical: float | None
    turning_time_classical: float | None
    closest_approach_analytic: float
    closest_approach_quantum: dict
    turning_time_quantum: dict
    force_crossover_time: dict
    jensen_t0_satisfied: dict
    max_lag: dict
    diagnostics: dict = field(default_factory=dict)


class BoundaryContaminationError(RuntimeError):
    """Wavepacket amplitude reached the box walls during a run."""


def _parabola_vertex(t, y):
    """Vertex of the parabola through three uniformly spaced samples."""
    h = t[1] - t[0]
    curv = y[0] - 2.0 * y[1] + y[2]
    if curv == 0:
        raise ArithmeticError("degenerate turning bracket: samples are collinear")
    dt_star = 0.5 * h * (y[0] - y[2]) / curv
    y_star = y[1] - 0.125 * (y[0] - y[2]) ** 2 / curv
    return t[1] + dt_star, y_star


def _parabola_eval(t, y, t_at):
    """Lagrange evaluation of the parabola through three samples."""
    l0 = (t_at - t[1]) * (t_at - t[2]) / ((t[0] - t[1]) * (t[0] - t[2]))
    l1 = (t_at - t[0]) * (t_at - t[2]) / ((t[1] - t[0]) * (t[1] - t[2]))
    l2 = (t_at - t[0]) * (t_at - t[1]) / ((t[2] - t[0]) * (t[2] - t[1]))
    return y[0] * l0 + y[1] * l1 + y[2] * l2


def _turning_vertex(times, positions, momenta):
    """Interpolated first turning point, or None if momentum never flips.

    Returns (t_star, x_star) with x_star signed.
    """
    p = np.asarray(momenta)
    flips = np.nonzero((p[:-1] > 0) & (p[1:] <= 0))[0]
    if len(flips) == 0:
        return None
    i = int(flips[0])
    # momentum zero-crossing pins which three samples to fit
    t_zero = times[i] + (times[i + 1] - times[i]) * p[i] / (p[i] - p[i + 1])
    j = i if abs(times[i] - t_zero) <= abs(times[i + 1] - t_zero) else i + 1
    j = min(max(j, 1), len(times) - 2)
    return _parabola_vertex(times[j - 1:j + 2], positions[j - 1:j + 2])


def closest_approach(times, positions, momenta):
    """Turning time and |position| from a sampled trajectory.

    The sample bracket comes from the momentum sign change; the
    position extremum is taken from a quadratic through the three
    samples nearest the interpolated momentum zero.  Returns None when
    no turning point lies within the series (distinct from numeric
    failure, which raises).
    """
    vertex = _turning_vertex(times, positions, momenta)
    if vertex is None:
        return None
    t_star, x_star = vertex
    return t_star, abs(x_star)


def _interp_at(times, values, t_at):
    """Quadratic interpolation of a sampled series at one interior time."""
    j = int(np.searchsorted(times, t_at))
    j = min(max(j, 1), len(times) - 2)
    return _parabola_eval(times[j - 1:j + 2], values[j - 1:j + 2], t_at)


def jensen_report(times, quantum_force, classical_force):
    """Initial-force Jensen flag plus interpolated force-crossover time.

    The crossover is the first downward sign change of
    |<F>| - |F_cl|; None when the quantum force magnitude never drops
    below the classical one.
    """
    gap = np.abs(quantum_force) - np.abs(classical_force)
    satisfied = bool(gap[0] >= 0)
    below = np.nonzero((gap[:-1] > 0) & (gap[1:] <= 0))[0]
    if len(below) == 0:
        return satisfied, None
    i = int(below[0])
    t_cross = times[i] + (times[i + 1] - times[i]) * gap[i] / (gap[i] - gap[i + 1])
    return satisfied, float(t_cross)


def max_lag(times, classical_x, mean_x, t_turn_quantum, x_turn_quantum=None,
            classical_fine=None):
    """Largest classical-minus-quantum position gap on the approach leg.

    The approach window is [0, quantum turning time].  Besides the
    sampled gaps, the gap at the window edge itself is included via
    interpolation, so the reported value does not jump when sampling
    times shift relative to the turning time.
    """
    if t_turn_quantum is None:
        window = slice(None)
    else:
        window = times <= t_turn_quantum
    gaps = classical_x[window] - mean_x[window]
    best = float(np.max(gaps))
    if t_turn_quantum is not None and times[0] < t_turn_quantum < times[-1]:
        if classical_fine is not None:
            cl_times, cl_x = classical_fine
        else:
            cl_times, cl_x = times, classical_x
        x_cl_edge = _interp_at(cl_times, cl_x, t_turn_quantum)
        if x_turn_quantum is None:
            x_q_edge = _interp_at(times, mean_x, t_turn_quantum)
        else:
            x_q_edge = x_turn_quantum
        best = max(best, float(x_cl_edge - x_q_edge))
    return best


def run_comparison(config: RunConfig, units=DEFAULT_UNITS, log=None):
    """Run the classical trajectory and one quantum run per width.

    Returns (ObservableSeries, ComparisonMetrics).  The propagator and
    potential are built once; every series shares the sampled time
    axis.  Raises BoundaryContaminationError if any packet's amplitude
    at the edge-adjacent nodes exceeds 1e-6 of its peak at a sample.
    """
    config.validate()
    grid = make_grid(config.x_min, config.x_max, config.n_points)
    free = config.z1 == 0 or config.z2 == 0
    if free:
        coupling = 0.0
        pot = free_table(grid)
    else:
        coupling = coupling_constant(config.z1, config.z2, units)
        pot = coulomb_table(grid, coupling, config.softening_cut)
    prop = build_propagator(grid, pot, config.dt, units, config.mass)

    block = config.sample_every
    n_blocks = int(math.floor(config.t_max / (config.dt * block)))
    if n_blocks < 1:
        raise ValueError("t_max shorter than one sampling interval")
    t_run = n_blocks * block * config.dt
    times = np.arange(n_blocks + 1) * (block * config.dt)

    traj = classical_trajectory(config.x0, config.p0, config.mass, coupling,
                                config.dt, t_run)
    cl_x = traj.x[::block].copy()
    cl_p = traj.p[::block].copy()
    cl_f = traj.force[::block].copy()

    energy_total = config.p0**2 / (2.0 * config.mass) + (
        coupling / abs(config.x0))
    pe = coupling / np.abs(traj.x) if coupling > 0 else 0.0
    diagnostics = {
        "classical_energy_drift": float(np.max(np.abs(
            traj.p**2 / (2.0 * config.mass) + pe - energy_total)))
        / energy_total,
    }

    quantum = {}
    for sigma in config.sigma_list:
        wf = gaussian_packet(grid, config.x0, sigma, config.p0, units)
        n_samples = n_blocks + 1
        cols = {name: np.empty(n_samples) for name in
                ("mean_x", "mean_p", "mean_force", "spread", "norm",
                 "mean_energy")}
        peak0 = float(np.max(np.abs(wf.amplitudes)))
        norm_prev = 1.0
        max_drift = 0.0
        for k in range(n_samples):
            if k > 0:
                for _ in range(block):
                    step(prop, wf)
                    norm_now = math.sqrt(wf.norm_sq_hint)
                    drift = abs(norm_now - norm_prev)
                    if drift > max_drift:
                        max_drift = drift
                    norm_prev = norm_now
            amps = np.abs(wf.amplitudes)
            peak = float(amps.max())
            leak = max(amps[1], amps[-2])
            if leak > BOUNDARY_LEAK_RATIO * max(peak, peak0):
                raise BoundaryContaminationError(
                    f"edge amplitude {leak:.3e} exceeds {BOUNDARY_LEAK_RATIO:.0e}"
                    f" of peak {peak:.3e} at t = {times[k]:g} fm/c"
                    f" (sigma = {sigma:g} fm); enlarge the box")
            obs = observables(wf, pot, units, config.mass)
            if abs(obs.norm - 1.0) > NORM_TOLERANCE:
                raise RuntimeError(
                    f"norm drifted to {obs.norm!r} at t = {times[k]:g} fm/c"
                    f" (sigma = {sigma:g} fm); propagation is broken")
            cols["mean_x"][k] = obs.mean_x
            cols["mean_p"][k] = obs.mean_p
            cols["mean_force"][k] = obs.mean_force
            cols["spread"][k] = obs.spread
            cols["norm"][k] = obs.norm
            cols["mean_energy"][k] = obs.mean_energy
        quantum[sigma] = QuantumSeries(**cols)
        e0 = cols["mean_energy"][0]
        diagnostics[f"energy_drift_sigma_{sigma:g}"] = float(
            np.max(np.abs(cols["mean_energy"] - e0)) / abs(e0))
        diagnostics[f"max_norm_deviation_sigma_{sigma:g}"] = float(
            np.max(np.abs(cols["norm"] - 1.0)))
        diagnostics[f"max_step_norm_drift_sigma_{sigma:g}"] = max_drift
        if log is not None:
            log(f"sigma = {sigma:g} fm done")

    series = ObservableSeries(times=times, classical_x=cl_x, classical_p=cl_p,
                              classical_force=cl_f,
                              sigma_list=tuple(config.sigma_list),
                              quantum=quantum)

    cl_vertex = _turning_vertex(traj.times, traj.x, traj.p)
    if coupling > 0:
        analytic = analytic_closest_approach(energy_total, coupling)
    else:
        analytic = 0.0

    d_q, t_q, cross, jensen, lag = {}, {}, {}, {}, {}
    for sigma in config.sigma_list:
        q = quantum[sigma]
        vertex = _turning_vertex(times, q.mean_x, q.mean_p)
        if vertex is None:
            t_q[sigma] = None
            d_q[sigma] = None
        else:
            t_q[sigma], x_star = vertex
            d_q[sigma] = abs(x_star)
        jensen[sigma], cross[sigma] = jensen_report(
            times, q.mean_force, cl_f)
        lag[sigma] = max_lag(
            times, cl_x, q.mean_x, t_q[sigma],
            x_turn_quantum=None if vertex is None else x_star,
            classical_fine=(traj.times, traj.x))

    metrics = ComparisonMetrics(
        closest_approach_classical=None if cl_vertex is None else abs(cl_vertex[1]),
        turning_time_classical=None if cl_vertex is None else cl_vertex[0],
        closest_approach_analytic=analytic,
        closest_approach_quantum=d_q,
        turning_time_quantum=t_q,
        force_crossover_time=cross,
        jensen_t0_satisfied=jensen,
        max_lag=lag,
        diagnostics=diagnostics)
    return series, metrics


def audit_config(config: RunConfig) -> RunConfig:
    """The halved-resolution twin of a config, on the same sample times."""
    return replace(config,
                   n_points=2 * config.n_points - 1,
                   dt=0.5 * config.dt,
                   sample_every=2 * config.sample_every)
