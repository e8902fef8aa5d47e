import numpy as np
import pytest

from rutherford1d.classical import (
    ClassicalState,
    analytic_closest_approach,
    classical_trajectory,
    coulomb_force,
    hamilton_step,
)
from rutherford1d.grid import MASS_ALPHA
from rutherford1d.potential import coupling_constant

K = coupling_constant(2, 79)
# conserved energy of the headline launch: p0^2/2m + k/|x0|
E_TOTAL = 20.455191993141644


def test_force_values_and_sign():
    f = coulomb_force(K)
    assert f(-500.0) == pytest.approx(-K / 500.0**2, rel=1e-14)
    assert f(250.0) == pytest.approx(K / 250.0**2, rel=1e-14)
    assert f(-1.0) < 0 < f(1.0)


def test_force_floor_and_validation():
    f = coulomb_force(K, min_distance=1e-3)
    with pytest.raises(ValueError):
        f(1e-4)
    with pytest.raises(ValueError):
        coulomb_force(-1.0)
    # zero coupling means free motion, valid everywhere
    free = coulomb_force(0.0)
    assert free(0.0) == 0.0
    assert free(1e-12) == 0.0


def test_free_step_is_exact_translation():
    # all four RK4 stages coincide when the force vanishes
    state = ClassicalState(x=-500.0, p=386.13)
    f = coulomb_force(0.0)
    out = hamilton_step(state, f, MASS_ALPHA, 1.0)
    assert out.x == pytest.approx(-500.0 + 386.13 / MASS_ALPHA, rel=1e-15)
    assert out.p == 386.13
    assert out.t == 1.0


def test_step_validation():
    state = ClassicalState(x=-500.0, p=386.13)
    f = coulomb_force(0.0)
    with pytest.raises(ValueError):
        hamilton_step(state, f, MASS_ALPHA, 0.0)
    with pytest.raises(ValueError):
        hamilton_step(state, f, MASS_ALPHA, float("inf"))
    with pytest.raises(ValueError):
        hamilton_step(state, f, 0.0, 0.5)


def test_rk4_order_on_harmonic_oscillator():
    # unit oscillator, one full period: RK4 should land back within O(dt^4)
    state = ClassicalState(x=1.0, p=0.0)
    n = 1000
    dt = 2.0 * np.pi / n
    for _ in range(n):
        state = hamilton_step(state, lambda x: -x, 1.0, dt)
    assert state.x == pytest.approx(1.0, abs=1e-9)
    assert state.p == pytest.approx(0.0, abs=1e-9)


def test_free_trajectory_is_uniform_motion():
    traj = classical_trajectory(-500.0, 386.13, MASS_ALPHA, 0.0,
                                dt=0.5, t_max=100.0)
    want = -500.0 + 386.13 / MASS_ALPHA * traj.times
    assert np.max(np.abs(traj.x - want)) < 1e-10
    assert np.all(traj.p == 386.13)
    assert np.all(traj.force == 0.0)


def test_trajectory_shape_and_args():
    traj = classical_trajectory(-500.0, 386.13, MASS_ALPHA, K,
                                dt=0.5, t_max=100.0)
    assert len(traj) == 201
    assert traj.times[0] == 0.0
    assert traj.times[-1] == pytest.approx(100.0)
    assert traj.force[0] == pytest.approx(-K / 500.0**2, rel=1e-14)
    with pytest.raises(ValueError):
        classical_trajectory(-500.0, 386.13, MASS_ALPHA, K, dt=0.5, t_max=0.0)
    with pytest.raises(ValueError):
        classical_trajectory(-500.0, 386.13, MASS_ALPHA, K, dt=-0.5, t_max=10.0)


def test_headline_energy_conservation():
    traj = classical_trajectory(-500.0, 386.13, MASS_ALPHA, K,
                                dt=0.5, t_max=12000.0)
    energy = traj.p**2 / (2.0 * MASS_ALPHA) + K / np.abs(traj.x)
    drift = np.max(np.abs(energy - energy[0])) / energy[0]
    assert drift < 1e-8
    assert energy[0] == pytest.approx(E_TOTAL, rel=1e-12)


def test_headline_turning_distance_matches_analytic():
    traj = classical_trajectory(-500.0, 386.13, MASS_ALPHA, K,
                                dt=0.5, t_max=12000.0)
    want = analytic_closest_approach(E_TOTAL, K)
    assert want == pytest.approx(11.122573556521957, rel=1e-12)
    # sampled minimum sits within a(dt/2)^2/2 of the true vertex
    assert np.min(np.abs(traj.x)) == pytest.approx(want, abs=1e-4)
    # the particle comes back out: final position is far from the nucleus
    assert traj.x[-1] < -500.0
    assert traj.p[-1] < 0.0


def test_analytic_closest_approach_values():
    assert analytic_closest_approach(20.0, K) == pytest.approx(
        11.375718877824846, rel=1e-12)
    assert analytic_closest_approach(40.0, K) == pytest.approx(
        analytic_closest_approach(20.0, K) / 2.0, rel=1e-14)
    with pytest.raises(ValueError):
        analytic_closest_approach(0.0, K)
    with pytest.raises(ValueError):
        analytic_closest_approach(20.0, 0.0)
