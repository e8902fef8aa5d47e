import numpy as np
import pytest

from rutherford1d.experiment import (
    BoundaryContaminationError,
    RunConfig,
    audit_config,
    closest_approach,
    jensen_report,
    max_lag,
    run_comparison,
)

K = 227.51437755649692


# -------------------------------------------------------------- config


def test_default_config_is_valid():
    RunConfig().validate()


@pytest.mark.parametrize("field,value", [
    ("sigma_list", ()),
    ("sigma_list", (20.0, -1.0)),
    ("sigma_list", (20.0, 20.0)),
    ("x0", 10.0),
    ("p0", -386.13),
    ("z1", -1),
    ("z2", -79),
    ("mass", 0.0),
    ("x_min", 300.0),
    ("n_points", 2),
    ("dt", 0.0),
    ("t_max", -1.0),
    ("sample_every", 0),
    ("softening_cut", -0.05),
])
def test_config_rejects_bad_field(field, value):
    cfg = RunConfig(**{field: value})
    with pytest.raises(ValueError, match=field.split("_")[0]):
        cfg.validate()


def test_config_normalizes_sigma_list():
    cfg = RunConfig(sigma_list=[20.0, 50.0])
    assert cfg.sigma_list == (20.0, 50.0)
    assert cfg == RunConfig(sigma_list=(20.0, 50.0))


def test_audit_config_halves_both_steps():
    cfg = RunConfig()
    aud = audit_config(cfg)
    aud.validate()
    assert aud.n_points == 2 * cfg.n_points - 1
    assert aud.dt == cfg.dt / 2
    assert aud.sample_every == 2 * cfg.sample_every
    # identical sampled time axis
    assert aud.dt * aud.sample_every == cfg.dt * cfg.sample_every


# ------------------------------------------------------------ reducers


def synthetic_turn(offset):
    # parabola with vertex (100, -11); momentum flips where the slope does
    t = offset + 5.0 * np.arange(41)
    x = -11.0 - 1e-3 * (t - 100.0) ** 2
    p = -2e-3 * (t - 100.0)
    return t, x, p


def test_closest_approach_recovers_vertex():
    for offset in (0.0, 1.7):
        t, x, p = synthetic_turn(offset)
        t_star, dist = closest_approach(t, x, p)
        assert t_star == pytest.approx(100.0, abs=1e-9)
        assert dist == pytest.approx(11.0, abs=1e-9)


def test_closest_approach_none_when_monotone():
    t = np.linspace(0.0, 100.0, 51)
    x = -500.0 + 2.0 * t
    p = np.full_like(t, 386.13)
    assert closest_approach(t, x, p) is None


def test_jensen_report_crossing_interpolated():
    t = np.linspace(0.0, 200.0, 21)
    quantum = -(2.0 - 0.01 * t)
    classical = np.full_like(t, -1.0)
    satisfied, t_cross = jensen_report(t, quantum, classical)
    assert satisfied is True
    assert t_cross == pytest.approx(100.0, rel=1e-12)


def test_jensen_report_no_crossing():
    t = np.linspace(0.0, 200.0, 21)
    quantum = np.full_like(t, -2.0)
    classical = np.full_like(t, -1.0)
    assert jensen_report(t, quantum, classical) == (True, None)
    # flipped roles: starts below, never above
    satisfied, t_cross = jensen_report(t, classical, quantum)
    assert satisfied is False
    assert t_cross is None


def test_max_lag_windows_and_interpolates():
    t = np.arange(11.0)
    classical = t.copy()
    quantum = np.zeros_like(t)
    # no window: takes the global sampled maximum
    assert max_lag(t, classical, quantum, None) == pytest.approx(10.0)
    # window edge between samples: interpolated candidate wins
    got = max_lag(t, classical, quantum, 6.5, x_turn_quantum=0.0)
    assert got == pytest.approx(6.5, rel=1e-12)
    # quantum edge value interpolated when not supplied
    got = max_lag(t, classical, quantum, 6.5)
    assert got == pytest.approx(6.5, rel=1e-12)


# ------------------------------------------------------- full pipeline


def free_config():
    return RunConfig(x0=-480.0, sigma_list=(20.0,), z1=0, z2=79,
                     x_min=-650.0, x_max=-150.0, n_points=16001,
                     dt=0.25, t_max=1500.0, sample_every=40)


def test_free_run_tracks_uniform_motion():
    series, metrics = run_comparison(free_config())
    assert len(series) == 151
    assert series.times[0] == 0.0
    assert series.times[-1] == pytest.approx(1500.0)
    q = series.quantum[20.0]
    # a free packet's center rides the classical trajectory
    assert np.max(np.abs(q.mean_x - series.classical_x)) < 0.3
    assert np.max(np.abs(q.mean_p - 386.13)) < 0.5
    assert metrics.closest_approach_classical is None
    assert metrics.turning_time_classical is None
    assert metrics.closest_approach_analytic == 0.0
    assert metrics.closest_approach_quantum[20.0] is None
    assert metrics.turning_time_quantum[20.0] is None
    assert metrics.force_crossover_time[20.0] is None
    assert metrics.jensen_t0_satisfied[20.0] is True
    assert abs(metrics.max_lag[20.0]) < 0.3
    assert metrics.diagnostics["max_norm_deviation_sigma_20"] < 1e-10
    assert metrics.diagnostics["energy_drift_sigma_20"] < 1e-10


def test_coarse_headline_orderings():
    # pilot resolution: fast, and every qualitative ordering already holds
    cfg = RunConfig(n_points=18001, dt=0.5, t_max=6500.0, sample_every=12)
    series, metrics = run_comparison(cfg)
    d_cl = metrics.closest_approach_classical
    assert d_cl == pytest.approx(11.1226, abs=0.05)
    d20 = metrics.closest_approach_quantum[20.0]
    d50 = metrics.closest_approach_quantum[50.0]
    # wider packets stop farther out, and both stop before the classical point
    assert d_cl < d20 < d50
    assert metrics.max_lag[20.0] < metrics.max_lag[50.0]
    for sigma in (20.0, 50.0):
        assert metrics.jensen_t0_satisfied[sigma] is True
        t_cross = metrics.force_crossover_time[sigma]
        assert t_cross is not None
        assert 0.0 < t_cross < metrics.turning_time_classical
        assert metrics.max_lag[sigma] > 0.0


def test_wall_contamination_raises():
    cfg = RunConfig(x0=-50.0, p0=386.13, sigma_list=(5.0,), z1=0, z2=0,
                    x_min=-90.0, x_max=-10.0, n_points=1601,
                    dt=0.5, t_max=600.0, sample_every=20)
    with pytest.raises(BoundaryContaminationError):
        run_comparison(cfg)


def test_runs_are_deterministic():
    cfg = RunConfig(x0=-220.0, sigma_list=(10.0,), x_min=-300.0,
                    x_max=-100.0, n_points=2001, dt=0.5, t_max=200.0,
                    sample_every=20)
    series_a, metrics_a = run_comparison(cfg)
    series_b, metrics_b = run_comparison(cfg)
    assert np.array_equal(series_a.quantum[10.0].mean_x,
                          series_b.quantum[10.0].mean_x)
    assert np.array_equal(series_a.classical_x, series_b.classical_x)
    assert metrics_a.max_lag == metrics_b.max_lag
    assert metrics_a.diagnostics == metrics_b.diagnostics


def test_t_max_below_one_sample_interval_rejected():
    cfg = RunConfig(x0=-200.0, sigma_list=(10.0,), x_min=-300.0,
                    x_max=-100.0, n_points=2001, dt=0.5, t_max=5.0,
                    sample_every=20)
    with pytest.raises(ValueError):
        run_comparison(cfg)
