"""Shared heavy fixtures for the acceptance suite.

Both runs take minutes; they are session-scoped and lazy, so the fast
unit files never pay for them.
"""

from dataclasses import replace

import pytest

from rutherford1d.experiment import RunConfig, audit_config, run_comparison


@pytest.fixture(scope="session")
def headline():
    """Full comparison at the default resolution and schedule."""
    return run_comparison(RunConfig())


@pytest.fixture(scope="session")
def audit():
    """Halved-step twin of the default run.

    Runs to t_max = 6500 fm/c only: every compared metric is fixed by
    the first turning/crossing events near t ~ 5000, so the shorter
    schedule yields identical values at half the cost (asserted in the
    convergence criterion).
    """
    base = replace(RunConfig(), t_max=6500.0)
    return run_comparison(audit_config(base))
