"""Shared fixtures: cached solvers, the stress grid, and the acceptance log."""

import functools

import numpy as np
import pytest

# one verdict line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cached_rk():
    from poissonk import solve_r_k

    return functools.lru_cache(maxsize=None)(solve_r_k)


@pytest.fixture(scope="session")
def cached_fdm():
    from poissonk import first_double_mode

    return functools.lru_cache(maxsize=None)(first_double_mode)


@pytest.fixture(scope="session")
def cached_jumps():
    from poissonk import jump_boundaries

    return functools.lru_cache(maxsize=None)(jump_boundaries)


@pytest.fixture(scope="session")
def stress_grid():
    """Mode sets over k in [2, 200] at 200 rates in (lambda_hat_k, 2).

    Each record is (k, lam, modes, lower, upper) with the conjectured
    window [floor(kappa*lam) - k, floor(kappa*lam)].  Computed once and
    shared by the mode-bound and triple-mode acceptance checks.
    """
    from poissonk import OrderKParams, first_double_mode, mode_set
    from poissonk.distribution import snap_floor

    records = []
    for k in range(2, 201):
        lambda_hat = first_double_mode(k).lambda_hat
        for lam in np.linspace(lambda_hat, 2.0, 202)[1:-1]:
            lam = float(lam)
            modes = mode_set(OrderKParams(k, lam), tie_tolerance=1e-10).modes
            floor_mean = snap_floor(k * (k + 1) // 2 * lam)
            records.append((k, lam, modes, floor_mean - k, floor_mean))
    return records
