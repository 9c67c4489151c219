"""Backend equivalence and numeric-range behavior of the table kernels."""

import numpy as np
import pytest

from poissonk import kernel
from poissonk import _kernel_py
from poissonk.errors import InvalidParameterError, KernelOverflowError


def _pure_scaled_pmf(k, lam, n_max):
    h = np.empty(n_max + 1)
    assert _kernel_py.scaled_pmf_fill(k, lam, h) == 0
    return h


@pytest.mark.parametrize("k", [1, 2, 5, 17, 50])
@pytest.mark.parametrize("lam", [0.01, 0.3, 1.0, 2.5])
def test_backends_agree(k, lam):
    n_max = 300
    fast = kernel.scaled_pmf_values(k, lam, n_max)
    pure = _pure_scaled_pmf(k, lam, n_max)
    np.testing.assert_allclose(fast, pure, rtol=1e-13)


@pytest.mark.parametrize("k,lam", [(3, 0.7), (20, 1.1), (7, 4.0)])
def test_log_space_matches_linear(k, lam):
    n_max = 200
    lin = kernel.scaled_pmf_values(k, lam, n_max)
    log = kernel.log_scaled_pmf_values(k, lam, n_max)
    np.testing.assert_allclose(log[1:], np.log(lin[1:]), rtol=0, atol=1e-11)
    assert log[0] == 0.0


def test_log_space_backends_agree_with_rescaling():
    # k*lam large enough to force several window rescalings
    k, lam, n_max = 30, 60.0, 40000
    out_fast = kernel.log_scaled_pmf_values(k, lam, n_max)
    out_pure = np.empty(n_max + 1)
    buf = np.zeros(k + 1)
    _kernel_py.scaled_pmf_log_fill(k, lam, out_pure, buf)
    np.testing.assert_allclose(out_fast, out_pure, rtol=1e-12)
    # normalization in log space: logsumexp(log h) == k*lam
    m = out_fast.max()
    total = m + np.log(np.sum(np.exp(out_fast - m)))
    assert total == pytest.approx(k * lam, abs=1e-8)


def test_linear_overflow_signals():
    with pytest.raises(KernelOverflowError):
        kernel.scaled_pmf_values(5, 200.0, 5000)


def test_lambda_zero_is_point_mass():
    h = kernel.scaled_pmf_values(4, 0.0, 6)
    assert h[0] == 1.0
    assert np.all(h[1:] == 0.0)


@pytest.mark.parametrize("k,lam,n_max", [(0, 1.0, 5), (3, -0.5, 5), (3, 1.0, -1)])
def test_invalid_parameters(k, lam, n_max):
    with pytest.raises(InvalidParameterError):
        kernel.scaled_pmf_values(k, lam, n_max)
