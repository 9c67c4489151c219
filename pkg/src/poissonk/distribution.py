"""Core evaluation of the Poisson distribution of order k.

The distribution of order k >= 1 with rate lambda > 0 has pmf

    f(n) = exp(-k*lambda) * h(n),

where the scaled pmf h(n) is a degree-n polynomial in lambda with
nonnegative rational coefficients, h(0) = 1 and h(1) = lambda.  The
production path evaluates h via the O(n*k) compound-Poisson recurrence

    h[n] = (lambda/n) * sum_{j=1}^{min(n,k)} j * h[n-j];

exact composition enumeration is retained as an independent oracle
(:func:`exact_pmf_polynomial`).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from . import kernel
from .errors import (
    EnumerationBudgetError,
    InvalidParameterError,
    TailDominationError,
)

# k*lambda above this would overflow exp(k*lambda) in linear space
LOG_SPACE_THRESHOLD = 600.0

# guard band for the P(Y <= nu) >= 1/2 comparison
MEDIAN_GUARD = 1e-12

DEFAULT_TIE_TOLERANCE = 1e-9


def snap_floor(x: float, eps: float = 1e-9) -> int:
    """floor(x) robust to x sitting one ulp below an integer.

    Needed because kappa*lambda is often an exact integer mathematically
    (lambda = n/kappa) but not in floating point.
    """
    f = math.floor(x)
    if x - f > 1.0 - eps:
        return f + 1
    return f


@dataclass(frozen=True)
class OrderKParams:
    """The parameter pair (k, lambda).

    lambda = 0 is permitted only as the degenerate point mass at 0.
    """

    k: int
    lam: float

    def __post_init__(self) -> None:
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise InvalidParameterError(f"order k must be a positive integer, got {self.k}")
        if not (self.lam >= 0.0):
            raise InvalidParameterError(f"lambda must be >= 0, got {self.lam}")

    @property
    def kappa(self) -> int:
        return self.k * (self.k + 1) // 2


@dataclass(frozen=True)
class DerivedParams:
    """kappa = k(k+1)/2, mean = kappa*lambda, variance = k(k+1)(2k+1)*lambda/6."""

    kappa: int
    mean: float
    variance: float

    @classmethod
    def from_params(cls, params: OrderKParams) -> "DerivedParams":
        k = params.k
        kappa = k * (k + 1) // 2
        return cls(
            kappa=kappa,
            mean=kappa * params.lam,
            variance=k * (k + 1) * (2 * k + 1) * params.lam / 6.0,
        )

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)


def derived_params(params: OrderKParams) -> DerivedParams:
    return DerivedParams.from_params(params)


@dataclass(frozen=True)
class ScaledPmfTable:
    """Finite prefix h[0..n_max] of the scaled pmf.

    ``values`` holds h in linear space, or log h when ``log_space`` is set.
    """

    params: OrderKParams
    n_max: int
    values: np.ndarray
    log_space: bool = False

    def linear_values(self) -> np.ndarray:
        """h in linear space (may overflow to inf for extreme tables)."""
        if self.log_space:
            return np.exp(self.values)
        return self.values


def scaled_pmf_table(
    params: OrderKParams, n_max: int, log_space: Optional[bool] = None
) -> ScaledPmfTable:
    """Build h[0..n_max] via the recurrence.

    ``log_space=None`` selects log space automatically when k*lambda exceeds
    the linear overflow threshold.  ``log_space=False`` raises
    KernelOverflowError if a value overflows.
    """
    if n_max < 0:
        raise InvalidParameterError(f"n_max must be >= 0, got {n_max}")
    if log_space is None:
        log_space = params.k * params.lam > LOG_SPACE_THRESHOLD
    if log_space:
        values = kernel.log_scaled_pmf_values(params.k, params.lam, n_max)
    else:
        values = kernel.scaled_pmf_values(params.k, params.lam, n_max)
    values.setflags(write=False)
    return ScaledPmfTable(params=params, n_max=n_max, values=values, log_space=log_space)


def pmf(params: OrderKParams, n: int) -> float:
    """f(n) = exp(-k*lambda) * h(n)."""
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    klam = params.k * params.lam
    if klam > LOG_SPACE_THRESHOLD:
        logs = kernel.log_scaled_pmf_values(params.k, params.lam, n)
        return float(math.exp(logs[n] - klam))
    h = kernel.scaled_pmf_values(params.k, params.lam, n)
    return float(math.exp(-klam) * h[n])


@dataclass(frozen=True)
class ExactPmfPolynomial:
    """h(n) as an exact polynomial sum c[j] * lambda**j with rational c[j].

    c[j] is the sum of 1/(n_1! * ... * n_k!) over nonnegative solutions of
    n_1 + 2*n_2 + ... + k*n_k = n with n_1 + ... + n_k = j.
    """

    k: int
    n: int
    coefficients: Tuple[Fraction, ...]

    def evaluate(self, lam: Union[Fraction, int, float]) -> Union[Fraction, float]:
        """Horner evaluation; exact when ``lam`` is a Fraction or int."""
        acc: Union[Fraction, int, float] = 0
        for c in reversed(self.coefficients):
            acc = acc * lam + c
        return acc


def exact_pmf_polynomial(
    k: int, n: int, max_terms: int = 2_000_000
) -> ExactPmfPolynomial:
    """Enumerate all compositions n_1 + 2*n_2 + ... + k*n_k = n exactly.

    Exponential in n; intended as a test oracle (guideline n <= 150).
    Raises EnumerationBudgetError past ``max_terms`` enumerated solutions.
    """
    if k < 1 or n < 0:
        raise InvalidParameterError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
    coeffs = [Fraction(0)] * (n + 1)
    budget = [max_terms]

    def recurse(part: int, remaining: int, total_parts: int, denom: int) -> None:
        if part == 1:
            budget[0] -= 1
            if budget[0] < 0:
                raise EnumerationBudgetError(
                    f"enumeration budget exceeded for k={k}, n={n}"
                )
            # n_1 = remaining
            coeffs[total_parts + remaining] += Fraction(
                1, denom * math.factorial(remaining)
            )
            return
        for count in range(remaining // part + 1):
            recurse(
                part - 1,
                remaining - part * count,
                total_parts + count,
                denom * math.factorial(count),
            )

    recurse(min(k, n) if n > 0 else 1, n, 0, 1)
    return ExactPmfPolynomial(k=k, n=n, coefficients=tuple(coeffs))


def _table_length_for_cdf(params: OrderKParams) -> int:
    d = DerivedParams.from_params(params)
    return int(math.ceil(d.mean + 2.0 * d.sigma)) + params.k + 10


def cdf_and_median(params: OrderKParams) -> int:
    """Smallest integer nu with P(Y <= nu) >= 1/2.

    The >= 1/2 comparison carries a 1e-12 guard band so that the exact
    boundary lambda = ln2/k (where P(Y=0) = 1/2) returns median 0.
    """
    if params.lam == 0.0:
        return 0
    klam = params.k * params.lam
    n_max = _table_length_for_cdf(params)
    while True:
        if klam > LOG_SPACE_THRESHOLD:
            logs = kernel.log_scaled_pmf_values(params.k, params.lam, n_max)
            log_cdf = np.logaddexp.accumulate(logs) - klam
            hits = np.nonzero(log_cdf >= math.log(0.5 - MEDIAN_GUARD))[0]
        else:
            h = kernel.scaled_pmf_values(params.k, params.lam, n_max)
            cdf = math.exp(-klam) * np.cumsum(h)
            hits = np.nonzero(cdf >= 0.5 - MEDIAN_GUARD)[0]
        if hits.size:
            return int(hits[0])
        n_max *= 2  # cannot loop forever: total mass is 1


@dataclass(frozen=True)
class ModeResult:
    """All global-maximum locations of the pmf, ties within tie_tolerance."""

    modes: Tuple[int, ...]
    peak_height: float
    tie_tolerance: float

    @property
    def principal(self) -> int:
        return self.modes[0]


def _mode_window(params: OrderKParams) -> int:
    # proven upper bound floor(kappa*lambda), plus k cells of tail margin
    return snap_floor(params.kappa * params.lam) + params.k


def mode_set(
    params: OrderKParams, tie_tolerance: float = DEFAULT_TIE_TOLERANCE
) -> ModeResult:
    """Global maxima of the pmf, searched over [0, floor(kappa*lambda)].

    The table extends k cells past the proven bound purely to assert that
    the tail is decreasing and dominated by the in-window maximum.
    """
    if tie_tolerance < 0.0:
        raise InvalidParameterError("tie_tolerance must be >= 0")
    if params.lam == 0.0:
        return ModeResult(modes=(0,), peak_height=1.0, tie_tolerance=tie_tolerance)
    window = snap_floor(params.kappa * params.lam)
    n_max = window + params.k
    table = scaled_pmf_table(params, n_max)
    h = table.values  # logs or linear; both monotone-order preserving
    peak = float(np.max(h[: window + 1]))
    tail = h[window + 1 :]
    if tail.size >= 1:
        # with an empty window the edge n_max = k sits inside the initial
        # increasing run, where a strict-decrease check cannot apply
        if window >= 1 and not (h[n_max] < h[n_max - 1]):
            raise TailDominationError(
                f"pmf not strictly decreasing at window edge n={n_max} "
                f"(k={params.k}, lambda={params.lam})"
            )
        if float(np.max(tail)) >= peak:
            raise TailDominationError(
                f"tail exceeds in-window maximum (k={params.k}, lambda={params.lam})"
            )
    if table.log_space:
        cut = peak + math.log1p(-tie_tolerance) if tie_tolerance < 1.0 else -np.inf
        modes = np.nonzero(h[: window + 1] >= cut)[0]
        height = float(np.exp(peak))  # inf acceptable for extreme tables
    else:
        modes = np.nonzero(h[: window + 1] >= peak * (1.0 - tie_tolerance))[0]
        height = peak
    return ModeResult(
        modes=tuple(int(m) for m in modes),
        peak_height=height,
        tie_tolerance=tie_tolerance,
    )


def principal_mode(params: OrderKParams) -> int:
    """Smallest global-maximum index (exact float comparison, no tie band)."""
    if params.lam == 0.0:
        return 0
    window = snap_floor(params.kappa * params.lam)
    table = scaled_pmf_table(params, window + params.k)
    return int(np.argmax(table.values[: window + 1]))
