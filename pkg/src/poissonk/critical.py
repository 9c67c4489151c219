"""Critical rate parameters: r_k, the first double mode, and jump boundaries.

Every solver is a bisection on a function that is strictly monotone in
lambda because each h(n; .) is strictly increasing: so is their maximum,
which makes the first-double-mode equation M(lambda) = 1 well posed.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .distribution import (
    OrderKParams,
    principal_mode,
    scaled_pmf_table,
    snap_floor,
)
from .errors import (
    BracketViolationError,
    CountMismatchError,
    InvalidParameterError,
    NoSignChangeError,
)
from .shape import ModeJumpEvent, PeakKind, analyze_shape, classify_regime, mode_trajectory


@dataclass(frozen=True)
class SolverConfig:
    """Single home for all solver tolerances (reproducibility of digits)."""

    lambda_tol: float = 1e-11
    residual_tol: float = 1e-12
    max_iter: int = 200


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    f_lo_sign: int
    f_hi_sign: int

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise InvalidParameterError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    config: SolverConfig = DEFAULT_CONFIG,
) -> Tuple[float, float]:
    """Plain bisection; returns (root, residual).

    Stops when the bracket width is below lambda_tol or the midpoint
    residual is below residual_tol.
    """
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0.0:
        return lo, 0.0
    if f_hi == 0.0:
        return hi, 0.0
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise NoSignChangeError(
            f"no sign change on [{lo}, {hi}]: f={f_lo}, {f_hi}"
        )
    mid, f_mid = lo, f_lo
    for _ in range(config.max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:  # float resolution exhausted
            break
        f_mid = f(mid)
        if abs(f_mid) <= config.residual_tol:
            return mid, f_mid
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if hi - lo <= config.lambda_tol:
            break
    mid = 0.5 * (lo + hi)
    return mid, f(mid)


@dataclass(frozen=True)
class CriticalR:
    """r_k: the root in (0,1) of h(k; lambda) = 1.

    For k=1 the equation is lambda = 1, on the boundary of (0,1);
    ``boundary`` flags that degenerate case.
    """

    k: int
    r_k: float
    boundary: bool = False


def _h_at_k(k: int, lam: float) -> float:
    return float(scaled_pmf_table(OrderKParams(k, lam), k).values[k])


def solve_r_k(k: int, config: SolverConfig = DEFAULT_CONFIG) -> CriticalR:
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    if k == 1:
        return CriticalR(k=1, r_k=1.0, boundary=True)
    g = lambda lam: _h_at_k(k, lam) - 1.0
    lo, hi = 1e-12, 1.0
    if not (g(lo) < 0.0 < g(hi)):
        raise BracketViolationError(
            f"h_k(k; lambda) - 1 does not change sign on (0,1) for k={k}"
        )
    root, _ = bisect(g, lo, hi, config)
    return CriticalR(k=k, r_k=root)


def _max_scaled_pmf(k: int, lam: float) -> Tuple[float, int]:
    """(max over n >= 1 of h(n), argmax).  Window from the proven mode bound."""
    params = OrderKParams(k, lam)
    window = max(snap_floor(params.kappa * lam), k) + k
    h = scaled_pmf_table(params, window).values
    idx = int(np.argmax(h[1:])) + 1
    return float(h[idx]), idx


@dataclass(frozen=True)
class FirstDoubleMode:
    """Smallest lambda with a double mode; the joint modes are 0 and m_hat."""

    k: int
    lambda_hat: float
    m_hat: int


def first_double_mode(k: int, config: SolverConfig = DEFAULT_CONFIG) -> FirstDoubleMode:
    """Bisection on M(lambda) - 1 over [2/(k+1), r_k].

    M(lambda) = max_{n>=1} h(n; lambda) is continuous and strictly
    increasing, so the root is unique.  For k <= 14 the solution sits at
    r_k itself (m_hat = k), so the upper end is inflated by a relative
    1e-7 to keep a float sign change inside the bracket.
    """
    if k < 2:
        raise InvalidParameterError(f"first double mode needs k >= 2, got {k}")
    r_k = solve_r_k(k, config).r_k
    lo = 2.0 / (k + 1)
    hi = min(1.0, r_k * (1.0 + 1e-7))
    f = lambda lam: _max_scaled_pmf(k, lam)[0] - 1.0
    f_lo, f_hi = f(lo), f(hi)
    if f_lo > 1e-9 or f_hi < -1e-9:
        raise BracketViolationError(
            f"proved bounds 2/(k+1) <= lambda_hat <= r_k violated for k={k}: "
            f"M(lo)-1={f_lo}, M(hi)-1={f_hi}"
        )
    if f_lo >= 0.0:  # lambda_hat == 2/(k+1) to float precision
        lambda_hat = lo
    else:
        lambda_hat, _ = bisect(f, lo, hi, config)
    # break the exact tie with 0 toward the nonzero mode
    _, m_hat = _max_scaled_pmf(k, lambda_hat + 1e-13)
    return FirstDoubleMode(k=k, lambda_hat=lambda_hat, m_hat=m_hat)


@dataclass(frozen=True)
class DoubleModeEvent:
    """A lambda where h(m1) = h(m2); modal iff both are global maxima there."""

    lambda_star: float
    m1: int
    m2: int
    heights_equal_to: float
    modal: bool = True


def double_mode_between(
    k: int,
    m1: int,
    m2: int,
    bracket: RootBracket,
    config: SolverConfig = DEFAULT_CONFIG,
    modal_rtol: float = 1e-9,
) -> DoubleModeEvent:
    """Solve h(m1; lambda) = h(m2; lambda) on the bracket.

    If the tied height is not the global maximum at the root, the event is
    returned with ``modal=False`` (a tie exists but is not a double mode).
    """
    if not 0 <= m1 < m2:
        raise InvalidParameterError(f"need 0 <= m1 < m2, got {m1}, {m2}")
    n_max = max(m2, snap_floor(k * (k + 1) // 2 * bracket.hi)) + k

    def diff(lam: float) -> float:
        h = scaled_pmf_table(OrderKParams(k, lam), n_max).values
        return float(h[m1] - h[m2])

    root, _ = bisect(diff, bracket.lo, bracket.hi, config)
    h = scaled_pmf_table(OrderKParams(k, root), n_max).values
    height = float(h[m1])
    global_max = float(np.max(h))
    modal = height >= global_max * (1.0 - modal_rtol)
    return DoubleModeEvent(
        lambda_star=root, m1=m1, m2=m2, heights_equal_to=height, modal=modal
    )


def make_bracket(f: Callable[[float], float], lo: float, hi: float) -> RootBracket:
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0 or f_hi == 0.0 or math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise NoSignChangeError(f"no sign change on [{lo}, {hi}]")
    return RootBracket(
        lo=lo,
        hi=hi,
        f_lo_sign=int(math.copysign(1, f_lo)),
        f_hi_sign=int(math.copysign(1, f_hi)),
    )


def jump_boundaries(
    k: int,
    config: SolverConfig = DEFAULT_CONFIG,
    grid_points: int = 500,
) -> List[DoubleModeEvent]:
    """All mode-jump boundary lambdas in (0, 2], ordered.

    The first event comes from the dedicated first-double-mode solver; the
    rest from trajectory refinement, each tightened by a pairwise tie solve.
    The count must match the regime prediction.
    """
    regime = classify_regime(k)
    first = first_double_mode(k, config)
    events = [
        DoubleModeEvent(
            lambda_star=first.lambda_hat,
            m1=0,
            m2=first.m_hat,
            heights_equal_to=1.0,
            modal=True,
        )
    ]
    start = first.lambda_hat * (1.0 + 1e-7)
    grid = np.linspace(start, 2.0, grid_points)
    _, raw_jumps = mode_trajectory(k, grid)
    for jump in raw_jumps:
        width = 1e-7
        bracket = None
        n_max = jump.mode_after + 2 * k

        def diff(lam: float, jump: ModeJumpEvent = jump, n_max: int = n_max) -> float:
            h = scaled_pmf_table(OrderKParams(k, lam), n_max).values
            return float(h[jump.mode_before] - h[jump.mode_after])

        while bracket is None and width < 1e-3:
            try:
                bracket = make_bracket(
                    diff, jump.lambda_at_jump - width, jump.lambda_at_jump + width
                )
            except NoSignChangeError:
                width *= 10.0
        if bracket is None:
            raise NoSignChangeError(
                f"could not bracket tie for jump {jump} at k={k}"
            )
        events.append(
            double_mode_between(k, jump.mode_before, jump.mode_after, bracket, config)
        )
    events.sort(key=lambda e: e.lambda_star)
    if len(events) != regime.expected_mode_jumps:
        raise CountMismatchError(
            f"k={k}: {len(events)} jump boundaries found, regime predicts "
            f"{regime.expected_mode_jumps}"
        )
    return events


def consecutive_double_mode(
    k: int, m: int, config: SolverConfig = DEFAULT_CONFIG
) -> DoubleModeEvent:
    """The flat-top tie where the principal mode steps from m to m+1.

    Valid only for m in a unit-step stretch of the mode staircase (not an
    integer skipped by a jump).  The bracket comes from binary search on the
    staircase itself, which is non-decreasing in lambda.
    """
    if m < 1:
        raise InvalidParameterError(f"need m >= 1, got {m}")
    lo, hi = 1e-9, 1.0
    while principal_mode(OrderKParams(k, hi)) <= m:
        hi *= 2.0
        if hi > 1e6:
            raise BracketViolationError(f"mode never exceeds {m} for k={k}?")
    # shrink to the staircase boundary between mode<=m and mode>=m+1
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if principal_mode(OrderKParams(k, mid)) <= m:
            lo = mid
        else:
            hi = mid
    if principal_mode(OrderKParams(k, lo)) != m:
        raise NoSignChangeError(
            f"mode {m} is skipped by a jump for k={k}; no consecutive tie"
        )
    n_max = m + 1 + 2 * k

    def diff(lam: float) -> float:
        h = scaled_pmf_table(OrderKParams(k, lam), n_max).values
        return float(h[m] - h[m + 1])

    pad = max(1e-9, 4.0 * (hi - lo))
    bracket = make_bracket(diff, lo - pad, hi + pad)
    return double_mode_between(k, m, m + 1, bracket, config)


def _mountain_peaks(k: int, lam: float):
    params = OrderKParams(k, lam)
    n_max = max(snap_floor(params.kappa * lam), k) + k
    table = scaled_pmf_table(params, n_max)
    return analyze_shape(table).mountain.peaks


def peak_vs_point_k_tie(
    k: int, config: SolverConfig = DEFAULT_CONFIG
) -> DoubleModeEvent:
    """Lambda where the left mountain peak height equals h(k).

    For k >= 15 both heights are below 1 there, so the event is a tie but
    not a double mode (modal=False); diagnostic for the regime figures.
    """
    if k < 4:
        raise InvalidParameterError(f"needs a distinct left peak, k >= 4; got {k}")
    lambda_hat = first_double_mode(k, config).lambda_hat

    def diff(lam: float) -> float:
        params = OrderKParams(k, lam)
        n_max = max(snap_floor(params.kappa * lam), k) + k
        h = scaled_pmf_table(params, n_max).values
        mountain_max = float(np.max(h[k + 2 :]))
        return mountain_max - float(h[k])

    lo = lambda_hat * 0.3
    while diff(lo) >= 0.0:
        lo *= 0.5
        if lo < 1e-9:
            raise BracketViolationError(f"left peak never below h(k) for k={k}")
    hi = lambda_hat * (1.0 + 1e-6)
    while diff(hi) <= 0.0:
        hi *= 1.1
    root, _ = bisect(diff, lo, hi, config)
    h = scaled_pmf_table(OrderKParams(k, root), 2 * k + snap_floor(k * (k + 1) / 2 * root)).values
    m_left = int(np.argmax(h[k + 2 :])) + k + 2
    height = float(h[k])
    modal = height >= float(np.max(h)) * (1.0 - 1e-9)
    return DoubleModeEvent(
        lambda_star=root, m1=k, m2=m_left, heights_equal_to=height, modal=modal
    )


def left_right_peak_tie(
    k: int, config: SolverConfig = DEFAULT_CONFIG
) -> DoubleModeEvent:
    """Lambda where the two mountain peaks have equal heights.

    Modal for k in [4, 41] (the tie is the final mode jump); for k >= 42 it
    happens below height 1 and is returned with modal=False.
    """
    if k < 4:
        raise InvalidParameterError(f"two mountain peaks need k >= 4, got {k}")
    lambda_hat = first_double_mode(k, config).lambda_hat

    def two_peak_diff(lam: float) -> Optional[float]:
        peaks = _mountain_peaks(k, lam)
        named = {p.kind: p for p in peaks}
        if PeakKind.LEFT not in named or PeakKind.RIGHT not in named:
            return None
        return named[PeakKind.RIGHT].height - named[PeakKind.LEFT].height

    # find a two-peak window around / above lambda_hat and bracket the tie
    lo = None
    hi = None
    for mult in np.linspace(0.7, 3.0, 120):
        lam = lambda_hat * float(mult)
        d = two_peak_diff(lam)
        if d is None:
            continue
        if d < 0.0:
            lo = lam
        elif lo is not None:
            hi = lam
            break
    if lo is None or hi is None:
        raise BracketViolationError(f"could not bracket the peak tie for k={k}")

    def diff(lam: float) -> float:
        d = two_peak_diff(lam)
        # near the root both peaks exist; treat a vanished peak as deep negative
        return d if d is not None else -1.0

    root, _ = bisect(diff, lo, hi, config)
    peaks = _mountain_peaks(k, root)
    named = {p.kind: p for p in peaks}
    left = named.get(PeakKind.LEFT, peaks[0])
    right = named.get(PeakKind.RIGHT, peaks[-1])
    params = OrderKParams(k, root)
    h = scaled_pmf_table(params, max(snap_floor(params.kappa * root), k) + k).values
    modal = left.height >= float(np.max(h)) * (1.0 - 1e-9)
    return DoubleModeEvent(
        lambda_star=root,
        m1=left.location,
        m2=right.location,
        heights_equal_to=left.height,
        modal=modal,
    )
