"""Shape taxonomy of the scaled pmf.

The histogram splits into three sections: the point at n=0 (height 1), the
strictly increasing run n in [1, k], and the "mountain range" n > k which
carries at most two peaks.  As lambda grows the global maximum hands over
between four actors (n=0, n=k, left peak, right peak), producing between one
and three mode jumps depending on k.
"""

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .distribution import (
    OrderKParams,
    ScaledPmfTable,
    principal_mode,
    snap_floor,
)
from .errors import (
    InvalidParameterError,
    RefinementBudgetError,
    StructuralAnomalyError,
    WindowTooSmallError,
)

FLAT_TOP_RTOL = 1e-12

JUMP_LAMBDA_TOL = 1e-9

MAX_REFINEMENT_STEPS = 200


class PeakKind(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    SINGLE = "single"


@dataclass(frozen=True)
class Peak:
    location: int
    height: float
    kind: PeakKind


@dataclass(frozen=True)
class MountainRange:
    """Peak inventory of the region n > k."""

    start: int
    peaks: Tuple[Peak, ...]
    monotone_decreasing: bool


@dataclass(frozen=True)
class PmfShape:
    zero_height: float
    increasing_run_ok: bool
    local_max_at_k: bool
    mountain: MountainRange


class Regime(enum.Enum):
    """k-ranges with distinct mode-jump counts."""

    K2_3 = "k in [2,3]"
    K4_14 = "k in [4,14]"
    K15_41 = "k in [15,41]"
    K42_PLUS = "k >= 42"

    @property
    def expected_mode_jumps(self) -> int:
        return {
            Regime.K2_3: 2,
            Regime.K4_14: 3,
            Regime.K15_41: 2,
            Regime.K42_PLUS: 1,
        }[self]


def classify_regime(k: int) -> Regime:
    if k < 2:
        raise InvalidParameterError(
            "regime classification needs k >= 2 (k=1 is the standard Poisson)"
        )
    if k <= 3:
        return Regime.K2_3
    if k <= 14:
        return Regime.K4_14
    if k <= 41:
        return Regime.K15_41
    return Regime.K42_PLUS


def _find_peaks(h: np.ndarray, start: int, log_space: bool) -> List[Tuple[int, float]]:
    """Local maxima of h at indices >= start, merging flat tops.

    Index n is a peak iff h[n] > h[n-1] and h[n] >= h[n+1]; a run of equal
    heights (within FLAT_TOP_RTOL) counts once, at its leftmost index.
    Flat tops occur exactly at double modes.
    """
    peaks: List[Tuple[int, float]] = []
    n_max = h.shape[0] - 1
    if log_space:
        equal = lambda a, b: abs(a - b) <= FLAT_TOP_RTOL
    else:
        equal = lambda a, b: abs(a - b) <= FLAT_TOP_RTOL * max(abs(a), abs(b))
    n = max(start, 1)
    while n < n_max:
        if h[n] > h[n - 1] and h[n] >= h[n + 1]:
            j = n
            while j < n_max and equal(h[j + 1], h[n]):
                j += 1
            if j == n_max or h[j + 1] < h[n]:
                peaks.append((n, float(h[n])))
            n = j + 1
        else:
            n += 1
    return peaks


def analyze_shape(table: ScaledPmfTable) -> PmfShape:
    """Classify one table: increasing run, local max at k, mountain peaks."""
    params = table.params
    k = params.k
    required = snap_floor(params.kappa * params.lam) + k
    if table.n_max < required:
        raise WindowTooSmallError(
            f"table covers n <= {table.n_max}, shape analysis needs n_max >= {required}"
        )
    h = table.values
    increasing_ok = bool(np.all(np.diff(h[1 : k + 1]) > 0)) if k >= 2 else True
    local_max_at_k = table.n_max > k and bool(h[k] > h[k + 1])
    raw = _find_peaks(h, k + 1, table.log_space)
    if table.log_space:
        raw = [(loc, math.exp(v)) for loc, v in raw]
    if len(raw) > 2:
        raise StructuralAnomalyError(
            f"{len(raw)} mountain peaks at k={k}, lambda={params.lam}: {raw}"
        )
    if len(raw) == 2:
        kinds = [PeakKind.LEFT, PeakKind.RIGHT]
    else:
        kinds = [PeakKind.SINGLE]
    peaks = tuple(
        Peak(location=loc, height=height, kind=kind)
        for (loc, height), kind in zip(raw, kinds)
    )
    mountain_section = h[k + 1 :]
    monotone = bool(np.all(np.diff(mountain_section) < 0)) if mountain_section.size > 1 else True
    mountain = MountainRange(start=k + 1, peaks=peaks, monotone_decreasing=monotone)
    zero_height = 1.0
    return PmfShape(
        zero_height=zero_height,
        increasing_run_ok=increasing_ok,
        local_max_at_k=local_max_at_k,
        mountain=mountain,
    )


@dataclass(frozen=True)
class ModeJumpEvent:
    """The mode skips integers as lambda crosses lambda_at_jump."""

    lambda_at_jump: float
    mode_before: int
    mode_after: int

    @property
    def skipped(self) -> frozenset:
        return frozenset(range(self.mode_before + 1, self.mode_after))


def _refine_jumps(
    k: int,
    lo: float,
    hi: float,
    m_lo: int,
    m_hi: int,
    events: List[ModeJumpEvent],
    budget: List[int],
) -> None:
    """Recursively bisect [lo, hi] until each mode jump is isolated to 1e-9."""
    if m_hi - m_lo <= 1:
        return
    if hi - lo < JUMP_LAMBDA_TOL:
        events.append(
            ModeJumpEvent(lambda_at_jump=0.5 * (lo + hi), mode_before=m_lo, mode_after=m_hi)
        )
        return
    budget[0] -= 1
    if budget[0] < 0:
        raise RefinementBudgetError(
            f"jump refinement exceeded iteration cap for k={k} on [{lo}, {hi}]"
        )
    mid = 0.5 * (lo + hi)
    m_mid = principal_mode(OrderKParams(k, mid))
    _refine_jumps(k, lo, mid, m_lo, m_mid, events, budget)
    _refine_jumps(k, mid, hi, m_mid, m_hi, events, budget)


def mode_trajectory(
    k: int, lambda_grid: Sequence[float]
) -> Tuple[List[Tuple[float, int]], List[ModeJumpEvent]]:
    """Principal mode along the grid, with all jump events isolated by bisection.

    The grid should be increasing; each refinement bisects a cell where the
    mode changes by >= 2 until the lambda interval is below 1e-9.
    """
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    grid = [float(l) for l in lambda_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParameterError("lambda_grid must be strictly increasing")
    points = [(lam, principal_mode(OrderKParams(k, lam))) for lam in grid]
    events: List[ModeJumpEvent] = []
    for (lo, m_lo), (hi, m_hi) in zip(points, points[1:]):
        # one budget per cell; ~log2(width/1e-9) levels, with slack for
        # unit steps sharing the cell
        _refine_jumps(k, lo, hi, m_lo, m_hi, events, [MAX_REFINEMENT_STEPS])
    events.sort(key=lambda e: e.lambda_at_jump)
    return points, events


def default_trajectory_grid(k: int, n_points: int = 400) -> np.ndarray:
    """Grid on (0, 2] dense enough to separate jumps from unit steps."""
    return np.linspace(2.0 / n_points, 2.0, n_points)


def excluded_values(k: int, n_points: int = 400) -> frozenset:
    """Integers that can never be modes: skipped by jumps, plus [1,k-1] and k+1."""
    regime = classify_regime(k)
    _, events = mode_trajectory(k, default_trajectory_grid(k, n_points))
    if len(events) != regime.expected_mode_jumps:
        raise StructuralAnomalyError(
            f"k={k}: found {len(events)} mode jumps, regime predicts "
            f"{regime.expected_mode_jumps}"
        )
    excluded = set(range(1, k)) | {k + 1}
    for event in events:
        excluded |= event.skipped
    return frozenset(excluded)
