"""Closed-form bounds, criteria and asymptotic formulas, plus the scan harness.

Claims are registered with a ``proved`` flag: a violation of a proved
statement is an implementation bug (CLI exit status 2), while a violation of
a conjecture would be a finding worth reporting, not a failure.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .critical import FirstDoubleMode, first_double_mode, solve_r_k
from .distribution import (
    OrderKParams,
    cdf_and_median,
    mode_set,
    principal_mode,
    snap_floor,
)
from .errors import InvalidParameterError

LN2 = math.log(2.0)


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one claim checked at one point.

    ``slack`` is >= 0 exactly when the claim holds (distance to the nearest
    violated inequality, negative when violated).
    """

    claim_id: str
    point: Tuple
    holds: bool
    slack: float
    witness: Optional[Dict] = None


def frac(x: float) -> float:
    """Fractional part x - floor(x)."""
    return x - math.floor(x)


# ---------------------------------------------------------------------------
# median criteria and bounds


def median_zero_criterion(k: int, lam: float) -> bool:
    """The median is zero iff lambda <= ln2 / k (proved)."""
    return lam <= LN2 / k


def mode_zero_sufficient(k: int, lam: float) -> bool:
    """lambda < 2/(k+1) forces a unique mode at zero (sufficient only)."""
    return lam < 2.0 / (k + 1)


def median_zero_implies_mode_zero_check(k: int, lam: float) -> BoundReport:
    """Proved implication: median zero forces mode zero."""
    if not median_zero_criterion(k, lam):
        raise InvalidParameterError(
            f"precondition lambda <= ln2/k violated: k={k}, lambda={lam}"
        )
    modes = mode_set(OrderKParams(k, lam)).modes
    holds = modes == (0,)
    return BoundReport(
        claim_id="median_zero_implies_mode_zero",
        point=(k, lam),
        holds=holds,
        slack=0.0 if holds else -1.0,
        witness=None if holds else {"modes": list(modes)},
    )


@dataclass(frozen=True)
class MedianBounds:
    """Conjectured bounds on the median for lambda in (ln2/k, 1)."""

    lower: float
    upper: int


def median_bounds(k: int, lam: float) -> MedianBounds:
    floor_mean = snap_floor(k * (k + 1) // 2 * lam)
    c0 = 1 if k <= 3 else 0
    lower = max(0.0, floor_mean - (k + 1) * LN2 / 2.0)
    return MedianBounds(lower=lower, upper=floor_mean + c0)


def check_median_bounds(k: int, lam: float) -> BoundReport:
    if not (LN2 / k < lam < 1.0):
        raise InvalidParameterError(
            f"median bounds apply on (ln2/k, 1): k={k}, lambda={lam}"
        )
    b = median_bounds(k, lam)
    nu = cdf_and_median(OrderKParams(k, lam))
    slack = min(nu - b.lower, float(b.upper - nu))
    return BoundReport(
        claim_id="median_bounds",
        point=(k, lam),
        holds=slack >= 0.0,
        slack=slack,
        witness={"median": nu, "lower": b.lower, "upper": b.upper},
    )


# ---------------------------------------------------------------------------
# mode bounds


@dataclass(frozen=True)
class ModeBounds:
    """Proved window [floor(kl)-kappa+1-delta, floor(kl)] and the conjectured
    tighter lower bound floor(kl) - k."""

    lower_proved: int
    lower_conjectured: int
    upper: int
    delta_k1: int


def mode_bounds(k: int, lam: float) -> ModeBounds:
    kappa = k * (k + 1) // 2
    floor_mean = snap_floor(kappa * lam)
    delta = 1 if k == 1 else 0
    return ModeBounds(
        lower_proved=floor_mean - kappa + 1 - delta,
        lower_conjectured=floor_mean - k,
        upper=floor_mean,
        delta_k1=delta,
    )


def check_mode_bounds(k: int, lam: float) -> BoundReport:
    """Conjectured window floor(kl)-k <= m <= floor(kl) for nonzero modes."""
    b = mode_bounds(k, lam)
    m = principal_mode(OrderKParams(k, lam))
    slack = float(min(m - b.lower_conjectured, b.upper - m))
    return BoundReport(
        claim_id="mode_bounds",
        point=(k, lam),
        holds=slack >= 0.0,
        slack=slack,
        witness={"mode": m, "lower": b.lower_conjectured, "upper": b.upper},
    )


def check_mode_upper_bound(k: int, lam: float) -> BoundReport:
    """Proved: m <= floor(kappa*lambda)."""
    b = mode_bounds(k, lam)
    m = principal_mode(OrderKParams(k, lam))
    slack = float(b.upper - m)
    return BoundReport(
        claim_id="mode_upper_bound",
        point=(k, lam),
        holds=slack >= 0.0,
        slack=slack,
        witness={"mode": m, "upper": b.upper},
    )


# ---------------------------------------------------------------------------
# asymptotic formulas


@dataclass(frozen=True)
class MedianAsymptotic:
    """Median nu = n - floor((k+4)/8) for kappa*lambda in (alpha_{k,n-1}, alpha_{k,n}].

    The A-term is approximate by construction; interval-boundary checks must
    use a guard band.
    """

    k: int
    n: int
    nu: int
    alpha_kn: float
    a_kn: float


def _a_term(k: int, n: int) -> float:
    kappa = k * (k + 1) // 2
    return (3.0 * kappa / 349.0 + 13.0 / 1000.0) / n + (13.0 / 1500.0) * (
        math.floor((k + 4) / 8) - 3
    ) * kappa / n**2


def median_asymptotic_eval(k: int, n: int) -> MedianAsymptotic:
    kappa = k * (k + 1) // 2
    if n < kappa:
        raise InvalidParameterError(f"median asymptotic needs n >= kappa={kappa}, got {n}")
    shift = math.floor((k + 4) / 8)
    a = _a_term(k, n)
    alpha = n + frac((k + 4) / 8.0) + k / (8.0 * (2 * k + 1)) + a
    return MedianAsymptotic(k=k, n=n, nu=n - shift, alpha_kn=alpha, a_kn=a)


@dataclass(frozen=True)
class ModeAsymptotic:
    """Mode m = n - floor((3k+5)/8) for kappa*lambda in (beta_{k,n-1}, beta_{k,n}]."""

    k: int
    n: int
    m: int
    beta_kn: float
    b_kn: float


def _b_term(k: int, n: int) -> float:
    kappa = k * (k + 1) // 2
    return (kappa / (16.0 + 8.0 / 9.0) - 1.0 / (13.0 + 2.0 / 3.0)) / n + math.floor(
        (3 * k + 5) / 8
    ) * 3.0 * kappa / (50.0 * n**2)


def mode_asymptotic_eval(k: int, n: int) -> ModeAsymptotic:
    kappa = k * (k + 1) // 2
    if n < 2 * kappa:
        raise InvalidParameterError(f"mode asymptotic needs n >= 2*kappa={2*kappa}, got {n}")
    shift = math.floor((3 * k + 5) / 8)
    b = _b_term(k, n)
    beta = n + frac((3 * k + 5) / 8.0) + (k - 1) / (8.0 * (2 * k + 1)) + b
    return ModeAsymptotic(k=k, n=n, m=n - shift, beta_kn=beta, b_kn=b)


def check_median_asymptotic(k: int, n: int) -> BoundReport:
    """Compare the closed form against direct cdf accumulation at lambda=n/kappa."""
    kappa = k * (k + 1) // 2
    asym = median_asymptotic_eval(k, n)
    nu = cdf_and_median(OrderKParams(k, n / kappa))
    holds = nu == asym.nu
    return BoundReport(
        claim_id="median_asymptotic",
        point=(k, n),
        holds=holds,
        slack=0.0 if holds else -abs(nu - asym.nu),
        witness={"formula": asym.nu, "direct": nu},
    )


def check_mode_asymptotic(k: int, n: int) -> BoundReport:
    """Compare against mode_set at lambda=n/kappa; a flat-top tie containing
    the formula value counts as agreement."""
    kappa = k * (k + 1) // 2
    asym = mode_asymptotic_eval(k, n)
    modes = mode_set(OrderKParams(k, n / kappa)).modes
    holds = asym.m in modes
    return BoundReport(
        claim_id="mode_asymptotic",
        point=(k, n),
        holds=holds,
        slack=0.0 if holds else -abs(modes[0] - asym.m),
        witness={"formula": asym.m, "direct": list(modes)},
    )


def check_median_interval(k: int, n: int, samples: int = 3) -> BoundReport:
    """Median constant on (alpha_{k,n-1}, alpha_{k,n}], sampled at interior points.

    Points within a guard band of 2|A| of either endpoint are exempt from
    hard assertion (the A-term is acknowledged approximate); mismatches
    there are logged in the witness as soft.
    """
    kappa = k * (k + 1) // 2
    cur = median_asymptotic_eval(k, n)
    prev = median_asymptotic_eval(k, n - 1) if n - 1 >= kappa else None
    lo = prev.alpha_kn if prev else float(n) - 0.5
    hi = cur.alpha_kn
    band = 2.0 * (abs(cur.a_kn) + (abs(prev.a_kn) if prev else 0.0))
    soft: List[Dict] = []
    holds = True
    for t in np.linspace(0.0, 1.0, samples + 2)[1:-1]:
        kl = lo + t * (hi - lo)
        nu = cdf_and_median(OrderKParams(k, kl / kappa))
        if nu != cur.nu:
            near_edge = min(kl - lo, hi - kl) <= band
            if near_edge:
                soft.append({"kappa_lambda": kl, "median": nu, "expected": cur.nu})
            else:
                holds = False
    return BoundReport(
        claim_id="median_interval",
        point=(k, n),
        holds=holds,
        slack=0.0 if holds else -1.0,
        witness={"soft_mismatches": soft} if soft else None,
    )


def check_mode_interval(k: int, n: int, samples: int = 3) -> BoundReport:
    """Mode constant on (beta_{k,n-1}, beta_{k,n}], guard band as for the median."""
    kappa = k * (k + 1) // 2
    cur = mode_asymptotic_eval(k, n)
    prev = mode_asymptotic_eval(k, n - 1) if n - 1 >= 2 * kappa else None
    lo = prev.beta_kn if prev else float(n) - 0.5
    hi = cur.beta_kn
    band = 2.0 * (abs(cur.b_kn) + (abs(prev.b_kn) if prev else 0.0))
    soft: List[Dict] = []
    holds = True
    for t in np.linspace(0.0, 1.0, samples + 2)[1:-1]:
        kl = lo + t * (hi - lo)
        modes = mode_set(OrderKParams(k, kl / kappa)).modes
        if cur.m not in modes:
            near_edge = min(kl - lo, hi - kl) <= band
            if near_edge:
                soft.append({"kappa_lambda": kl, "modes": list(modes), "expected": cur.m})
            else:
                holds = False
    return BoundReport(
        claim_id="mode_interval",
        point=(k, n),
        holds=holds,
        slack=0.0 if holds else -1.0,
        witness={"soft_mismatches": soft} if soft else None,
    )


# ---------------------------------------------------------------------------
# scaled shape formulas (lambda = 2 collapse)


def scaled_shape_formulas(k: int, lam: float) -> Tuple[float, float]:
    """(scaled peak width sigma/kappa, bound on scaled mean-mode gap)."""
    if lam <= 0.0:
        raise InvalidParameterError(f"lambda must be > 0, got {lam}")
    width = math.sqrt(2.0 * lam / 3.0) * math.sqrt(1.0 / k + 1.0 / (k + 1))
    gap_bound = 0.25 * (5.0 / k - 2.0 / (k + 1))
    return width, gap_bound


def check_scaled_gap(k: int, lam: float = 2.0) -> BoundReport:
    """Verify (mean - mode)/kappa <= (1/4)(5/k - 2/(k+1))."""
    kappa = k * (k + 1) // 2
    _, gap_bound = scaled_shape_formulas(k, lam)
    m = principal_mode(OrderKParams(k, lam))
    gap = (kappa * lam - m) / kappa
    slack = gap_bound - gap
    return BoundReport(
        claim_id="scaled_gap",
        point=(k, lam),
        holds=slack >= 0.0,
        slack=slack,
        witness={"gap": gap, "bound": gap_bound},
    )


# ---------------------------------------------------------------------------
# exact chain inequalities


def ln2_lt_two_over_kp1_exact(k_max: int) -> bool:
    """(ln2)/k < 2/(k+1) for all k in [1, k_max], in integer arithmetic.

    Reduces to ln2 < 2k/(k+1).  With the rational over-estimate
    ln2 < 6932/10000 the inequality becomes 13068*k > 6932; the
    over-estimate itself is certified by exp(6932/10000) > 2 via Fraction
    partial sums of the exponential series.
    """
    if k_max < 1:
        raise InvalidParameterError(f"k_max must be >= 1, got {k_max}")
    x = Fraction(6932, 10000)
    # lower bound on exp(x): truncated Taylor series (all terms positive)
    term = Fraction(1)
    total = Fraction(1)
    for i in range(1, 25):
        term *= x / i
        total += term
    if not total > 2:
        raise AssertionError("rational certificate for ln2 < 0.6932 failed")
    return all(13068 * k > 6932 for k in range(1, k_max + 1))


def check_chain_inequality(fdm: FirstDoubleMode, r_k: float) -> BoundReport:
    """Proved chain 2/(k+1) <= lambda_hat <= r_k < 1 and k <= m_hat < kappa."""
    k = fdm.k
    kappa = k * (k + 1) // 2
    # float slack on the solved lambda_hat; tolerate solver resolution
    tol = 1e-9
    checks = [
        fdm.lambda_hat >= 2.0 / (k + 1) - tol,
        fdm.lambda_hat <= r_k + tol,
        r_k < 1.0,
        k <= fdm.m_hat < kappa,
        fdm.m_hat <= kappa * fdm.lambda_hat + 1e-6,
    ]
    holds = all(checks)
    return BoundReport(
        claim_id="chain_inequality",
        point=(k,),
        holds=holds,
        slack=0.0 if holds else -1.0,
        witness={"lambda_hat": fdm.lambda_hat, "r_k": r_k, "m_hat": fdm.m_hat},
    )


# ---------------------------------------------------------------------------
# scan harness

# claim id -> proved?  (violating a proved claim is an implementation bug)
CLAIMS: Dict[str, bool] = {
    "median_zero_iff": True,
    "mode_zero_sufficient": True,
    "median_zero_implies_mode_zero": True,
    "mode_upper_bound": True,
    "chain_inequality": True,
    "median_bounds": False,
    "mode_bounds": False,
    "no_triple_mode": False,
}

TRIPLE_TIE_RTOL = 1e-10


def _check_no_triple_mode(k: int, lam: float) -> BoundReport:
    result = mode_set(OrderKParams(k, lam), tie_tolerance=TRIPLE_TIE_RTOL)
    holds = len(result.modes) <= 2
    return BoundReport(
        claim_id="no_triple_mode",
        point=(k, lam),
        holds=holds,
        slack=float(2 - len(result.modes)),
        witness=None if holds else {"modes": list(result.modes)},
    )


def _check_median_zero_iff(k: int, lam: float) -> BoundReport:
    predicted = median_zero_criterion(k, lam)
    actual = cdf_and_median(OrderKParams(k, lam)) == 0
    holds = predicted == actual
    return BoundReport(
        claim_id="median_zero_iff",
        point=(k, lam),
        holds=holds,
        slack=0.0 if holds else -1.0,
        witness=None if holds else {"predicted": predicted, "actual": actual},
    )


def _check_mode_zero_sufficient(k: int, lam: float) -> BoundReport:
    if not mode_zero_sufficient(k, lam):
        return BoundReport(
            claim_id="mode_zero_sufficient", point=(k, lam), holds=True, slack=0.0
        )
    modes = mode_set(OrderKParams(k, lam)).modes
    holds = modes == (0,)
    return BoundReport(
        claim_id="mode_zero_sufficient",
        point=(k, lam),
        holds=holds,
        slack=0.0 if holds else -1.0,
        witness=None if holds else {"modes": list(modes)},
    )


def _scan_one_k(
    k: int,
    lambda_grid: Optional[Sequence[float]],
    n_lambda: int,
    claims: Sequence[str],
    rng: Optional[np.random.Generator],
) -> List[BoundReport]:
    reports: List[BoundReport] = []
    fdm = None
    if any(c in claims for c in ("chain_inequality", "mode_bounds")):
        fdm = first_double_mode(k)
    if "chain_inequality" in claims and fdm is not None:
        reports.append(check_chain_inequality(fdm, solve_r_k(k).r_k))
    if lambda_grid is None:
        if rng is not None:
            base = np.sort(rng.uniform(1e-6, 2.0, size=n_lambda))
        else:
            base = np.linspace(2.0 / n_lambda, 2.0, n_lambda)
    else:
        base = np.asarray(lambda_grid, dtype=float)
    for lam in base:
        lam = float(lam)
        if "median_zero_iff" in claims:
            reports.append(_check_median_zero_iff(k, lam))
        if "mode_zero_sufficient" in claims:
            reports.append(_check_mode_zero_sufficient(k, lam))
        if "median_zero_implies_mode_zero" in claims and median_zero_criterion(k, lam):
            reports.append(median_zero_implies_mode_zero_check(k, lam))
        if "median_bounds" in claims and LN2 / k < lam < 1.0:
            reports.append(check_median_bounds(k, lam))
        if "mode_upper_bound" in claims:
            reports.append(check_mode_upper_bound(k, lam))
        if "mode_bounds" in claims and fdm is not None and fdm.lambda_hat < lam < 2.0:
            reports.append(check_mode_bounds(k, lam))
        if "no_triple_mode" in claims:
            reports.append(_check_no_triple_mode(k, lam))
    return reports


def conjecture_scan(
    k_values: Iterable[int],
    lambda_grid: Optional[Sequence[float]] = None,
    n_lambda: int = 50,
    claims: Optional[Sequence[str]] = None,
    seed: Optional[int] = None,
    workers: int = 1,
) -> List[BoundReport]:
    """Run the selected claim checkers over the (k, lambda) grid.

    Deterministic: the stratified grid is the default; passing ``seed``
    switches to seeded uniform lambda sampling.  Reports are merged sorted
    by (claim, k, lambda) regardless of worker count.
    """
    if claims is None:
        claims = sorted(CLAIMS)
    unknown = set(claims) - set(CLAIMS)
    if unknown:
        raise InvalidParameterError(f"unknown claim ids: {sorted(unknown)}")
    k_list = sorted(set(int(k) for k in k_values))
    if any(k < 2 for k in k_list):
        raise InvalidParameterError("scan domain is k >= 2")
    reports: List[BoundReport] = []
    if workers > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _scan_one_k,
                    k,
                    lambda_grid,
                    n_lambda,
                    list(claims),
                    np.random.default_rng((seed, k)) if seed is not None else None,
                )
                for k in k_list
            ]
            for fut in futures:
                reports.extend(fut.result())
    else:
        for k in k_list:
            rng = np.random.default_rng((seed, k)) if seed is not None else None
            reports.extend(_scan_one_k(k, lambda_grid, n_lambda, list(claims), rng))
    reports.sort(key=lambda r: (r.claim_id, r.point))
    return reports


def summarize_reports(reports: Sequence[BoundReport]) -> Dict[str, Dict[str, int]]:
    """Per-claim counts of checks and violations, split proved/conjectured."""
    summary: Dict[str, Dict[str, int]] = {}
    for rep in reports:
        entry = summary.setdefault(
            rep.claim_id,
            {"checked": 0, "violations": 0, "proved": int(CLAIMS.get(rep.claim_id, False))},
        )
        entry["checked"] += 1
        if not rep.holds:
            entry["violations"] += 1
    return summary


def proved_violations(reports: Sequence[BoundReport]) -> List[BoundReport]:
    return [r for r in reports if not r.holds and CLAIMS.get(r.claim_id, False)]
