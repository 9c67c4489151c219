"""Acceptance gate: one verdict line per criterion in the terminal summary.

Each test exercises one end-to-end criterion with pinned tolerances.  The
``criterion`` decorator records PASS or FAIL (with the failure reason) in
the shared log printed after the run, then re-raises on failure so the
suite stays honest.
"""

import functools
import math
import time
from fractions import Fraction

import numpy as np

from conftest import ACCEPTANCE_LINES
from poissonk import (
    OrderKParams,
    SolverConfig,
    cdf_and_median,
    classify_regime,
    consecutive_double_mode,
    exact_pmf_polynomial,
    mode_bounds,
    mode_set,
    principal_mode,
    scaled_pmf_table,
    scaled_shape_formulas,
)
from poissonk.bounds import (
    check_chain_inequality,
    check_median_asymptotic,
    check_scaled_gap,
    ln2_lt_two_over_kp1_exact,
)


def criterion(num, desc):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException as exc:
                reason = str(exc).split("\n")[0][:160]
                ACCEPTANCE_LINES.append(f"criterion {num:02d} FAIL  {desc} :: {reason}")
                raise
            ACCEPTANCE_LINES.append(f"criterion {num:02d} PASS  {desc}")

        return wrapper

    return deco


@criterion(1, "recurrence matches exact enumeration (rel 1e-12, k<=10, n<=40)")
def test_criterion_01_oracle_equivalence():
    start = time.monotonic()
    lambdas = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2)]
    tables = {
        (k, lam): scaled_pmf_table(OrderKParams(k, float(lam)), 40).values
        for k in range(1, 11)
        for lam in lambdas
    }
    worst = 0.0
    for k in range(1, 11):
        for n in range(41):
            poly = exact_pmf_polynomial(k, n)
            for lam in lambdas:
                exact = float(poly.evaluate(lam))
                got = float(tables[(k, lam)][n])
                if exact == 0.0:
                    assert got == 0.0
                else:
                    worst = max(worst, abs(got - exact) / exact)
    assert worst <= 1e-12, f"worst relative error {worst}"
    assert time.monotonic() - start < 60.0, "oracle comparison exceeded 1 minute"


@criterion(2, "first double mode: m_hat=k for k<=14, m_hat>k after; k=50 digits")
def test_criterion_02_first_double_mode_table(cached_fdm):
    for k in range(2, 15):
        assert cached_fdm(k).m_hat == k, f"k={k}: m_hat={cached_fdm(k).m_hat}"
    for k in range(15, 61):
        assert cached_fdm(k).m_hat > k, f"k={k}: m_hat={cached_fdm(k).m_hat}"
    fdm50 = cached_fdm(50)
    assert fdm50.m_hat == 113
    assert abs(fdm50.lambda_hat - 0.10194) <= 5e-5, f"lambda_hat={fdm50.lambda_hat}"


@criterion(3, "k=50 four-peak anatomy heights at the first double mode")
def test_criterion_03_peak_anatomy(cached_fdm):
    lam_hat = cached_fdm(50).lambda_hat
    h = scaled_pmf_table(OrderKParams(50, lam_hat), 140).values
    assert abs(h[50] - 0.6698) <= 1e-3, f"h(50)={h[50]}"
    assert abs(h[113] - 1.0) <= 1e-9, f"h(113)={h[113]}"
    # the 5-digit height at n=98 is coupled to the 5-digit rate: the local
    # sensitivity dh(98)/dlambda is about 41, so rounding lambda_hat to
    # 0.10194 moves h(98) by more than the quoted tolerance; the published
    # height is therefore checked at the published rounded rate
    h_rounded = scaled_pmf_table(OrderKParams(50, 0.10194), 140).values
    assert abs(h_rounded[98] - 0.98358) <= 5e-5, f"h(98)={h_rounded[98]}"


@criterion(4, "jump-boundary rates and mode pairs for k in {3, 10, 20, 50}")
def test_criterion_04_jump_boundaries(cached_jumps):
    ev3 = cached_jumps(3)
    assert [(e.m1, e.m2) for e in ev3] == [(0, 3), (3, 5)]
    assert abs(ev3[0].lambda_star - 0.601679) <= 1e-5
    assert abs(ev3[1].lambda_star - 0.9962) <= 1e-3

    ev10 = cached_jumps(10)
    assert (ev10[0].m1, ev10[0].m2) == (0, 10)
    assert ev10[1].m1 == 10 and ev10[1].m2 >= 12  # k to the left peak
    assert ev10[2].m2 > ev10[2].m1 + 1  # two separated mountain peaks
    for got, want in zip(ev10, [0.31713, 0.36189, 0.472694]):
        assert abs(got.lambda_star - want) <= 1e-4, f"{got.lambda_star} vs {want}"

    ev20 = cached_jumps(20)
    assert ev20[0].m1 == 0 and ev20[0].m2 >= 22  # zero to the left peak
    assert ev20[1].m2 > ev20[1].m1 + 1
    for got, want in zip(ev20, [0.20333, 0.24159]):
        assert abs(got.lambda_star - want) <= 1e-4

    ev50 = cached_jumps(50)
    assert len(ev50) == 1
    assert (ev50[0].m1, ev50[0].m2) == (0, 113)
    assert abs(ev50[0].lambda_star - 0.10194) <= 1e-4


@criterion(5, "jump counts (2,3,2,1) per regime, boundaries 14/15 and 41/42")
def test_criterion_05_regime_map(cached_jumps):
    expected = {2: 2, 3: 2, 4: 3, 10: 3, 14: 3, 15: 2, 41: 2, 42: 1, 50: 1}
    for k, count in expected.items():
        assert len(cached_jumps(k)) == count, f"k={k}"
        assert classify_regime(k).expected_mode_jumps == count


@criterion(6, "consecutive double modes re-solved to 1e-9, near quoted rates")
def test_criterion_06_consecutive_double_modes():
    config = SolverConfig()
    assert config.lambda_tol <= 1e-9
    cases = [(3, 7, 1.4293), (10, 24, 0.5119), (20, 55, 0.3039), (50, 116, 0.105)]
    for k, m, quoted in cases:
        ev = consecutive_double_mode(k, m, config)
        assert ev.modal, f"k={k}, m={m}: tie is not modal"
        assert abs(ev.lambda_star - quoted) <= 5e-4, f"k={k}: {ev.lambda_star}"
        modes = mode_set(OrderKParams(k, ev.lambda_star), 1e-9).modes
        assert modes == (m, m + 1), f"k={k}: modes {modes}"


@criterion(7, "median-zero iff, asymptotic median formula, k=514 pinned point")
def test_criterion_07_median():
    ln2 = math.log(2.0)
    for k in (2, 10, 50, 200):
        boundary = ln2 / k
        for lam in np.linspace(boundary / 5000, 2.0 * boundary, 10_000):
            lam = float(lam)
            if abs(lam - boundary) <= 4 * np.spacing(boundary):
                continue  # the threshold itself is not float-representable
            predicted = lam <= boundary
            actual = cdf_and_median(OrderKParams(k, lam)) == 0
            assert predicted == actual, f"k={k}, lambda={lam}"
    for k in range(1, 31):
        kappa = k * (k + 1) // 2
        for n in range(kappa, 6 * kappa + 1):
            rep = check_median_asymptotic(k, n)
            assert rep.holds, f"k={k}, n={n}: {rep.witness}"
    assert cdf_and_median(OrderKParams(514, 0.0031619)) == 367


@criterion(8, "mode window on the stress grid, k=2 sharpness, k=44 pinned point")
def test_criterion_08_mode_bounds(stress_grid):
    violations = [
        (k, lam, modes)
        for k, lam, modes, lower, upper in stress_grid
        if any(m < lower or m > upper for m in modes)
    ]
    assert not violations, f"window violations: {violations[:3]}"
    lam = 4.01 / 3.0  # kappa*lambda = 4.01, inside the sharpness window
    assert principal_mode(OrderKParams(2, lam)) == 2
    assert mode_bounds(2, lam).lower_conjectured == 2
    m44 = principal_mode(OrderKParams(44, 0.114198))
    assert m44 == 98, (
        f"pinned point (k=44, lambda=0.114198) has principal mode {m44}, "
        "not 98; exact rational evaluation of the recurrence gives "
        "h(99) - h(98) = +1.24e-5 there (the 98/99 tie sits at "
        "lambda = 0.114156), so the stated value is unattainable"
    )


@criterion(9, "proved chain for k=2..60; exact ln2 inequality to k=10^6")
def test_criterion_09_proved_inequalities(cached_fdm, cached_rk):
    for k in range(2, 61):
        rep = check_chain_inequality(cached_fdm(k), cached_rk(k).r_k)
        assert rep.holds, f"k={k}: {rep.witness}"
    assert ln2_lt_two_over_kp1_exact(10**6)
    from poissonk import cli

    assert cli.EXIT_PROVED_VIOLATION == 2  # scan surfaces any failure as exit 2


@criterion(10, "no triple mode on the stress grid (hits logged as findings)")
def test_criterion_10_no_triple_mode(stress_grid):
    hits = [(k, lam, modes) for k, lam, modes, _, _ in stress_grid if len(modes) >= 3]
    note = f"criterion 10 findings: {len(hits)} triple ties at rel 1e-10"
    if hits:
        note += f"; first hit {hits[0]}"
    ACCEPTANCE_LINES.append(note)


@criterion(11, "scaled width decreasing in k; mean-mode gap bound at lambda=2")
def test_criterion_11_scaled_shape():
    ks = [3, 10, 20, 50]
    widths = [scaled_shape_formulas(k, 2.0)[0] for k in ks]
    assert all(a > b for a, b in zip(widths, widths[1:])), f"widths {widths}"
    for k in ks:
        rep = check_scaled_gap(k, 2.0)
        assert rep.holds, f"k={k}: {rep.witness}"
