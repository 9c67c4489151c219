"""Critical-parameter solvers: r_k, double modes, jump boundaries."""

import pytest

from poissonk import (
    OrderKParams,
    RootBracket,
    SolverConfig,
    consecutive_double_mode,
    first_double_mode,
    jump_boundaries,
    mode_set,
    scaled_pmf_table,
    solve_r_k,
)
from poissonk.critical import bisect, left_right_peak_tie, make_bracket, peak_vs_point_k_tie
from poissonk.errors import InvalidParameterError, NoSignChangeError


class TestBisect:
    def test_sqrt_two(self):
        root, resid = bisect(lambda x: x * x - 2.0, 1.0, 2.0)
        assert root == pytest.approx(2.0**0.5, abs=1e-10)
        assert abs(resid) < 1e-9

    def test_no_sign_change(self):
        with pytest.raises(NoSignChangeError):
            bisect(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_exact_endpoint_root(self):
        root, resid = bisect(lambda x: x - 1.0, 1.0, 2.0)
        assert (root, resid) == (1.0, 0.0)

    def test_bracket_validation(self):
        with pytest.raises(InvalidParameterError):
            RootBracket(lo=2.0, hi=1.0, f_lo_sign=-1, f_hi_sign=1)


class TestSolveRk:
    def test_k1_boundary(self):
        r = solve_r_k(1)
        assert r.r_k == 1.0
        assert r.boundary

    @pytest.mark.parametrize("k", [2, 3, 5, 14, 30])
    def test_residual_and_range(self, k):
        r = solve_r_k(k)
        assert 0.0 < r.r_k < 1.0
        assert not r.boundary
        h_k = scaled_pmf_table(OrderKParams(k, r.r_k), k).values[k]
        assert h_k == pytest.approx(1.0, abs=1e-9)

    def test_decreasing_in_k(self):
        values = [solve_r_k(k).r_k for k in (2, 5, 10, 20, 40)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_invalid_k(self):
        with pytest.raises(InvalidParameterError):
            solve_r_k(0)


class TestFirstDoubleMode:
    @pytest.mark.parametrize("k", [2, 3, 5, 10, 14])
    def test_small_k_lands_on_r_k(self, k):
        fdm = first_double_mode(k)
        assert fdm.m_hat == k
        assert fdm.lambda_hat == pytest.approx(solve_r_k(k).r_k, abs=1e-9)

    def test_k50(self):
        fdm = first_double_mode(50)
        assert fdm.m_hat == 113
        assert fdm.lambda_hat == pytest.approx(0.10194, abs=5e-5)

    def test_tie_height_is_one(self):
        fdm = first_double_mode(20)
        h = scaled_pmf_table(OrderKParams(20, fdm.lambda_hat), fdm.m_hat + 20).values
        assert h[fdm.m_hat] == pytest.approx(1.0, abs=1e-8)

    def test_k1_rejected(self):
        with pytest.raises(InvalidParameterError):
            first_double_mode(1)


class TestJumpBoundaries:
    def test_k3(self):
        events = jump_boundaries(3)
        assert [(e.m1, e.m2) for e in events] == [(0, 3), (3, 5)]
        assert events[0].lambda_star == pytest.approx(0.601679, abs=1e-5)
        assert events[1].lambda_star == pytest.approx(0.996203, abs=1e-5)
        assert all(e.modal for e in events)

    def test_k20_first_jump_skips_point_k(self):
        events = jump_boundaries(20)
        assert len(events) == 2
        assert events[0].m1 == 0
        assert events[0].m2 >= 22  # the left peak, never n=k itself
        assert events[0].lambda_star == pytest.approx(0.203321, abs=1e-5)

    def test_events_sorted_and_modal(self):
        events = jump_boundaries(10)
        stars = [e.lambda_star for e in events]
        assert stars == sorted(stars)
        assert all(e.modal for e in events)


class TestConsecutiveDoubleMode:
    def test_k3_m7(self):
        ev = consecutive_double_mode(3, 7)
        assert (ev.m1, ev.m2) == (7, 8)
        assert ev.modal
        assert ev.lambda_star == pytest.approx(1.42934, abs=5e-4)
        assert mode_set(OrderKParams(3, ev.lambda_star), 1e-9).modes == (7, 8)

    def test_skipped_integer_rejected(self):
        # k=3 jumps over 4, so mode 4 is never attained
        with pytest.raises(NoSignChangeError):
            consecutive_double_mode(3, 4)

    def test_m_validation(self):
        with pytest.raises(InvalidParameterError):
            consecutive_double_mode(3, 0)


class TestAuxiliaryTies:
    def test_peak_vs_point_k_modal_for_mid_k(self):
        ev = peak_vs_point_k_tie(10)
        assert ev.m1 == 10
        assert ev.modal  # height 1 tie is the actual second jump
        assert ev.lambda_star == pytest.approx(0.361891, abs=1e-5)

    def test_peak_vs_point_k_non_modal_for_large_k(self):
        ev = peak_vs_point_k_tie(20)
        assert not ev.modal
        assert ev.lambda_star == pytest.approx(0.18982, abs=5e-4)
        assert ev.heights_equal_to < 1.0

    def test_left_right_tie_non_modal_k50(self):
        ev = left_right_peak_tie(50)
        assert not ev.modal
        assert ev.lambda_star == pytest.approx(0.098015, abs=5e-4)

    def test_left_right_tie_modal_k10(self):
        ev = left_right_peak_tie(10)
        assert ev.modal
        assert ev.lambda_star == pytest.approx(0.472694, abs=1e-5)


def test_make_bracket_signs():
    b = make_bracket(lambda x: x - 0.5, 0.0, 1.0)
    assert (b.f_lo_sign, b.f_hi_sign) == (-1, 1)
    with pytest.raises(NoSignChangeError):
        make_bracket(lambda x: x + 2.0, 0.0, 1.0)


def test_solver_config_defaults():
    config = SolverConfig()
    assert config.lambda_tol <= 1e-9
    assert config.max_iter >= 100
