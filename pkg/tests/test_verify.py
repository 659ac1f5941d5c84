import json
import math

import pytest
from mpmath import mpc, mpf

from d5mock import mocktheta as mt
from d5mock.errors import DomainError
from d5mock.mordell import watson_integral
from d5mock.numkernel import working_precision
from d5mock.verify import (
    CANONICAL_ALPHAS,
    CANONICAL_QS,
    REGISTRY,
    check_d5_decomposition,
    check_d5_decomposition_exact,
    check_main_theorem,
    check_representations,
    check_watson,
    make_report,
    run_grid,
    run_identity,
    wrt_invariant,
    wrt_table,
)


class TestReport:
    def test_relative_residual_uses_larger_side(self):
        r = make_report("x", {"q": 0.5}, 2, 1, 1e-10)
        assert r.abs_residual == 1 and r.rel_residual == mpf("0.5")
        assert not r.passed

    def test_absolute_fallback_below_floor(self):
        r = make_report("x", {}, mpf("1e-40"), 0, 1e-10)
        assert r.rel_residual == 1
        assert r.passed

    def test_json_schema(self):
        r = make_report("x", {"q": mpc(0.1, 0.2)}, mpc(1, 1), mpc(1, 1), 1e-10)
        d = json.loads(r.to_json())
        assert set(d) == {"identity", "params", "lhs", "rhs", "abs_residual", "rel_residual", "passed"}
        assert d["params"] == {"q": [0.1, 0.2]}
        assert d["lhs"] == [1.0, 1.0] and d["passed"] is True


class TestMainTheorem:
    @pytest.mark.parametrize("alpha", [1.0, math.pi])
    def test_real(self, alpha):
        r = check_main_theorem(alpha)
        assert r.rel_residual < 1e-10 and r.passed

    def test_complex(self):
        r = check_main_theorem(complex(1, 0.4), 1e-8)
        assert r.rel_residual < 1e-8

    @pytest.mark.parametrize("alpha", CANONICAL_ALPHAS)
    def test_error_budget_consistency(self, alpha):
        r = check_main_theorem(alpha)
        assert r.abs_residual <= sum(r.component_errors)

    def test_rejects_bad_alpha(self):
        with pytest.raises(DomainError):
            check_main_theorem(-1)


class TestWatson:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_real(self, alpha):
        r = check_watson(alpha)
        assert r.rel_residual < 1e-10

    def test_left_side_is_twice_half_line_integral(self):
        r = check_watson(1.0)
        with working_precision():
            half = watson_integral(1)
            assert abs(r.lhs - 2 * half.value) < 1e-30


class TestD5Decomposition:
    def test_at_zero(self):
        r = check_d5_decomposition(0)
        assert r.lhs == 1 and r.rhs == 1 and r.abs_residual == 0

    def test_at_point_three(self):
        assert check_d5_decomposition(0.3).rel_residual < 1e-10

    def test_exact(self):
        r = check_d5_decomposition_exact(50)
        assert r.abs_residual == 0 and r.passed


class TestRepresentations:
    def test_omega(self):
        r = check_representations(mt.Tag.OMEGA, 0.25)
        assert r.rel_residual < 1e-10

    def test_h2(self):
        assert check_representations(mt.Tag.H2, 0.25).rel_residual < 1e-10

    def test_d5_at_zero(self):
        assert check_representations(mt.Tag.D5, 0).abs_residual == 0


class TestWrt:
    def test_n_two(self):
        with working_precision():
            e = wrt_invariant(2)
            assert abs(e.d5_star_value - 1) < mpf(2) ** -120
            assert abs(e.tau - 1) < 1e-20

    def test_n_one_rejected(self):
        with pytest.raises(DomainError):
            wrt_invariant(1)
        with pytest.raises(DomainError):
            wrt_table(1, 5)

    def test_definitional_identity(self):
        with working_precision():
            for e in wrt_table(3, 10):
                assert e.definitional_residual() < 1e-25

    def test_precision_doubling(self):
        lo = wrt_table(2, 20, prec=128)
        hi = wrt_table(2, 20, prec=256)
        with working_precision(256):
            for a, b in zip(lo, hi):
                assert abs(a.tau - b.tau) < 1e-25


class TestRegistry:
    def test_names(self):
        assert {"main-theorem", "watson", "d5-decomposition", "d5-decomposition-exact", "qhyper",
                "triple-product", "wrt", "repr-d5", "repr-omega", "repr-f", "repr-h1", "repr-h2"} == set(REGISTRY)

    def test_canonical_grids(self):
        assert len(CANONICAL_ALPHAS) == 5 and len(CANONICAL_QS) == 9
        qh = REGISTRY["qhyper"].grid()
        assert len(qh) == 15
        for p in qh:
            assert abs(p["q"]) <= 0.5 and abs(p["z"]) <= 0.5

    def test_unknown(self):
        with pytest.raises(DomainError):
            run_identity("nosuch", {})

    def test_sorted_output(self):
        reports = run_grid(["repr-h1", "d5-decomposition"], tol=1e-10)
        keys = [r.sort_key() for r in reports]
        assert keys == sorted(keys)

    def test_parallel_matches_serial(self):
        names = ["triple-product"]
        a = [r.to_dict() for r in run_grid(names)]
        b = [r.to_dict() for r in run_grid(names, parallel=True)]
        assert a == b

    @pytest.mark.slow
    def test_all_pass_on_canonical_grid_at_looser_tolerance(self):
        reports = run_grid(sorted(REGISTRY), tol=1e-8)
        failed = [r.identity_name for r in reports if not r.passed]
        assert not failed
