import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpc, mpf

from d5mock.errors import DomainError, NonConvergence
from d5mock.numkernel import (
    EvalResult,
    Nome,
    eta_quotient_correction,
    jacobi_theta_sum,
    jacobi_triple_product_residual,
    nome_pair,
    qpoch_finite,
    qpoch_infinite,
    theta_psi,
    working_precision,
)
from d5mock.qexpand import eta_quotient_expansion, qpoch_series, series_eval


def oracle_qp(a, q, n=None, prec=256):
    """mpmath's own q-Pochhammer, at higher precision."""
    with mpmath.workprec(prec):
        return mpmath.qp(mpc(a), mpc(q), n) if n is not None else mpmath.qp(mpc(a), mpc(q))


class TestNomePair:
    def test_self_dual_point(self):
        with working_precision():
            n = nome_pair(mp.pi)
            assert abs(n.q - n.q1) < mpf(2) ** -120
            assert abs(n.q - mpf("0.0432139182637722497744177371717")) < 1e-30

    def test_alpha_one(self):
        with working_precision():
            n = nome_pair(1)
            assert abs(n.q - mpmath.exp(-1)) < 1e-35
            assert abs(n.q1 - mpmath.exp(-mp.pi ** 2)) < 1e-35

    def test_complex_alpha(self):
        with working_precision():
            n = nome_pair(mpc(1, 0.5))
            assert abs(abs(n.q) - mpmath.exp(-1)) < 1e-35
            # Re(pi^2/alpha) = pi^2 * 1/1.25
            assert abs(abs(n.q1) - mpmath.exp(-mp.pi ** 2 / mpf("1.25"))) < 1e-30
            assert abs(n.q1) < 1

    @pytest.mark.parametrize("alpha", [0, -1, mpc(0, 2), mpc(-0.1, 1)])
    def test_rejects_nonpositive_real_part(self, alpha):
        with pytest.raises(DomainError):
            nome_pair(alpha)

    def test_fractional_powers_use_alpha(self):
        with working_precision():
            n = nome_pair(mpc(1, 0.4))
            assert abs(n.power(mpf(3) / 4) - mpmath.exp(-0.75 * n.alpha)) < 1e-35
            assert abs(n.dual_power(2) - n.q1 ** 2) < 1e-35

    def test_nome_rejects_outside_disc(self):
        with pytest.raises(DomainError, match=r"\|q\| must be < 1"):
            Nome(mpc(1.5))


class TestQpochFinite:
    def test_empty_product(self):
        assert qpoch_finite(3.7, 0.2, 0) == 1

    def test_two_factors(self):
        assert qpoch_finite(0.5, 0.5, 2) == mpf("0.375")

    def test_vanishing_factor_at_root_of_unity(self):
        N = 7
        with working_precision():
            q = mpmath.expjpi(mpf(1) / N)
            assert abs(qpoch_finite(-q, q, N)) < mpf(2) ** -120

    @settings(max_examples=40, deadline=None)
    @given(
        st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
        st.complex_numbers(max_magnitude=0.99, allow_nan=False, allow_infinity=False),
        st.integers(0, 30),
    )
    def test_recurrence(self, a, q, n):
        with working_precision():
            lhs = qpoch_finite(a, q, n + 1)
            rhs = qpoch_finite(a, q, n) * (1 - mpc(a) * mpc(q) ** n)
            assert abs(lhs - rhs) <= abs(lhs) * mpf(2) ** -100 + mpf(2) ** -120

    def test_matches_mpmath(self):
        with working_precision():
            assert abs(qpoch_finite(0.3, 0.6, 9) - oracle_qp(0.3, 0.6, 9)) < 1e-35


class TestQpochInfinite:
    def test_zero_a(self):
        r = qpoch_infinite(0, 0.7)
        assert r.value == 1
        assert r.terms_used <= 1

    def test_euler_function_against_exact_series(self):
        with working_precision():
            r = qpoch_infinite(0.5, 0.5, mpf("1e-20"))
            exact = series_eval(qpoch_series(1, 1, 1, math.inf, 128), mpf("0.5"))
            assert abs(r.value - exact) < 1e-18
            assert r.err_estimate <= mpf("1e-20") * abs(r.value)

    def test_step_two_product_is_in_unit_interval(self):
        with working_precision():
            q = mpf("0.3")
            r = qpoch_infinite(q * q, q * q)
            assert 0 < r.value.real < 1 and r.value.imag == 0
            assert abs(r.value - oracle_qp(q * q, q * q)) <= r.err_estimate <= mpf("1e-20")

    def test_error_estimate_bounds_true_error(self):
        with working_precision():
            q = mpc(0.6, 0.3)
            r = qpoch_infinite(mpc(-0.4, 1.1), q, mpf("1e-12"))
            assert abs(r.value - oracle_qp(mpc(-0.4, 1.1), q)) <= r.err_estimate

    @pytest.mark.parametrize("q", [1, 1.2, mpc(0, -1)])
    def test_domain(self, q):
        with pytest.raises(DomainError):
            qpoch_infinite(0.5, q)

    def test_term_cap(self):
        with pytest.raises(NonConvergence):
            qpoch_infinite(0.5, 0.999, max_terms=10)

    @pytest.mark.parametrize("n", [0, 1, 3, 10])
    @pytest.mark.parametrize("a,q", [(0.4, 0.7), (mpc(0.2, -0.9), mpc(-0.3, 0.5)), (-1.5, 0.8)])
    def test_factorization(self, a, q, n):
        with working_precision():
            a, q = mpc(a), mpc(q)
            tol = mpf("1e-20")
            whole = qpoch_infinite(a, q, tol)
            rest = qpoch_infinite(a * q ** n, q, tol)
            head = qpoch_finite(a, q, n)
            assert abs(whole.value - head * rest.value) <= whole.err_estimate + abs(head) * rest.err_estimate


class TestThetaPsi:
    def test_zero(self):
        assert theta_psi(0).value == 1

    def test_product_form(self):
        with working_precision():
            q = mpf("0.2")
            lhs = theta_psi(q)
            prod = qpoch_infinite(q * q, q * q).value / qpoch_infinite(q, q * q).value
            assert abs(lhs.value - prod) < 1e-12

    def test_against_jacobi_theta2(self):
        # theta_2(0, sqrt(q)) = 2 q^{1/8} psi(q)
        with working_precision():
            q = mpf("0.5")
            with mpmath.workprec(256):
                ref = mpmath.jtheta(2, 0, mpmath.sqrt(q)) / (2 * q ** (mpf(1) / 8))
            val = theta_psi(q)
            assert abs(val.value - ref) <= val.err_estimate
            assert abs(val.value - mpf("1.641632560655")) < 1e-12

    @pytest.mark.parametrize("k", range(1, 9))
    def test_triple_product_consequence(self, k):
        with working_precision():
            q = mpf(k) / 10
            psi = theta_psi(q)
            p1 = qpoch_infinite(q, q * q)
            p2 = qpoch_infinite(q * q, q * q)
            prod = psi * p1
            assert abs(prod.value - p2.value) <= prod.err_estimate + p2.err_estimate


class TestEtaQuotient:
    def test_zero(self):
        assert eta_quotient_correction(0).value == 1

    def test_against_exact_series(self):
        with working_precision():
            r = eta_quotient_correction(mpf("0.1"))
            exact = series_eval(eta_quotient_expansion(40), mpf("0.1"))
            assert abs(r.value - exact) < 1e-12

    def test_against_high_precision_product(self):
        with working_precision():
            q = mpf("0.3")
            r = eta_quotient_correction(q)
            ref = oracle_qp(q, q) ** 5 / oracle_qp(q * q, q * q) ** 4
            assert abs(r.value - ref) <= r.err_estimate


Z_GRID = [0.5, -1.0, 1.0, complex(0, 1.2), 2.0]
Q_GRID = [0.25, 0.3, 0.5, complex(0.4, 0.4), 0.8]


class TestTripleProduct:
    def test_z_one(self):
        assert jacobi_triple_product_residual(1, 0.3) < 1e-12

    def test_z_minus_one_is_phi_of_minus_q(self):
        with working_precision():
            assert jacobi_triple_product_residual(-1, 0.25) < 1e-12
            s = jacobi_theta_sum(-1, mpf("0.25"))
            with mpmath.workprec(256):
                ref = mpmath.jtheta(4, 0, mpf("0.25"))
            assert abs(s.value - ref) <= s.err_estimate

    def test_z_two(self):
        assert jacobi_triple_product_residual(2, 0.5) < 1e-10

    @pytest.mark.parametrize("z", Z_GRID)
    @pytest.mark.parametrize("q", Q_GRID)
    def test_grid(self, z, q):
        tol = mpf("1e-20")
        assert jacobi_triple_product_residual(z, q, tol) < 10 * tol

    @pytest.mark.parametrize("z,q", [(0, 0.3), (1, 1.0), (1, 1.5)])
    def test_domain(self, z, q):
        with pytest.raises(DomainError):
            jacobi_triple_product_residual(z, q)


class TestEvalResult:
    def test_propagation_bounds_perturbation(self):
        with working_precision():
            a = EvalResult(mpc(1.5, -0.2), mpf("1e-6"))
            b = EvalResult(mpc(-0.7, 0.9), mpf("2e-6"))
            for op in (lambda x, y: x + y, lambda x, y: x - y, lambda x, y: x * y, lambda x, y: x / y):
                r = op(a, b)
                for da in (mpf("1e-6"), mpc(0, -1e-6)):
                    for db in (mpf("-2e-6"), mpc(0, 2e-6)):
                        exact = op(a.value + da, b.value + db)
                        assert abs(exact - r.value) <= r.err_estimate

    def test_flags_combine(self):
        a = EvalResult(mpc(1), mpf(0), 3, True)
        b = EvalResult(mpc(1), mpf(0), 4, False)
        c = a * b
        assert c.terms_used == 7 and not c.rigorous


@pytest.mark.parametrize(
    "fn,args",
    [
        (qpoch_infinite, (mpc(0.3, 0.4), mpc(0.7, -0.2))),
        (theta_psi, (mpf("0.8"),)),
        (eta_quotient_correction, (mpc(0.5, 0.3),)),
        (jacobi_theta_sum, (mpc(1.3, 0.4), mpf("0.6"))),
    ],
)
def test_precision_doubling_within_error_estimate(fn, args):
    lo = fn(*args, prec=128)
    hi = fn(*args, prec=256)
    with working_precision(256):
        assert abs(hi.value - lo.value) <= lo.err_estimate


def test_precision_context_is_inherited():
    with working_precision(200):
        assert mp.prec == 200
        with working_precision():
            assert mp.prec == 200
    with pytest.raises(DomainError):
        with working_precision(20):
            pass
