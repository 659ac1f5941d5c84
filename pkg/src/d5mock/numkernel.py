"""Precision-controlled complex arithmetic, nomes, q-Pochhammer symbols and theta sums.

Every numeric scalar in the package is an :class:`mpmath.mpc`.  Public
functions accept a ``prec`` keyword (binary digits); when it is omitted the
precision of the enclosing call is inherited, falling back to
:data:`DEFAULT_PREC`.  The mpmath context is process global, so evaluate grids
in parallel with processes rather than threads.
"""
from __future__ import annotations

import functools
from collections import deque
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, NonConvergence, PoleError

DEFAULT_PREC = 128
DEFAULT_TOL = "1e-20"
#: Beyond this modulus the geometric tail bounds are not used; evaluation
#: refuses unless the caller opts into heuristic stopping.
SAFE_RADIUS = 0.95
MAX_TERMS = 200_000
HEURISTIC_WINDOW = 32

_active_prec: ContextVar[Optional[int]] = ContextVar("d5mock_prec", default=None)


@contextmanager
def working_precision(prec: Optional[int] = None) -> Iterator[int]:
    """Run a block at ``prec`` bits, or inherit the enclosing working precision."""
    if prec is None:
        prec = _active_prec.get() or DEFAULT_PREC
    prec = int(prec)
    if prec < 53:
        raise DomainError("precision must be at least 53 bits")
    token = _active_prec.set(prec)
    try:
        with mp.workprec(prec):
            yield prec
    finally:
        _active_prec.reset(token)


def precise(fn):
    """Decorator adding a ``prec`` keyword that sets the working precision for the call."""

    @functools.wraps(fn)
    def wrapper(*args, prec: Optional[int] = None, **kwargs):
        with working_precision(prec):
            return fn(*args, **kwargs)

    return wrapper


def to_complex(x) -> mpc:
    """Coerce numbers, strings and mpmath scalars to an mpc at working precision."""
    if isinstance(x, str):
        x = mpmath.mpmathify(x.replace(" ", ""))
    return mpc(x)


def resolve_tol(tol) -> mpf:
    if tol is None:
        return mpf(DEFAULT_TOL)
    tol = mpf(tol)
    if tol <= 0:
        raise DomainError("tol must be positive")
    return tol


def eps() -> mpf:
    """Unit roundoff at the current working precision."""
    return mpf(2) ** (-mp.prec)


def _ulp(x) -> mpf:
    return abs(x) * mpf(2) ** (2 - mp.prec)


# --------------------------------------------------------------------------
# Nomes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Nome:
    """A point ``q`` of the unit disc, optionally with its generator ``alpha``.

    When ``alpha`` is present ``q = exp(-alpha)`` and ``q1 = exp(-pi**2/alpha)``
    is the dual nome under ``alpha -> pi**2/alpha``.
    """

    q: mpc
    alpha: Optional[mpc] = None
    q1: Optional[mpc] = None

    def __post_init__(self):
        if not abs(self.q) < 1:
            raise DomainError("|q| must be < 1")

    @property
    def modulus(self) -> mpf:
        return abs(self.q)

    def power(self, c) -> mpc:
        """``q**c`` for real ``c``, realised as ``exp(-c*alpha)`` (requires alpha)."""
        if self.alpha is None:
            raise DomainError("fractional powers need the generating alpha")
        return mpmath.exp(-mpf(c) * self.alpha)

    def dual_power(self, c) -> mpc:
        """``q1**c`` realised as ``exp(-c*pi**2/alpha)``."""
        if self.alpha is None:
            raise DomainError("fractional powers need the generating alpha")
        return mpmath.exp(-mpf(c) * mp.pi ** 2 / self.alpha)


def as_nome(q) -> Nome:
    if isinstance(q, Nome):
        return q
    return Nome(to_complex(q))


@precise
def nome_pair(alpha) -> Nome:
    """Return the nome ``exp(-alpha)`` together with its dual ``exp(-pi**2/alpha)``.

    >>> n = nome_pair(1)
    >>> float(abs(n.q1 - mpmath.exp(-mpmath.pi**2))) < 1e-30
    True
    """
    alpha = to_complex(alpha)
    if not alpha.real > 0:
        raise DomainError("Re(alpha) must be > 0")
    q = mpmath.exp(-alpha)
    q1 = mpmath.exp(-mp.pi ** 2 / alpha)
    return Nome(q=q, alpha=alpha, q1=q1)


def check_radius(q: mpc, heuristic: bool) -> None:
    r = abs(q)
    if not r < 1:
        raise DomainError("|q| must be < 1")
    if r > SAFE_RADIUS and not heuristic:
        raise DomainError(
            f"|q| = {mpmath.nstr(r, 6)} exceeds the safe radius {SAFE_RADIUS}; "
            "pass heuristic=True to accept a last-term error estimate"
        )


# --------------------------------------------------------------------------
# Results with error propagation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EvalResult:
    """A value with an error estimate and the number of terms (or factors) used.

    ``rigorous`` is True when ``err_estimate`` comes from a proven tail bound
    and False when it is the heuristic last-terms estimate.  Arithmetic between
    results propagates first-order-exact error bounds.
    """

    value: mpc
    err_estimate: mpf
    terms_used: int = 0
    rigorous: bool = True

    @staticmethod
    def exact(x) -> "EvalResult":
        v = to_complex(x)
        return EvalResult(v, _ulp(v), 0, True)

    def _combine(self, other: "EvalResult", value, err) -> "EvalResult":
        return EvalResult(
            value,
            err + _ulp(value),
            self.terms_used + other.terms_used,
            self.rigorous and other.rigorous,
        )

    def __add__(self, other):
        other = _lift(other)
        return self._combine(other, self.value + other.value, self.err_estimate + other.err_estimate)

    __radd__ = __add__

    def __neg__(self):
        return EvalResult(-self.value, self.err_estimate, self.terms_used, self.rigorous)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) + (-self)

    def __mul__(self, other):
        other = _lift(other)
        ea, eb = self.err_estimate, other.err_estimate
        err = abs(self.value) * eb + abs(other.value) * ea + ea * eb
        return self._combine(other, self.value * other.value, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        b = abs(other.value)
        if not other.err_estimate < b:
            raise PoleError("divisor is indistinguishable from zero within its error estimate")
        err = (self.err_estimate * b + abs(self.value) * other.err_estimate) / (b * (b - other.err_estimate))
        return self._combine(other, self.value / other.value, err)

    def __rtruediv__(self, other):
        return _lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise TypeError("only nonnegative integer powers are supported")
        out = EvalResult(mpc(1), mpf(0), 0, True)
        for _ in range(k):
            out = out * self
        return out


def _lift(x) -> EvalResult:
    return x if isinstance(x, EvalResult) else EvalResult.exact(x)


# --------------------------------------------------------------------------
# Series engines
# --------------------------------------------------------------------------


def sum_series(
    terms: Iterable,
    tail_bound: Optional[Callable[[int], mpf]],
    tol: mpf,
    *,
    heuristic: bool = False,
    max_terms: int = MAX_TERMS,
) -> EvalResult:
    """Sum ``t_0 + t_1 + ...`` until the tail is certified below ``tol``.

    ``tail_bound(n)`` must bound ``sum_{k >= n} |t_k|``.  With ``heuristic`` the
    bound is ignored and summation stops once the last
    :data:`HEURISTIC_WINDOW` terms are all tiny; their total magnitude becomes
    the error estimate.
    """
    total = mpc(0)
    absum = mpf(0)
    recent: deque = deque(maxlen=HEURISTIC_WINDOW)
    n = 0
    for n, t in enumerate(terms):
        if n >= max_terms:
            raise NonConvergence(f"series did not converge within {max_terms} terms")
        total += t
        a = abs(t)
        absum += a
        if heuristic:
            recent.append(a)
            if len(recent) == recent.maxlen and max(recent) * len(recent) <= tol:
                tail = sum(recent)
                break
        else:
            tail = tail_bound(n + 1)
            if tail <= tol:
                break
    else:
        raise NonConvergence("term generator exhausted before convergence")
    slack = 4 * (n + 1) * eps() * absum
    return EvalResult(total, tail + slack, n + 1, not heuristic)


def bilateral_sum(
    term: Callable[[int], mpc],
    tail_bound: Callable[[int, int], mpf],
    tol: mpf,
    *,
    max_terms: int = MAX_TERMS,
) -> EvalResult:
    """Symmetric partial sums of ``sum_{n in Z} term(n)``.

    ``tail_bound(side, m)`` bounds ``sum_{k >= m} |term(side*k)|`` for
    ``side`` in ``(+1, -1)``.  Summation adds ``n = 0`` and then the pairs
    ``(M, -M)`` until both one-sided tails are below ``tol/2``.
    """
    t0 = term(0)
    total = t0
    absum = abs(t0)
    M = 0
    while True:
        up, down = tail_bound(1, M + 1), tail_bound(-1, M + 1)
        if up <= tol / 2 and down <= tol / 2:
            break
        M += 1
        if 2 * M + 1 > max_terms:
            raise NonConvergence(f"bilateral sum did not converge within {max_terms} terms")
        tp, tm = term(M), term(-M)
        total += tp + tm
        absum += abs(tp) + abs(tm)
    slack = 4 * (M + 1) * eps() * absum
    return EvalResult(total, up + down + slack, 2 * M + 1, True)


def abs_product_bound(c, r, start: int, step: int, sign: int) -> mpf:
    """Bound ``prod_{k>=0} (1 + sign*c*r**(start + k*step))`` for ``0 <= r < 1``.

    ``sign=+1`` returns an upper bound, ``sign=-1`` a lower bound (which needs
    ``c*r**start < 1``).  Used to bound Pochhammer factors uniformly in n.
    """
    c, r = mpf(c), mpf(r)
    if r == 0 or c == 0:
        x0 = c if start == 0 else mpf(0)
        return 1 + sign * x0
    if sign < 0 and c * r ** start >= 1:
        raise PoleError("product lower bound requires c*r**start < 1")
    prod = mpf(1)
    x = c * r ** start
    rs = r ** step
    while x > mpf("1e-8"):
        prod *= 1 + sign * x
        x *= rs
    tail = x / (1 - rs)
    guard = mpf(2) ** (20 - mp.prec)
    if sign > 0:
        return prod * mpmath.exp(tail) * (1 + guard)
    if tail >= 1:
        raise NonConvergence("product lower bound failed")
    return prod * (1 - tail) * (1 - guard)


def geometric_tail(C, rho, n: int) -> mpf:
    """``C * sum_{k>=n} rho**k`` for ``0 <= rho < 1``."""
    return C * rho ** n / (1 - rho)


def quadratic_tail(C, r, exponent: Callable[[int], int], n: int) -> mpf:
    """Bound ``C * sum_{k>=n} r**e(k)`` for a convex increasing integer exponent ``e``.

    Successive gaps ``e(k+1) - e(k)`` are nondecreasing, so the sum is at most
    ``r**e(n) / (1 - r**(e(n+1) - e(n)))``.
    """
    gap = exponent(n + 1) - exponent(n)
    if gap <= 0:
        return mpf("inf")
    return C * r ** exponent(n) / (1 - r ** gap)


# --------------------------------------------------------------------------
# q-Pochhammer symbols and theta sums
# --------------------------------------------------------------------------


@precise
def qpoch_finite(a, q, n: int) -> mpc:
    """``(a; q)_n = prod_{k=0}^{n-1} (1 - a q^k)``; the empty product is 1."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    a, q = to_complex(a), to_complex(q)
    prod = mpc(1)
    qk = mpc(1)
    for _ in range(n):
        prod *= 1 - a * qk
        qk *= q
    return prod


@precise
def qpoch_infinite(a, q, tol=None, *, max_terms: int = MAX_TERMS) -> EvalResult:
    """Infinite product ``(a; q)_inf`` with relative error at most ``tol``.

    Stops at the first K with ``s = |a| |q|^K / (1 - |q|) <= tol/2``; the
    omitted factors then multiply the partial product by a number within
    ``exp(s) - 1`` of one.
    """
    a, q = to_complex(a), to_complex(q)
    tol = resolve_tol(tol)
    r = abs(q)
    if not r < 1:
        raise DomainError("|q| must be < 1")
    absa = abs(a)
    prod = mpc(1)
    qk = mpc(1)
    rk = mpf(1)
    k = 0
    absum = mpf(0)
    while True:
        s = absa * rk / (1 - r)
        if s <= tol / 2:
            break
        if k >= max_terms:
            raise NonConvergence(f"product did not converge within {max_terms} factors")
        factor = 1 - a * qk
        prod *= factor
        absum += abs(a * qk)
        qk *= q
        rk *= r
        k += 1
    err = abs(prod) * (mpmath.expm1(s) + 4 * (k + 1) * eps() * (1 + absum))
    return EvalResult(prod, err, k, True)


@precise
def theta_psi(q, tol=None) -> EvalResult:
    """``psi(q) = sum_{n>=0} q^{n(n+1)/2}``.

    The half-integer theta sum ``sum_{n>=0} q^{(2n+1)^2/4}`` equals
    ``q^{1/4} psi(q)``; the fractional power is left to the caller.
    """
    q = as_nome(q).q
    tol = resolve_tol(tol)
    r = abs(q)

    def terms():
        t = mpc(1)
        qn = mpc(1)
        while True:
            yield t
            qn *= q
            t *= qn

    return sum_series(terms(), lambda n: quadratic_tail(1, r, lambda k: k * (k + 1) // 2, n), tol)


@precise
def eta_quotient_correction(q, tol=None) -> EvalResult:
    """``[(q;q)_inf]^5 / [(q^2;q^2)_inf]^4`` with propagated error."""
    q = as_nome(q).q
    tol = resolve_tol(tol)
    sub = tol / 20
    num = qpoch_infinite(q, q, sub) ** 5
    den = qpoch_infinite(q * q, q * q, sub) ** 4
    return num / den


@precise
def jacobi_theta_sum(z, q, tol=None) -> EvalResult:
    """Bilateral sum ``sum_{n in Z} z^n q^{n^2}``."""
    z, q = to_complex(z), to_complex(q)
    tol = resolve_tol(tol)
    if z == 0:
        raise DomainError("z must be nonzero")
    r = abs(q)
    if not r < 1:
        raise DomainError("|q| must be < 1")
    zabs = {1: abs(z), -1: 1 / abs(z)}

    def term(n):
        return z ** n * q ** (n * n)

    def tail(side, m):
        # consecutive ratios |z|^side r^(2k+1) decrease in k
        rho = zabs[side] * r ** (2 * m + 1)
        if rho >= 1:
            return mpf("inf")
        return zabs[side] ** m * r ** (m * m) / (1 - rho)

    return bilateral_sum(term, tail, tol)


@precise
def jacobi_triple_product_residual(z, q, tol=None) -> mpf:
    """``|sum_n z^n q^{n^2} - (q^2;q^2)_inf (-zq;q^2)_inf (-q/z;q^2)_inf|``.

    The sum and the three products are evaluated independently.
    """
    z, q = to_complex(z), to_complex(q)
    tol = resolve_tol(tol)
    if z == 0:
        raise DomainError("z must be nonzero")
    if not abs(q) < 1:
        raise DomainError("|q| must be < 1")
    q2 = q * q
    lhs = jacobi_theta_sum(z, q, tol)
    rhs = qpoch_infinite(q2, q2, tol) * qpoch_infinite(-z * q, q2, tol) * qpoch_infinite(-q / z, q2, tol)
    return abs(lhs.value - rhs.value)
