"""Exact truncated power series in q with Python integer coefficients.

These series are the ground truth for every q-expansion in the package: no
floating point is involved until :func:`series_eval` is called.

The Eulerian sums are expanded summand by summand.  Each summand is updated
from the previous one by multiplying or dividing by binomials ``1 - c q^k``
and shifting, which is exact modulo ``q^N`` because every operation only moves
coefficients to higher exponents.  A sum stops at the first summand whose
minimal exponent reaches the truncation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from mpmath import mpc

from .errors import DomainError, NonUnit, OrderMismatch
from .numkernel import precise, to_complex

DEFAULT_ORDER = 64
MAX_ORDER = 4096


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series ``sum c_k q^k`` known modulo ``q^order``."""

    coeffs: tuple
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise DomainError("order must be nonnegative")
        cs = tuple(self.coeffs)[: self.order]
        for c in cs:
            if not isinstance(c, int) or isinstance(c, bool):
                raise TypeError("coefficients must be Python integers")
        cs = cs + (0,) * (self.order - len(cs))
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.monomial(1, 0, order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((), order)

    @classmethod
    def monomial(cls, c: int, j: int, order: int) -> "TruncatedSeries":
        cs = [0] * order
        if j < order:
            cs[j] = c
        return cls(tuple(cs), order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if other.order != self.order:
            raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")
        return other

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries.monomial(other, 0, self.order)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-a for a in self.coeffs), self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return TruncatedSeries(tuple(other * a for a in self.coeffs), self.order)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = TruncatedSeries.one(self.order)
        for _ in range(k):
            out = series_mul(out, self)
        return out

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``q^k``."""
        return TruncatedSeries((0,) * k + self.coeffs, self.order)

    def valuation(self) -> Optional[int]:
        """Exponent of the lowest nonzero coefficient, or None for the zero series."""
        return next((k for k, c in enumerate(self.coeffs) if c), None)

    def nonzero_terms(self) -> Dict[int, int]:
        return {k: c for k, c in enumerate(self.coeffs) if c}


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Exact product truncated at the common order."""
    if a.order != b.order:
        raise OrderMismatch(f"orders differ: {a.order} vs {b.order}")
    N = a.order
    out = [0] * N
    bs = b.coeffs
    for i, ai in enumerate(a.coeffs):
        if ai:
            for j in range(N - i):
                bj = bs[j]
                if bj:
                    out[i + j] += ai * bj
    return TruncatedSeries(tuple(out), N)


def series_inv_unit(a: TruncatedSeries) -> TruncatedSeries:
    """Exact inverse modulo ``q^order`` of a series with constant term +-1."""
    N = a.order
    if N == 0:
        return a
    a0 = a.coeffs[0]
    if a0 not in (1, -1):
        raise NonUnit(f"constant term {a0} is not a unit")
    cs = a.coeffs
    b = [0] * N
    b[0] = a0
    for k in range(1, N):
        s = 0
        for i in range(1, k + 1):
            if cs[i]:
                s += cs[i] * b[k - i]
        b[k] = -a0 * s
    return TruncatedSeries(tuple(b), N)


# In-place kernels on coefficient lists; ``lo`` skips a known run of leading zeros.

def _mul_binomial(cs: List[int], c: int, k: int, lo: int = 0) -> None:
    """cs *= (1 - c q^k)."""
    if c == 0:
        return
    for i in range(len(cs) - 1, max(lo + k, k) - 1, -1):
        cs[i] -= c * cs[i - k]


def _div_binomial(cs: List[int], c: int, k: int, lo: int = 0) -> None:
    """cs /= (1 - c q^k), k >= 1."""
    if k < 1:
        raise NonUnit("division by a binomial needs a positive exponent")
    if c == 0:
        return
    for i in range(max(lo + k, k), len(cs)):
        cs[i] += c * cs[i - k]


def _shift(cs: List[int], k: int) -> List[int]:
    if k == 0:
        return cs
    return ([0] * k + cs)[: len(cs)]


def qpoch_series(c: int, j: int, step: int, n, order: int) -> TruncatedSeries:
    """Expansion of ``prod_{k=0}^{n-1} (1 - c q^(j + k*step))`` modulo ``q^order``.

    ``n`` may be ``math.inf`` (or None) for the infinite product, which needs
    ``j >= 1`` so that only finitely many factors differ from 1.
    """
    if step < 1:
        raise DomainError("step must be positive")
    infinite = n is None or n == math.inf
    if infinite:
        if j < 1:
            raise DomainError("infinite product needs a monomial of positive degree")
        n = max(0, -(-(order - j) // step))
    if n < 0:
        raise DomainError("n must be nonnegative")
    cs = [0] * order
    if order:
        cs[0] = 1
    for k in range(n):
        e = j + k * step
        if e == 0:
            cs = [(1 - c) * x for x in cs]
        elif e < order:
            _mul_binomial(cs, c, e)
    return TruncatedSeries(tuple(cs), order)


@precise
def series_eval(s: TruncatedSeries, q) -> mpc:
    """Horner evaluation of the truncated series at ``q`` (working precision)."""
    q = to_complex(q)
    acc = mpc(0)
    for c in reversed(s.coeffs):
        acc = acc * q + c
    return acc


# --------------------------------------------------------------------------
# Eulerian expansions
# --------------------------------------------------------------------------


def _eulerian(order: int, first: Callable[[List[int]], None], step, exponent) -> TruncatedSeries:
    """Sum of summands t_0, t_1, ... with ``t_{n+1} = step(t_n, n)``.

    ``exponent(n)`` is a lower bound for the valuation of ``t_n``; summation
    stops once it reaches ``order``.
    """
    _check_order(order)
    t = [0] * order
    if order:
        t[0] = 1
    first(t)
    total = [0] * order
    n = 0
    while exponent(n) < order:
        for i in range(exponent(n), order):
            total[i] += t[i]
        t = step(t, n)
        n += 1
    return TruncatedSeries(tuple(total), order)


def _check_order(order: int) -> None:
    if not 0 <= order <= MAX_ORDER:
        raise DomainError(f"order must be in [0, {MAX_ORDER}]")


def d5_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``sum (-q;q)_n q^n / (q;q^2)_{n+1}``."""

    def step(t, n):
        _mul_binomial(t, -1, n + 1, n)
        t = _shift(t, 1)
        _div_binomial(t, 1, 2 * n + 3, n + 1)
        return t

    return _eulerian(order, lambda t: _div_binomial(t, 1, 1), step, lambda n: n)


def d5_star_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``sum (-1)^n q^{n(n+1)/2} (-q;q)_n / (q;q^2)_{n+1}``."""

    def step(t, n):
        _mul_binomial(t, -1, n + 1, n * (n + 1) // 2)
        t = _shift([-x for x in t], n + 1)
        _div_binomial(t, 1, 2 * n + 3, (n + 1) * (n + 2) // 2)
        return t

    return _eulerian(order, lambda t: _div_binomial(t, 1, 1), step, lambda n: n * (n + 1) // 2)


def omega_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``sum q^{2n(n+1)} / (q;q^2)_{n+1}^2``."""

    def first(t):
        _div_binomial(t, 1, 1)
        _div_binomial(t, 1, 1)

    def step(t, n):
        t = _shift(t, 4 * (n + 1))
        lo = 2 * (n + 1) * (n + 2)
        _div_binomial(t, 1, 2 * n + 3, lo)
        _div_binomial(t, 1, 2 * n + 3, lo)
        return t

    return _eulerian(order, first, step, lambda n: 2 * n * (n + 1))


def omega_alt_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``sum q^n / (q;q^2)_{n+1}``."""

    def step(t, n):
        t = _shift(t, 1)
        _div_binomial(t, 1, 2 * n + 3, n + 1)
        return t

    return _eulerian(order, lambda t: _div_binomial(t, 1, 1), step, lambda n: n)


def f_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``sum q^{n^2} / (-q;q)_n^2``."""

    def step(t, n):
        t = _shift(t, 2 * n + 1)
        lo = (n + 1) ** 2
        _div_binomial(t, -1, n + 1, lo)
        _div_binomial(t, -1, n + 1, lo)
        return t

    return _eulerian(order, lambda t: None, step, lambda n: n * n)


def f_alt_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``2 - sum (-1)^n q^n / (-q;q)_n``."""

    def step(t, n):
        t = _shift([-x for x in t], 1)
        _div_binomial(t, -1, n + 1, n + 1)
        return t

    s = _eulerian(order, lambda t: None, step, lambda n: n)
    return TruncatedSeries.monomial(2, 0, order) - s if order else s


def h1_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``sum (-q;q)_{2n} q^n / (q;q^2)_{n+1}^2``."""

    def first(t):
        _div_binomial(t, 1, 1)
        _div_binomial(t, 1, 1)

    def step(t, n):
        _mul_binomial(t, -1, 2 * n + 1, n)
        _mul_binomial(t, -1, 2 * n + 2, n)
        t = _shift(t, 1)
        _div_binomial(t, 1, 2 * n + 3, n + 1)
        _div_binomial(t, 1, 2 * n + 3, n + 1)
        return t

    return _eulerian(order, first, step, lambda n: n)


def h2_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``sum (-1)^n (q;q^2)_n q^{n^2} / (-q^2;q^2)_n^2``."""

    def step(t, n):
        _mul_binomial(t, 1, 2 * n + 1, n * n)
        t = _shift([-x for x in t], 2 * n + 1)
        lo = (n + 1) ** 2
        _div_binomial(t, -1, 2 * n + 2, lo)
        _div_binomial(t, -1, 2 * n + 2, lo)
        return t

    return _eulerian(order, lambda t: None, step, lambda n: n * n)


def eta_ratio_squared_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``[(q^2;q^2)_inf / (q;q)_inf]^2`` via the general product and inverse routines."""
    _check_order(order)
    num = qpoch_series(1, 2, 2, math.inf, order)
    den = qpoch_series(1, 1, 1, math.inf, order)
    ratio = series_mul(num, series_inv_unit(den))
    return series_mul(ratio, ratio)


def eta_quotient_expansion(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``[(q;q)_inf]^5 / [(q^2;q^2)_inf]^4``."""
    _check_order(order)
    num = qpoch_series(1, 1, 1, math.inf, order) ** 5
    den = qpoch_series(1, 2, 2, math.inf, order) ** 4
    return series_mul(num, series_inv_unit(den))


EXPANSIONS: Dict[str, Callable[[int], TruncatedSeries]] = {
    "d5": d5_expansion,
    "d5-star": d5_star_expansion,
    "omega": omega_expansion,
    "omega-alt": omega_alt_expansion,
    "f": f_expansion,
    "f-alt": f_alt_expansion,
    "h1": h1_expansion,
    "h2": h2_expansion,
}


def expansion(name: str, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    try:
        builder = EXPANSIONS[name]
    except KeyError:
        raise DomainError(f"no expansion named {name!r}; choose from {sorted(EXPANSIONS)}") from None
    return builder(order)


def d5_decomposition_residual(order: int = 50) -> TruncatedSeries:
    """``D5 - (2 h1 - [(q^2;q^2)/(q;q)]^2 omega)`` as an exact series (zero when the identity holds)."""
    return d5_expansion(order) - (2 * h1_expansion(order) - eta_ratio_squared_expansion(order) * omega_expansion(order))
