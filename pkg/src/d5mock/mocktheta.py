"""D5, D5*, omega, f, h1 and h2 in their Eulerian, alternative and Lerch-sum forms.

All evaluators take a :class:`~d5mock.numkernel.Nome` (or anything coercible
to one), a tolerance for the absolute truncation error and return an
:class:`~d5mock.numkernel.EvalResult`.  The Eulerian sums are truncated with a
rigorous bound of the form ``C * |q|**e(n)``, where ``C`` bounds the
Pochhammer factors uniformly in ``n`` and ``e(n)`` is the exponent of the
explicit power of q in the summand.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Tuple

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf
from scipy.interpolate import BarycentricInterpolator

from .errors import DomainError, PoleError
from .numkernel import (
    EvalResult,
    abs_product_bound,
    as_nome,
    bilateral_sum,
    check_radius,
    eta_quotient_correction,
    geometric_tail,
    precise,
    qpoch_infinite,
    quadratic_tail,
    resolve_tol,
    sum_series,
    to_complex,
)


def _upper(r, start, step, c=1):
    return abs_product_bound(c, r, start, step, +1)


def _lower(r, start, step, c=1):
    return abs_product_bound(c, r, start, step, -1)


def _eulerian(q, tol, heuristic, t0, ratio, bound_const, exponent) -> EvalResult:
    """Sum ``t_0 + t_1 + ...`` with ``t_{n+1} = t_n * ratio(n)``.

    ``bound_const(r)`` returns C with ``|t_n| <= C r**exponent(n)`` for all n.
    """
    check_radius(q, heuristic)
    tol = resolve_tol(tol)
    r = abs(q)

    def terms():
        t = t0
        n = 0
        while True:
            yield t
            t = t * ratio(n)
            n += 1

    if heuristic:
        return sum_series(terms(), None, tol, heuristic=True)
    C = bound_const(r)
    return sum_series(terms(), lambda n: quadratic_tail(C, r, exponent, n), tol)


# --------------------------------------------------------------------------
# D5 and D5*
# --------------------------------------------------------------------------


@precise
def d5_series(q, tol=None, *, heuristic: bool = False) -> EvalResult:
    """``D5(q) = sum_{n>=0} (-q;q)_n q^n / (q;q^2)_{n+1}``."""
    q = as_nome(q).q
    return _eulerian(
        q, tol, heuristic,
        1 / (1 - q),
        lambda n: (1 + q ** (n + 1)) * q / (1 - q ** (2 * n + 3)),
        lambda r: _upper(r, 1, 1) / _lower(r, 1, 2),
        lambda n: n,
    )


@precise
def d5_alt(q, tol=None, *, heuristic: bool = False) -> EvalResult:
    """``D5(q) = [(q;q^2)_inf]^{-2} sum_{n>=0} [(q;q^2)_n]^2 q^{2n}``."""
    q = as_nome(q).q
    tol = resolve_tol(tol)
    s = _eulerian(
        q, tol / 4, heuristic,
        mpc(1),
        lambda n: (1 - q ** (2 * n + 1)) ** 2 * q * q,
        lambda r: _upper(r, 1, 2) ** 2,
        lambda n: 2 * n,
    )
    p = qpoch_infinite(q, q * q, tol / 8)
    return s / (p * p)


@precise
def d5_star_series(q, tol=None, *, heuristic: bool = False) -> EvalResult:
    """``D5*(q) = sum_{n>=0} (-1)^n q^{n(n+1)/2} (-q;q)_n / (q;q^2)_{n+1}``.

    Near the unit circle (``|q| > 0.95``) pass ``heuristic=True``; the result is
    then flagged non-rigorous.
    """
    q = as_nome(q).q
    return _eulerian(
        q, tol, heuristic,
        1 / (1 - q),
        lambda n: -(q ** (n + 1)) * (1 + q ** (n + 1)) / (1 - q ** (2 * n + 3)),
        lambda r: _upper(r, 1, 1) / _lower(r, 1, 2),
        lambda n: n * (n + 1) // 2,
    )


@precise
def d5_star_at_root(N: int) -> mpc:
    """Value of the D5* sum at ``q = exp(pi i / N)``.

    Only ``n < N`` contributes: for ``n >= N`` the product ``(-q;q)_n``
    contains ``1 + q^N = 0``.  The denominators never vanish because
    ``q^(2k+1) = 1`` would need ``2N`` to divide an odd number.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    q = mpmath.expjpi(mpf(1) / N)
    total = mpc(0)
    t = 1 / (1 - q)
    for n in range(N):
        total += t
        t = t * (-(q ** (n + 1)) * (1 + q ** (n + 1)) / (1 - q ** (2 * n + 3)))
    return total


@precise
def d5_star_radial_limit(N: int, ks=range(4, 11), tol=None) -> complex:
    """Extrapolate D5* along ``q = r exp(pi i/N)`` to ``r -> 1``.

    Evaluates at ``r = 1 - 2**-k`` and interpolates the values as a polynomial
    in ``1 - r`` at zero.  This is an empirical consistency check and carries
    no error bound.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    zeta = mpmath.expjpi(mpf(1) / N)
    hs, vals = [], []
    for k in ks:
        h = mpf(2) ** -k
        v = d5_star_series((1 - h) * zeta, tol, heuristic=True).value
        hs.append(float(h))
        vals.append(complex(v))
    return complex(BarycentricInterpolator(np.array(hs), np.array(vals))(0.0))


# --------------------------------------------------------------------------
# The q-hypergeometric transformation
# --------------------------------------------------------------------------


def _qhyper_args(a, b, c, z, q):
    a, b, c, z = (to_complex(x) for x in (a, b, c, z))
    q = as_nome(q).q
    if not abs(z) < 1:
        raise DomainError("|z| must be < 1")
    if not abs(b) < 1 or not abs(c) < 1:
        raise DomainError("|b| and |c| must be < 1")
    if not abs(a * z) < 1:
        raise DomainError("|a z| must be < 1")
    check_radius(q, False)
    return a, b, c, z, q


def _nonzero(x, what):
    if abs(x) < mpf(2) ** (-mp.prec // 2):
        raise PoleError(f"{what} vanishes")
    return x


@precise
def qhyper_lhs(a, b, c, z, q, tol=None) -> EvalResult:
    """``sum_n (a;q^2)_n (b;q)_{2n} z^n / [(q^2;q^2)_n (c;q)_{2n}]``."""
    a, b, c, z, q = _qhyper_args(a, b, c, z, q)
    tol = resolve_tol(tol)
    r = abs(q)
    C = _upper(r, 0, 2, abs(a)) * _upper(r, 0, 1, abs(b)) / (_lower(r, 2, 2) * _lower(r, 0, 1, abs(c)))

    def terms():
        t = mpc(1)
        n = 0
        while True:
            yield t
            q2n = q ** (2 * n)
            num = (1 - a * q2n) * (1 - b * q2n) * (1 - b * q2n * q) * z
            den = (1 - q2n * q * q) * (1 - c * q2n) * (1 - c * q2n * q)
            t = t * num / _nonzero(den, "(c;q)_{2n}")
            n += 1

    return sum_series(terms(), lambda n: geometric_tail(C, abs(z), n), tol)


@precise
def qhyper_rhs(a, b, c, z, q, tol=None) -> EvalResult:
    """Transformed side of the q-hypergeometric identity.

    ``(b)_inf (az;q^2)_inf / [(c)_inf (z;q^2)_inf]`` times
    ``sum_m (c/b)_m (z;q^2)_m b^m / [(q)_m (az;q^2)_m]``; ``c/b`` is taken as 0
    when ``c = 0``.
    """
    a, b, c, z, q = _qhyper_args(a, b, c, z, q)
    tol = resolve_tol(tol)
    if c == 0:
        cb = mpc(0)
    elif b == 0:
        raise DomainError("c/b is undefined for b = 0 and c != 0")
    else:
        cb = c / b
    r = abs(q)
    q2 = q * q
    C = _upper(r, 0, 1, abs(cb)) * _upper(r, 0, 2, abs(z)) / (_lower(r, 1, 1) * _lower(r, 0, 2, abs(a * z)))

    def terms():
        t = mpc(1)
        m = 0
        while True:
            yield t
            qm = q ** m
            q2m = qm * qm
            den = (1 - qm * q) * (1 - a * z * q2m)
            t = t * (1 - cb * qm) * (1 - z * q2m) * b / _nonzero(den, "(az;q^2)_m")
            m += 1

    s = sum_series(terms(), lambda m: geometric_tail(C, abs(b), m), tol / 4)
    sub = tol / 32
    pre = qpoch_infinite(b, q, sub) * qpoch_infinite(a * z, q2, sub)
    pre = pre / (qpoch_infinite(c, q, sub) * qpoch_infinite(z, q2, sub))
    return pre * s


# --------------------------------------------------------------------------
# Third-order omega and f
# --------------------------------------------------------------------------


@precise
def omega_series(q, tol=None, *, heuristic: bool = False) -> EvalResult:
    """``omega(q) = sum_{n>=0} q^{2n(n+1)} / [(q;q^2)_{n+1}]^2``."""
    q = as_nome(q).q
    return _eulerian(
        q, tol, heuristic,
        1 / (1 - q) ** 2,
        lambda n: q ** (4 * (n + 1)) / (1 - q ** (2 * n + 3)) ** 2,
        lambda r: 1 / _lower(r, 1, 2) ** 2,
        lambda n: 2 * n * (n + 1),
    )


@precise
def omega_alt(q, tol=None, *, heuristic: bool = False) -> EvalResult:
    """``omega(q) = sum_{n>=0} q^n / (q;q^2)_{n+1}``."""
    q = as_nome(q).q
    return _eulerian(
        q, tol, heuristic,
        1 / (1 - q),
        lambda n: q / (1 - q ** (2 * n + 3)),
        lambda r: 1 / _lower(r, 1, 2),
        lambda n: n,
    )


@precise
def f_series(q, tol=None, *, heuristic: bool = False) -> EvalResult:
    """``f(q) = sum_{n>=0} q^{n^2} / [(-q;q)_n]^2``."""
    q = as_nome(q).q
    return _eulerian(
        q, tol, heuristic,
        mpc(1),
        lambda n: q ** (2 * n + 1) / (1 + q ** (n + 1)) ** 2,
        lambda r: 1 / _lower(r, 1, 1) ** 2,
        lambda n: n * n,
    )


@precise
def f_alt(q, tol=None, *, heuristic: bool = False) -> EvalResult:
    """``f(q) = 2 - sum_{n>=0} (-1)^n q^n / (-q;q)_n``."""
    q = as_nome(q).q
    s = _eulerian(
        q, tol, heuristic,
        mpc(1),
        lambda n: -q / (1 + q ** (n + 1)),
        lambda r: 1 / _lower(r, 1, 1),
        lambda n: n,
    )
    return 2 - s


# --------------------------------------------------------------------------
# h1 and h2
# --------------------------------------------------------------------------


@precise
def h1_series(q, tol=None, *, heuristic: bool = False) -> EvalResult:
    """``h1(q) = sum_{n>=0} (-q;q)_{2n} q^n / [(q;q^2)_{n+1}]^2``."""
    q = as_nome(q).q
    return _eulerian(
        q, tol, heuristic,
        1 / (1 - q) ** 2,
        lambda n: (1 + q ** (2 * n + 1)) * (1 + q ** (2 * n + 2)) * q / (1 - q ** (2 * n + 3)) ** 2,
        lambda r: _upper(r, 1, 1) / _lower(r, 1, 2) ** 2,
        lambda n: n,
    )


@precise
def h2_series(q, tol=None, *, heuristic: bool = False) -> EvalResult:
    """``h2(q) = sum_{n>=0} (-1)^n (q;q^2)_n q^{n^2} / [(-q^2;q^2)_n]^2``."""
    q = as_nome(q).q
    return _eulerian(
        q, tol, heuristic,
        mpc(1),
        lambda n: -(1 - q ** (2 * n + 1)) * q ** (2 * n + 1) / (1 + q ** (2 * n + 2)) ** 2,
        lambda r: _upper(r, 1, 2) / _lower(r, 2, 2) ** 2,
        lambda n: n * n,
    )


# --------------------------------------------------------------------------
# Lerch sums
# --------------------------------------------------------------------------


def lerch_sum(q, tol, sign: int, Q: Callable[[int], int], L: Callable[[int], int], eps: int) -> EvalResult:
    """``sum_{n in Z} sign^n q^{Q(n)} / (1 - eps q^{L(n)})`` for ``eps = +-1``.

    Terms with ``L(n) < 0`` are rewritten as
    ``-eps q^{Q(n)-L(n)} / (1 - eps q^{-L(n)})`` so no negative powers of q
    are formed.  Each term is then bounded by ``|q|^E(n) / (1 - |q|)`` with
    ``E(n) = Q(n) - min(L(n), 0)``.
    """
    r = abs(q)
    floor = mpf(2) ** (-mp.prec // 2)

    def term(n):
        e, l = Q(n), L(n)
        if l >= 0:
            num, den = q ** e, 1 - eps * q ** l
        else:
            num, den = -eps * q ** (e - l), 1 - eps * q ** (-l)
        if abs(den) < floor:
            raise PoleError(f"Lerch denominator vanishes at n = {n}")
        return (sign ** abs(n)) * num / den

    def E(n):
        return Q(n) - min(L(n), 0)

    C = 1 / (1 - r)
    return bilateral_sum(term, lambda side, m: quadratic_tail(C, r, lambda k: E(side * k), m), resolve_tol(tol))


def _lerch_prep(q, tol):
    q = as_nome(q).q
    check_radius(q, False)
    return q, resolve_tol(tol)


@precise
def lerch_omega(q, tol=None) -> EvalResult:
    """``omega(q) = [(q^2;q^2)_inf]^{-1} sum_n (-1)^n q^{3n(n+1)} / (1 - q^{2n+1})``."""
    q, tol = _lerch_prep(q, tol)
    s = lerch_sum(q, tol / 4, -1, lambda n: 3 * n * (n + 1), lambda n: 2 * n + 1, 1)
    return s / qpoch_infinite(q * q, q * q, tol / 8)


@precise
def lerch_f(q, tol=None) -> EvalResult:
    """``f(q) = 2 [(q;q)_inf]^{-1} sum_n (-1)^n q^{n(3n+1)/2} / (1 + q^n)``.

    The ``n = 0`` term is the literal ``1/2``.
    """
    q, tol = _lerch_prep(q, tol)
    s = lerch_sum(q, tol / 8, -1, lambda n: n * (3 * n + 1) // 2, lambda n: n, -1)
    return 2 * s / qpoch_infinite(q, q, tol / 8)


@precise
def lerch_h1(q, tol=None) -> EvalResult:
    """``h1(q) = (1/2) (-q;q)_inf / (q;q)_inf * sum_n (-1)^n q^{n(n+2)} / (1 - q^{2n+1})``."""
    q, tol = _lerch_prep(q, tol)
    s = lerch_sum(q, tol / 8, -1, lambda n: n * (n + 2), lambda n: 2 * n + 1, 1)
    sub = tol / 32
    return s * qpoch_infinite(-q, q, sub) / (2 * qpoch_infinite(q, q, sub))


@precise
def lerch_h2(q, tol=None) -> EvalResult:
    """``h2(q) = (q;q)_inf / [(q^2;q^2)_inf]^2 * sum_n q^{n(n+1)/2} / (1 + q^n) + (1/2) eta correction``."""
    q, tol = _lerch_prep(q, tol)
    s = lerch_sum(q, tol / 8, 1, lambda n: n * (n + 1) // 2, lambda n: n, -1)
    sub = tol / 32
    p2 = qpoch_infinite(q * q, q * q, sub)
    main = s * qpoch_infinite(q, q, sub) / (p2 * p2)
    return main + eta_quotient_correction(q, tol / 8) * mpf("0.5")


# --------------------------------------------------------------------------
# Representation dispatch
# --------------------------------------------------------------------------


class Tag(str, Enum):
    D5 = "D5"
    D5_STAR = "D5_STAR"
    OMEGA = "OMEGA"
    F = "F"
    H1 = "H1"
    H2 = "H2"


class Representation(str, Enum):
    PRIMARY_SERIES = "PRIMARY_SERIES"
    ALT_SERIES = "ALT_SERIES"
    LERCH = "LERCH"


_EVALUATORS: Dict[Tuple[Tag, Representation], Callable[..., EvalResult]] = {
    (Tag.D5, Representation.PRIMARY_SERIES): d5_series,
    (Tag.D5, Representation.ALT_SERIES): d5_alt,
    (Tag.D5_STAR, Representation.PRIMARY_SERIES): d5_star_series,
    (Tag.OMEGA, Representation.PRIMARY_SERIES): omega_series,
    (Tag.OMEGA, Representation.ALT_SERIES): omega_alt,
    (Tag.OMEGA, Representation.LERCH): lerch_omega,
    (Tag.F, Representation.PRIMARY_SERIES): f_series,
    (Tag.F, Representation.ALT_SERIES): f_alt,
    (Tag.F, Representation.LERCH): lerch_f,
    (Tag.H1, Representation.PRIMARY_SERIES): h1_series,
    (Tag.H1, Representation.LERCH): lerch_h1,
    (Tag.H2, Representation.PRIMARY_SERIES): h2_series,
    (Tag.H2, Representation.LERCH): lerch_h2,
}

#: Command-line names of the tags.
TAG_NAMES = {
    "d5": Tag.D5,
    "d5-star": Tag.D5_STAR,
    "omega": Tag.OMEGA,
    "f": Tag.F,
    "h1": Tag.H1,
    "h2": Tag.H2,
}

REPR_NAMES = {
    "primary": Representation.PRIMARY_SERIES,
    "alt": Representation.ALT_SERIES,
    "lerch": Representation.LERCH,
}


@dataclass(frozen=True)
class FunctionId:
    """A function together with one of the representations available for it."""

    tag: Tag
    representation: Representation = Representation.PRIMARY_SERIES

    def __post_init__(self):
        object.__setattr__(self, "tag", Tag(self.tag))
        object.__setattr__(self, "representation", Representation(self.representation))
        if (self.tag, self.representation) not in _EVALUATORS:
            raise DomainError(f"{self.tag.value} has no {self.representation.value} representation")

    @classmethod
    def parse(cls, name: str, representation: str = "primary") -> "FunctionId":
        try:
            tag = TAG_NAMES[name.lower()]
            rep = REPR_NAMES[representation.lower()]
        except KeyError:
            raise DomainError(f"unknown function or representation: {name!r}/{representation!r}") from None
        return cls(tag, rep)

    @property
    def evaluator(self) -> Callable[..., EvalResult]:
        return _EVALUATORS[(self.tag, self.representation)]

    def evaluate(self, q, tol=None, **kwargs) -> EvalResult:
        return self.evaluator(q, tol, **kwargs)


def representations(tag) -> List[FunctionId]:
    tag = Tag(tag)
    return [FunctionId(t, r) for (t, r) in _EVALUATORS if t is tag]
