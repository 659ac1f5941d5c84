"""Trapezoidal quadrature for the Mordell and Watson integrals.

Both integrands are analytic in a strip around the real axis and decay like
Gaussians, so the equal-step trapezoid rule converges exponentially in
``1/h``.  The step is halved until two successive sums agree to ``tol/2``.
The truncated tails are bounded analytically.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, NonConvergence
from .numkernel import eps, precise, resolve_tol, to_complex

#: Margin kept between arg(alpha) and +-pi/2.
ARG_MARGIN = 0.1
MAX_HALVINGS = 14


@dataclass(frozen=True)
class QuadratureResult:
    value: mpc
    err_estimate: mpf
    nodes_used: int
    truncation_point: mpf


def _check_alpha(alpha) -> mpc:
    alpha = to_complex(alpha)
    if not alpha.real > 0:
        raise DomainError("Re(alpha) must be > 0")
    if abs(mpmath.arg(alpha)) > mp.pi / 2 - ARG_MARGIN:
        raise DomainError(f"|arg(alpha)| must be <= pi/2 - {ARG_MARGIN}")
    return alpha


def _truncation_point(a: mpf, tol: mpf) -> mpf:
    """Smallest X with exp(-a X^2) < tol/100."""
    return mpmath.sqrt(-mpmath.log(tol / 100) / a)


def _trapezoid_even(f: Callable[[mpf], mpc], X: mpf, h0: mpf, tol: mpf):
    """Whole-line trapezoid sum of an even integrand on [-X, X], halving ``h``.

    Returns ``(value, refinement_difference, nodes, absolute_sum)``.
    """
    h = h0
    K = int(mpmath.ceil(X / h))
    vals = {0: f(mpf(0))}
    for k in range(1, K + 1):
        vals[k] = f(k * h)

    def total(values, step):
        return step * (values[0] + 2 * mpmath.fsum(v for k, v in values.items() if k))

    prev = total(vals, h)
    for _ in range(MAX_HALVINGS):
        h /= 2
        K = int(mpmath.ceil(X / h))
        new = {2 * k: v for k, v in vals.items()}
        for k in range(1, K + 1, 2):
            new[k] = f(k * h)
        for k in range(K + 1, max(new) + 1):
            new.pop(k, None)
        vals = new
        cur = total(vals, h)
        diff = abs(cur - prev)
        if diff < tol / 2:
            absum = h * (abs(vals[0]) + 2 * mpmath.fsum(abs(v) for k, v in vals.items() if k))
            return cur, diff, 2 * K + 1, absum
        prev = cur
    raise NonConvergence("step halving did not reach the tolerance")


def _initial_step(alpha: mpc) -> mpf:
    # nearest pole of 1/cosh(alpha x) sits at distance ~ pi/(2|alpha|) from the axis
    return min(mpf(1), mp.pi / (2 * abs(alpha)))


@precise
def mordell_integral(alpha, tol=None) -> QuadratureResult:
    """``int_{-inf}^{inf} exp(-alpha x^2) / cosh(alpha x) dx`` for ``Re(alpha) > 0``."""
    alpha = _check_alpha(alpha)
    tol = resolve_tol(tol)
    a = alpha.real
    X = _truncation_point(a, tol)
    # |cosh(u + iv)| >= sinh(u) and the Gaussian tail integral <= exp(-aX^2)/(2aX), both ends
    tail = mpmath.exp(-a * X * X) / (a * X * mpmath.sinh(a * X))

    def f(x):
        return mpmath.exp(-alpha * x * x) / mpmath.cosh(alpha * x)

    value, diff, nodes, absum = _trapezoid_even(f, X, _initial_step(alpha), tol)
    err = diff + tail + 4 * nodes * eps() * absum
    return QuadratureResult(value, err, nodes, X)


@precise
def watson_integral(alpha, tol=None) -> QuadratureResult:
    """``int_0^inf exp(-3 alpha x^2/4) cosh(alpha x/2) / cosh(3 alpha x/2) dx``."""
    alpha = _check_alpha(alpha)
    tol = resolve_tol(tol)
    a = alpha.real
    c = 3 * a / 4
    X = _truncation_point(c, tol)
    # cosh(y)/sinh(3y) decreases for y > 0
    tail = mpmath.cosh(a * X / 2) / mpmath.sinh(3 * a * X / 2) * mpmath.exp(-c * X * X) / (2 * c * X)

    def f(x):
        return mpmath.exp(-3 * alpha * x * x / 4) * mpmath.cosh(alpha * x / 2) / mpmath.cosh(3 * alpha * x / 2)

    value, diff, nodes, absum = _trapezoid_even(f, X, _initial_step(3 * alpha / 2), 2 * tol)
    half = value / 2
    err = diff / 2 + tail + 4 * nodes * eps() * absum
    return QuadratureResult(half, err, nodes, X)
