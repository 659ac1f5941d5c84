"""Identity registry: assemble both sides of each identity and report residuals.

Every identity is registered once in :data:`REGISTRY` with its parameter names,
a checker and a canonical parameter grid, so runners (including the command
line) can enumerate them without knowing their details.
"""
from __future__ import annotations

import cmath
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from . import mocktheta as mt
from . import qexpand
from .errors import DomainError
from .mordell import mordell_integral, watson_integral
from .numkernel import (
    EvalResult,
    as_nome,
    eta_quotient_correction,
    jacobi_theta_sum,
    nome_pair,
    precise,
    qpoch_infinite,
    resolve_tol,
    to_complex,
    working_precision,
)

#: Below this magnitude of both sides the absolute residual decides pass/fail.
RESIDUAL_FLOOR = mpf("1e-30")
DEFAULT_TOLERANCE = 1e-10


@dataclass
class IdentityReport:
    identity_name: str
    params: Dict[str, mpc]
    lhs: mpc
    rhs: mpc
    abs_residual: mpf
    rel_residual: mpf
    tolerance: float
    passed: bool
    components: Dict[str, object] = field(default_factory=dict, repr=False)

    @property
    def component_errors(self) -> List[mpf]:
        return [c.err_estimate for c in self.components.values()]

    def sort_key(self):
        return (self.identity_name,) + tuple((float(v.real), float(v.imag)) for v in self.params.values())

    def to_dict(self) -> dict:
        def pair(z):
            z = mpc(z)
            return [float(z.real), float(z.imag)]

        return {
            "identity": self.identity_name,
            "params": {k: pair(v) for k, v in self.params.items()},
            "lhs": pair(self.lhs),
            "rhs": pair(self.rhs),
            "abs_residual": float(self.abs_residual),
            "rel_residual": float(self.rel_residual),
            "passed": bool(self.passed),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def make_report(name, params, lhs, rhs, tol, components=None) -> IdentityReport:
    lhs, rhs = to_complex(lhs), to_complex(rhs)
    absres = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel = absres / scale if scale > 0 else mpf(0)
    if scale > RESIDUAL_FLOOR:
        passed = rel <= tol
    else:
        passed = absres <= tol
    return IdentityReport(
        identity_name=name,
        params={k: to_complex(v) for k, v in params.items()},
        lhs=lhs,
        rhs=rhs,
        abs_residual=absres,
        rel_residual=rel,
        tolerance=float(tol),
        passed=bool(passed),
        components=dict(components or {}),
    )


# --------------------------------------------------------------------------
# Checkers
# --------------------------------------------------------------------------


@precise
def check_main_theorem(alpha, tol=DEFAULT_TOLERANCE, *, eval_tol=None) -> IdentityReport:
    """Mordell integral against its h1/h2 expression.

    The right side is
    ``-4 sqrt(pi/alpha) e^{-3alpha/4} h1(q) + (pi/alpha) e^{pi^2/(4alpha)} (h2(q1^2) - eta(q1^2)/2)``
    with ``eta`` the quotient ``(q;q)^5/(q^2;q^2)^4``.
    """
    nome = nome_pair(alpha)
    alpha = nome.alpha
    eval_tol = resolve_tol(eval_tol)
    lhs = mordell_integral(alpha, eval_tol)
    q1sq = nome.dual_power(2)
    h1 = mt.h1_series(nome.q, eval_tol)
    h2 = mt.h2_series(q1sq, eval_tol)
    eta = eta_quotient_correction(q1sq, eval_tol)
    pi = mp.pi
    c1 = -4 * mpmath.sqrt(pi / alpha) * nome.power(mpf(3) / 4)
    c2 = (pi / alpha) * nome.dual_power(-mpf(1) / 4)
    rhs = c1 * h1 + c2 * (h2 - eta * mpf("0.5"))
    comps = {"mordell_integral": lhs, "h1": h1, "h2": h2, "eta_correction": eta, "rhs": rhs}
    return make_report("main-theorem", {"alpha": alpha}, lhs.value, rhs.value, tol, comps)


@precise
def check_watson(alpha, tol=DEFAULT_TOLERANCE, *, eval_tol=None) -> IdentityReport:
    """Watson's transformation for omega and f.

    The expression
    ``-sqrt(4pi/(3alpha)) q^{2/3} omega(q) + (pi/(sqrt(3) alpha)) q1^{-1/12} f(q1^2)``
    equals the integral over the whole real line, i.e. twice
    :func:`~d5mock.mordell.watson_integral`; the left side reported here is
    that doubled value.
    """
    nome = nome_pair(alpha)
    alpha = nome.alpha
    eval_tol = resolve_tol(eval_tol)
    half = watson_integral(alpha, eval_tol)
    lhs = 2 * EvalResult(half.value, half.err_estimate, half.nodes_used)
    om = mt.omega_series(nome.q, eval_tol)
    f = mt.f_series(nome.dual_power(2), eval_tol)
    pi = mp.pi
    c1 = -mpmath.sqrt(4 * pi / (3 * alpha)) * nome.power(mpf(2) / 3)
    c2 = pi / (mpmath.sqrt(3) * alpha) * nome.dual_power(-mpf(1) / 12)
    rhs = c1 * om + c2 * f
    comps = {"watson_integral": half, "omega": om, "f": f, "rhs": rhs}
    return make_report("watson", {"alpha": alpha}, lhs.value, rhs.value, tol, comps)


@precise
def check_d5_decomposition(q, tol=DEFAULT_TOLERANCE, *, eval_tol=None) -> IdentityReport:
    """``D5(q) = 2 h1(q) - [(q^2;q^2)_inf / (q;q)_inf]^2 omega(q)``."""
    q = as_nome(q).q
    eval_tol = resolve_tol(eval_tol)
    d5 = mt.d5_series(q, eval_tol)
    h1 = mt.h1_series(q, eval_tol)
    om = mt.omega_series(q, eval_tol)
    ratio = qpoch_infinite(q * q, q * q, eval_tol / 10) / qpoch_infinite(q, q, eval_tol / 10)
    rhs = 2 * h1 - ratio * ratio * om
    comps = {"d5": d5, "h1": h1, "omega": om, "eta_ratio": ratio, "rhs": rhs}
    return make_report("d5-decomposition", {"q": q}, d5.value, rhs.value, tol, comps)


def check_d5_decomposition_exact(order: int = 50) -> IdentityReport:
    """Coefficientwise version of :func:`check_d5_decomposition` in exact integers.

    ``lhs`` carries the largest absolute coefficient discrepancy and ``rhs`` is
    zero, so the report passes only when every coefficient matches.
    """
    residual = qexpand.d5_decomposition_residual(order)
    worst = max((abs(c) for c in residual.coeffs), default=0)
    return make_report("d5-decomposition-exact", {"order": order}, worst, 0, 0)


@precise
def check_representations(tag, q, tol=DEFAULT_TOLERANCE, *, eval_tol=None) -> IdentityReport:
    """Evaluate every representation of ``tag`` and report the worst pair."""
    tag = mt.Tag(tag)
    q = as_nome(q).q
    eval_tol = resolve_tol(eval_tol)
    results = {fid.representation.value: fid.evaluate(q, eval_tol) for fid in mt.representations(tag)}
    names = list(results)
    best = (names[0], names[0])
    worst = mpf(-1)
    for i, a in enumerate(names):
        for b in names[i:]:
            d = abs(results[a].value - results[b].value)
            if d > worst:
                worst, best = d, (a, b)
    lhs, rhs = results[best[0]].value, results[best[1]].value
    return make_report(f"repr-{tag.value.lower().replace('_', '-')}", {"q": q}, lhs, rhs, tol, results)


@precise
def check_qhyper(a, b, c, z, q, tol=DEFAULT_TOLERANCE, *, eval_tol=None) -> IdentityReport:
    """Both sides of the q-hypergeometric transformation."""
    eval_tol = resolve_tol(eval_tol)
    lhs = mt.qhyper_lhs(a, b, c, z, q, eval_tol)
    rhs = mt.qhyper_rhs(a, b, c, z, q, eval_tol)
    params = {"a": a, "b": b, "c": c, "z": z, "q": as_nome(q).q}
    return make_report("qhyper", params, lhs.value, rhs.value, tol, {"lhs": lhs, "rhs": rhs})


@precise
def check_triple_product(z, q, tol=DEFAULT_TOLERANCE, *, eval_tol=None) -> IdentityReport:
    """``sum z^n q^{n^2} = (q^2;q^2)_inf (-zq;q^2)_inf (-q/z;q^2)_inf``."""
    z, q = to_complex(z), to_complex(q)
    eval_tol = resolve_tol(eval_tol)
    q2 = q * q
    lhs = jacobi_theta_sum(z, q, eval_tol)
    p1 = qpoch_infinite(q2, q2, eval_tol)
    p2 = qpoch_infinite(-z * q, q2, eval_tol)
    p3 = qpoch_infinite(-q / z, q2, eval_tol)
    rhs = p1 * p2 * p3
    comps = {"theta_sum": lhs, "p1": p1, "p2": p2, "p3": p3}
    return make_report("triple-product", {"z": z, "q": q}, lhs.value, rhs.value, tol, comps)


# --------------------------------------------------------------------------
# WRT invariant of the prism manifold M(2,2,2)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WrtEntry:
    N: int
    tau: mpc
    d5_star_value: mpc

    def definitional_residual(self) -> mpf:
        """``|(e^{2 pi i/N} - 1) tau - 2 (1 - 2 D5*(e^{pi i/N}))|``."""
        return abs((mpmath.expjpi(mpf(2) / self.N) - 1) * self.tau - 2 * (1 - 2 * self.d5_star_value))


@precise
def wrt_invariant(N: int) -> WrtEntry:
    """``tau_N(M(2,2,2)) = 2 (1 - 2 D5*(e^{pi i/N})) / (e^{2 pi i/N} - 1)``."""
    if N < 2:
        raise DomainError("N must be >= 2 (e^{2 pi i/N} - 1 vanishes at N = 1)")
    d = mt.d5_star_at_root(N)
    tau = 2 * (1 - 2 * d) / (mpmath.expjpi(mpf(2) / N) - 1)
    return WrtEntry(N, tau, d)


@precise
def wrt_table(N_min: int, N_max: int) -> List[WrtEntry]:
    if N_min < 2:
        raise DomainError("N_min must be >= 2 (e^{2 pi i/N} - 1 vanishes at N = 1)")
    if N_max < N_min:
        raise DomainError("N_max must be >= N_min")
    return [wrt_invariant(N) for N in range(N_min, N_max + 1)]


@precise
def check_wrt(N: int, tol=DEFAULT_TOLERANCE) -> IdentityReport:
    N = int(mpmath.nint(to_complex(N).real))
    e = wrt_invariant(N)
    lhs = (mpmath.expjpi(mpf(2) / N) - 1) * e.tau
    rhs = 2 * (1 - 2 * e.d5_star_value)
    return make_report("wrt", {"N": N}, lhs, rhs, tol)


# --------------------------------------------------------------------------
# Registry and runner
# --------------------------------------------------------------------------

# Grid points are plain Python numbers so that a grid means the same parameters
# at every working precision.
CANONICAL_ALPHAS = [0.5, 1.0, 2.0, math.pi, complex(1, 0.4)]
CANONICAL_QS = [round(0.1 * k, 1) for k in range(1, 9)] + [0.3 * cmath.exp(1j * math.pi / 6)]


def _qhyper_grid() -> List[dict]:
    grid = [{"a": q, "b": q, "c": 0, "z": q * q, "q": q} for q in (0.1, 0.2, 0.3, 0.4, 0.5)]
    rng = np.random.default_rng(20051024)

    def disc(radius):
        r = radius * np.sqrt(rng.uniform(0.05, 1.0))
        t = rng.uniform(0, 2 * np.pi)
        return complex(round(r * np.cos(t), 6), round(r * np.sin(t), 6))

    for _ in range(10):
        grid.append({"a": disc(0.9), "b": disc(0.9), "c": disc(0.9), "z": disc(0.5), "q": disc(0.5)})
    return grid


TRIPLE_Z = [0.5, -1.0, 1.0, complex(0, 1.2), 2.0]
TRIPLE_Q = [0.25, 0.3, 0.5, complex(0.4, 0.4), 0.8]


@dataclass(frozen=True)
class Identity:
    name: str
    params: Sequence[str]
    check: Callable[..., IdentityReport]
    grid: Callable[[], List[dict]]
    description: str


def _alpha_grid():
    return [{"alpha": a} for a in CANONICAL_ALPHAS]


def _q_grid():
    return [{"q": q} for q in CANONICAL_QS]


def _repr_identity(tag: mt.Tag) -> Identity:
    name = f"repr-{tag.value.lower().replace('_', '-')}"
    return Identity(
        name,
        ("q",),
        lambda q, tol=DEFAULT_TOLERANCE, **kw: check_representations(tag, q, tol, **kw),
        _q_grid,
        f"all representations of {tag.value} agree",
    )


REGISTRY: Dict[str, Identity] = {
    ident.name: ident
    for ident in [
        Identity("main-theorem", ("alpha",), check_main_theorem, _alpha_grid,
                 "Mordell integral equals its h1/h2 expression"),
        Identity("watson", ("alpha",), check_watson, _alpha_grid,
                 "Watson integral equals its omega/f expression"),
        Identity("d5-decomposition", ("q",), check_d5_decomposition, _q_grid,
                 "D5 = 2 h1 - [(q^2;q^2)/(q;q)]^2 omega"),
        Identity("d5-decomposition-exact", ("order",),
                 lambda order, tol=0, **kw: check_d5_decomposition_exact(int(mpmath.nint(to_complex(order).real))),
                 lambda: [{"order": 50}], "D5 decomposition coefficientwise in exact integers"),
        *[_repr_identity(t) for t in (mt.Tag.D5, mt.Tag.OMEGA, mt.Tag.F, mt.Tag.H1, mt.Tag.H2)],
        Identity("qhyper", ("a", "b", "c", "z", "q"), check_qhyper, _qhyper_grid,
                 "q-hypergeometric transformation"),
        Identity("triple-product", ("z", "q"), check_triple_product,
                 lambda: [{"z": z, "q": q} for z in TRIPLE_Z for q in TRIPLE_Q], "Jacobi triple product"),
        Identity("wrt", ("N",), check_wrt, lambda: [{"N": N} for N in range(2, 21)],
                 "WRT invariant of M(2,2,2) against D5* at roots of unity"),
    ]
}


def run_identity(name: str, params: dict, tol=DEFAULT_TOLERANCE, prec: Optional[int] = None) -> IdentityReport:
    try:
        ident = REGISTRY[name]
    except KeyError:
        raise DomainError(f"unknown identity {name!r}; choose from {sorted(REGISTRY)}") from None
    with working_precision(prec):
        args = {k: to_complex(v) for k, v in params.items()}
        return ident.check(**args, tol=tol)


def _run_job(job):
    name, params, tol, prec = job
    return run_identity(name, params, tol, prec)


def run_grid(
    names: Iterable[str],
    grid: Optional[List[dict]] = None,
    tol=DEFAULT_TOLERANCE,
    prec: Optional[int] = None,
    parallel: bool = False,
) -> List[IdentityReport]:
    """Run identities over their canonical grids (or ``grid``), sorted by name and parameters."""
    jobs = []
    for name in names:
        if name not in REGISTRY:
            raise DomainError(f"unknown identity {name!r}; choose from {sorted(REGISTRY)}")
        points = grid if grid is not None else REGISTRY[name].grid()
        jobs.extend((name, p, tol, prec) for p in points)
    if parallel:
        with ProcessPoolExecutor() as pool:
            reports = list(pool.map(_run_job, jobs))
    else:
        reports = [_run_job(j) for j in jobs]
    return sorted(reports, key=IdentityReport.sort_key)
