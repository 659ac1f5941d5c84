"""Command-line front end.

Exit codes: 0 success, 1 at least one identity failed, 2 usage or domain error.
Results go to stdout and diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from typing import List, Optional

import mpmath
from mpmath import mpc

from . import mocktheta as mt
from . import mordell, qexpand
from .errors import D5MockError, DomainError
from .numkernel import DEFAULT_PREC, Nome, nome_pair, working_precision
from .verify import REGISTRY, run_grid, wrt_table


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_PREC
    tol: float = 1e-10
    order: int = qexpand.DEFAULT_ORDER
    output_format: str = "text"
    parallel: bool = False

    def __post_init__(self):
        if self.precision_bits < 53:
            raise DomainError("--precision must be >= 53")
        if not self.tol > 0:
            raise DomainError("--tol must be > 0")
        if self.order < 1:
            raise DomainError("--order must be >= 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(2)


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}")
    try:
        re = float(parts[0])
        im = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}") from None
    return complex(re, im)


def _fmt(x, prec: int) -> str:
    digits = max(15, int(prec * 0.30103) - 2)
    return mpmath.nstr(x, digits)


def _chopped(z: mpc, prec: int) -> mpc:
    return mpmath.chop(z, tol=mpmath.mpf(2) ** (8 - prec))


def _short(z: mpc) -> str:
    if z.imag == 0:
        return mpmath.nstr(z.real, 6)
    return mpmath.nstr(z, 6)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10, help="tolerance (default 1e-10)")
    common.add_argument("--precision", type=int, default=DEFAULT_PREC, help="working precision in bits")
    common.add_argument("--order", type=int, default=qexpand.DEFAULT_ORDER, help="series truncation order")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--parallel", action="store_true", help="evaluate grid points in worker processes")

    p = _Parser(prog="d5mock", description="Mock theta function D5 and its transformation formulas.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", parents=[common], help="evaluate a function at a point")
    ev.add_argument("function", choices=sorted(mt.TAG_NAMES))
    ev.add_argument("--repr", default="primary", choices=sorted(mt.REPR_NAMES))
    point = ev.add_mutually_exclusive_group(required=True)
    point.add_argument("--q", type=_complex_arg, help="nome RE[,IM] with |q| < 1")
    point.add_argument("--alpha", type=_complex_arg, help="alpha RE[,IM] with Re > 0; q = exp(-alpha)")

    ve = sub.add_parser("verify", parents=[common], help="check identities")
    ve.add_argument("identity", help="identity name or 'all'")
    ve.add_argument("--q", type=_complex_arg, help="run at this q instead of the canonical grid")
    ve.add_argument("--alpha", type=_complex_arg, help="run at this alpha instead of the canonical grid")

    co = sub.add_parser("coeffs", parents=[common], help="exact q-expansion coefficients")
    co.add_argument("function", choices=sorted(qexpand.EXPANSIONS))

    it = sub.add_parser("integral", parents=[common], help="evaluate the Mordell or Watson integral")
    it.add_argument("kind", choices=sorted(INTEGRALS))
    it.add_argument("--alpha", type=_complex_arg, required=True, help="alpha RE[,IM] with Re > 0")

    wr = sub.add_parser("wrt", parents=[common], help="WRT invariant table for M(2,2,2)")
    wr.add_argument("n_min", type=int)
    wr.add_argument("n_max", type=int)
    return p


def _config(args) -> RunConfig:
    return RunConfig(args.precision, args.tol, args.order, args.format or "text", args.parallel)


def cmd_eval(args, cfg: RunConfig) -> int:
    fid = mt.FunctionId.parse(args.function, args.repr)
    with working_precision(cfg.precision_bits):
        if args.alpha is not None:
            nome = nome_pair(args.alpha)
        else:
            nome = Nome(mpc(args.q))
        res = fid.evaluate(nome, cfg.tol)
        if cfg.output_format == "json":
            print(json.dumps({
                "function": args.function,
                "representation": fid.representation.value,
                "q": [float(nome.q.real), float(nome.q.imag)],
                "value": [float(res.value.real), float(res.value.imag)],
                "err_estimate": float(res.err_estimate),
                "terms_used": res.terms_used,
                "rigorous": res.rigorous,
            }))
        else:
            print(f"value        {_fmt(_chopped(res.value, cfg.precision_bits), cfg.precision_bits)}")
            print(f"err_estimate {mpmath.nstr(res.err_estimate, 3)}")
            print(f"terms_used   {res.terms_used}")
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.identity == "all":
        names = sorted(REGISTRY)
    elif args.identity in REGISTRY:
        names = [args.identity]
    else:
        raise DomainError(f"unknown identity {args.identity!r}; choose from all, {', '.join(sorted(REGISTRY))}")
    grid = None
    if args.q is not None or args.alpha is not None:
        for n in names:
            wanted = REGISTRY[n].params
            if (args.q is not None and tuple(wanted) != ("q",)) or (args.alpha is not None and tuple(wanted) != ("alpha",)):
                raise DomainError(f"identity {n} does not take the given point")
        grid = [{"q": args.q}] if args.q is not None else [{"alpha": args.alpha}]
    reports = run_grid(names, grid, cfg.tol, cfg.precision_bits, cfg.parallel)
    fmt = cfg.output_format
    if fmt == "json":
        print(json.dumps([r.to_dict() for r in reports], indent=1))
    elif fmt == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["identity", "params", "abs_residual", "rel_residual", "passed"])
        for r in reports:
            d = r.to_dict()
            w.writerow([d["identity"], json.dumps(d["params"]), repr(d["abs_residual"]), repr(d["rel_residual"]), d["passed"]])
    else:
        for r in reports:
            params = " ".join(f"{k}={_short(v)}" for k, v in r.params.items())
            status = "PASS" if r.passed else "FAIL"
            print(f"{status} {r.identity_name:24s} {params:40s} rel={mpmath.nstr(r.rel_residual, 3)}")
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} passed", file=sys.stderr)
    return 1 if failed else 0


def cmd_coeffs(args, cfg: RunConfig) -> int:
    if cfg.order > qexpand.MAX_ORDER:
        raise DomainError(f"--order must be <= {qexpand.MAX_ORDER}")
    s = qexpand.expansion(args.function, cfg.order)
    if cfg.output_format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["exponent", "coefficient"])
        w.writerows(enumerate(s.coeffs))
    else:
        print(json.dumps(list(s.coeffs)))
    return 0


INTEGRALS = {"mordell": mordell.mordell_integral, "watson": mordell.watson_integral}


def cmd_integral(args, cfg: RunConfig) -> int:
    prec = cfg.precision_bits
    with working_precision(prec):
        res = INTEGRALS[args.kind](args.alpha, cfg.tol)
        if cfg.output_format == "json":
            print(json.dumps({
                "integral": args.kind,
                "alpha": [args.alpha.real, args.alpha.imag],
                "value": [float(res.value.real), float(res.value.imag)],
                "err_estimate": float(res.err_estimate),
                "nodes_used": res.nodes_used,
                "truncation_point": float(res.truncation_point),
            }))
        else:
            print(f"value        {_fmt(_chopped(res.value, prec), prec)}")
            print(f"err_estimate {mpmath.nstr(res.err_estimate, 3)}")
            print(f"nodes_used   {res.nodes_used}")
    return 0


def cmd_wrt(args, cfg: RunConfig) -> int:
    prec = cfg.precision_bits
    with working_precision(prec):
        rows = [(e.N, _chopped(e.tau, prec)) for e in wrt_table(args.n_min, args.n_max)]
        if cfg.output_format == "json":
            print(json.dumps([{"N": n, "tau": [_fmt(t.real, prec), _fmt(t.imag, prec)]} for n, t in rows]))
        else:
            w = csv.writer(sys.stdout, lineterminator="\n")
            w.writerow(["N", "re_tau", "im_tau"])
            for n, t in rows:
                w.writerow([n, _fmt(t.real, prec), _fmt(t.imag, prec)])
    return 0


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "coeffs": cmd_coeffs, "integral": cmd_integral, "wrt": cmd_wrt}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except D5MockError as exc:
        print(f"d5mock {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
