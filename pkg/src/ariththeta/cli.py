"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 bad input or config, 3 enumeration bound exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

import mpmath

from . import archkernel as ak
from .cmfield import NotFundamental, class_group, splitting_type, vp
from .hlattice import HermitianLattice, NotPositiveDefinite, PrecisionExceeded, SingularGram
from .lwhittaker import (LocalSpace1, NonconvergentTail, UnsupportedTwist, whittaker_deriv0,
                         whittaker_shell_series, whittaker_value0)
from .series import (SUITES, GlobalSpaceData, UnknownSuite, eisenstein_deriv_finite, eisenstein_incoherent_value,
                     eisenstein_qexp, gross_multiplicity, verify_suite)
from .symnum import SymNumber

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    d: int = -4
    n: int = 1
    prec: int = 10
    precision_digits: int = 32
    cache_dir: str | None = None
    suites: list = field(default_factory=list)
    output: str | None = None

    def validate(self) -> "RunConfig":
        if self.prec < 0 or self.prec > 200:
            raise ConfigError("prec must lie in [0, 200]")
        if not 32 <= self.precision_digits <= 256:
            raise ConfigError("precision_digits must lie in [32, 256]")
        if self.n < 0 or self.n > 4:
            raise ConfigError("n must lie in [0, 4]")
        for s in self.suites:
            if s not in SUITES:
                raise ConfigError(f"unknown suite {s!r}")
        return self


def read_config_file(path) -> dict:
    """key = value lines; '#' starts a comment."""
    out = {}
    for ln, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key = value")
        k, v = (x.strip() for x in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def build_config(args) -> RunConfig:
    base = read_config_file(args.config) if getattr(args, "config", None) else {}
    names = {f.name for f in fields(RunConfig)}
    unknown = set(base) - names
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig()
    for k, v in base.items():
        if k == "suites":
            cfg.suites = [s.strip() for s in v.split(",") if s.strip()]
        elif k in ("cache_dir", "output"):
            setattr(cfg, k, v)
        else:
            try:
                setattr(cfg, k, int(v))
            except ValueError:
                raise ConfigError(f"{k} must be an integer")
    # flags win over the file
    for k in ("d", "n", "prec", "output", "cache_dir"):
        v = getattr(args, k, None)
        if v is not None:
            setattr(cfg, k, v)
    if getattr(args, "digits", None) is not None:
        cfg.precision_digits = args.digits
    if getattr(args, "suite", None):
        cfg.suites = list(args.suite)
    return cfg.validate()


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output and cfg.output != "-":
        Path(cfg.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1)


def _sym_json(x: SymNumber, cfg: RunConfig) -> dict:
    return x.to_json(digits=cfg.precision_digits)


# ---------------------------------------------------------------- commands

def cmd_theta(args, cfg: RunConfig) -> int:
    try:
        gram = json.loads(args.gram)
        L = HermitianLattice.from_entries(cfg.d, gram)
        L.require_definite()
    except (ValueError, TypeError, SingularGram, NotPositiveDefinite) as e:
        print(f"error: bad lattice: {e}", file=sys.stderr)
        return EXIT_INPUT
    from .hlattice import theta_qexp
    try:
        q = theta_qexp(L, None, cfg.prec)
    except PrecisionExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BOUND
    _emit(q.dumps(cfg.precision_digits), cfg)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    suites = cfg.suites or sorted(SUITES)
    reports = []
    for s in suites:
        opts = {"prec": min(cfg.prec, 30)} if args.prec is not None else {}
        if args.d is not None:
            opts["d"] = cfg.d
        reports.append(verify_suite(s, opts))
    ok = all(r["status"] == "pass" for r in reports)
    _emit(_dumps({"status": "pass" if ok else "fail", "reports": reports}), cfg)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_local_whittaker(args, cfg: RunConfig) -> int:
    try:
        t = Fraction(args.t)
        u = Fraction(args.u)
        S = LocalSpace1(args.p, cfg.d, u)
        kind = splitting_type(cfg.d, args.p).kind
        W = whittaker_shell_series(S, t)
        v0 = whittaker_value0(S, t)
        d0 = whittaker_deriv0(S, t)
    except (ValueError, UnsupportedTwist, NonconvergentTail) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    out = {
        "p": args.p, "d": cfg.d, "kind": kind, "u": str(u), "t": str(t),
        "value0": str(v0), "deriv0": _sym_json(d0, cfg),
        "series": {"num": {str(e): str(c) for e, c in sorted(W.num.items())},
                   "den": {str(e): str(c) for e, c in sorted(W.den.items())}},
    }
    v = vp(t, args.p) if t != 0 else None
    if v is not None and kind != "split" and v >= 0:
        mult = gross_multiplicity(kind, v)
        out["mu"] = str(d0.logs.get(args.p, Fraction(0)) / mult)
    _emit(_dumps(out), cfg)
    return EXIT_OK


def cmd_eisenstein(args, cfg: RunConfig) -> int:
    try:
        D = GlobalSpaceData(cfg.d, 0, HermitianLattice.diagonal(cfg.d, [1]),
                            incoherent=args.incoherent or args.derivative, flip_place=args.flip)
        if args.derivative:
            q = eisenstein_deriv_finite(D, cfg.prec)
        elif args.incoherent:
            q = eisenstein_incoherent_value(D, cfg.prec)
        else:
            q = eisenstein_qexp(D, cfg.prec)
    except (ValueError, NotFundamental) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    _emit(q.dumps(cfg.precision_digits), cfg)
    return EXIT_OK


def cmd_green(args, cfg: RunConfig) -> int:
    digits = cfg.precision_digits
    with mpmath.workdps(digits):
        try:
            t = mpmath.mpf(args.t)
            s = mpmath.mpf(args.s)
            if t <= 1:
                raise ak.DomainError("t must exceed 1")
            q = ak.Q_s(t, s, cfg.n, digits)
            p = ak.P_s(t - 1, s, cfg.n, digits)
        except (ValueError, ak.DomainError) as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT
        out = {"n": cfg.n, "s": args.s, "t": args.t,
               "Q": mpmath.nstr(q, digits), "P": mpmath.nstr(p, digits)}
    _emit(_dumps(out), cfg)
    return EXIT_OK


def cmd_bconst(args, cfg: RunConfig) -> int:
    n = cfg.n
    if n < 1:
        print("error: n >= 1", file=sys.stderr)
        return EXIT_INPUT
    b = ak.b_constant(n)
    if args.json:
        cf = ak.b_paper_closed_form(n)
        out = {"n": n, "b": _sym_json(b, cfg), "text": str(b), "closed_form": str(cf),
               "closed_form_agrees": b == cf}
        _emit(_dumps(out), cfg)
    else:
        _emit(str(b), cfg)
    return EXIT_OK


COMMANDS = {
    "theta": cmd_theta, "verify": cmd_verify, "local-whittaker": cmd_local_whittaker,
    "eisenstein": cmd_eisenstein, "green": cmd_green, "bconst": cmd_bconst,
}


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ariththeta")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file; flags override it")
    common.add_argument("--d", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--prec", type=int)
    common.add_argument("--digits", type=int)
    common.add_argument("--cache-dir", dest="cache_dir")
    common.add_argument("--output", "-o")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theta", parents=[common], help="theta series of a hermitian lattice")
    p.add_argument("--gram", default="[[1]]", help="JSON gram matrix; entries rational or [x, y] = x + y sqrt(d)")

    p = sub.add_parser("verify", parents=[common], help="run identity suites")
    p.add_argument("--suite", action="append")

    p = sub.add_parser("local-whittaker", parents=[common], help="local Whittaker function at t")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--u", default="1", help="scaling of the local form u Nm")

    p = sub.add_parser("eisenstein", parents=[common], help="rank-1 Eisenstein coefficients")
    p.add_argument("--incoherent", action="store_true")
    p.add_argument("--derivative", action="store_true")
    p.add_argument("--flip", type=int, help="single flipped prime for the incoherent collection")

    p = sub.add_parser("green", parents=[common], help="Green kernels Q_s(t) and P_s(t - 1)")
    p.add_argument("--s", default="0")
    p.add_argument("--t", required=True)

    p = sub.add_parser("bconst", parents=[common], help="archimedean constant b(n)")
    p.add_argument("--json", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        cfg = build_config(args)
        class_group(cfg.d)
    except (ConfigError, NotFundamental, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.cache_dir:
        os.environ["ARITHTHETA_CACHE"] = cfg.cache_dir
    try:
        return COMMANDS[args.command](args, cfg)
    except UnknownSuite as e:
        print(f"error: unknown suite {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
