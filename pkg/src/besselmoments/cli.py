"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 divergent integral.
Settings resolve as flag > MOMENTS_* environment variable > --config file > default.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import eichler as E
from . import modular as M
from . import verify as V
from .moments import ikm, jym
from .specfun import DEFAULT_CTX, DivergenceError, DomainError, PrecisionContext

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DIVERGENT = 0, 1, 2, 3

REPORT_FIELDS = ("id", "description", "anchor", "lhs", "rhs", "abs_residual", "rel_residual", "tolerance", "pass", "seconds")


class UsageError(Exception):
    pass


@dataclass
class Config:
    digits: int = DEFAULT_CTX.digits
    qtrunc_override: int | None = None
    tolerance_overrides: dict = field(default_factory=dict)
    parallelism: int = 1
    output_format: str = "text"
    output_path: str | None = None

    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.digits)


def read_config_file(path: str | None) -> dict:
    """Flat key=value lines; '#' starts a comment."""
    if not path:
        return {}
    out = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    with fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _int(name, raw) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def resolve_config(digits=None, parallelism=None, fmt=None, output=None, config_path=None, env=None) -> Config:
    env = os.environ if env is None else env
    filecfg = read_config_file(config_path)
    cfg = Config()

    def pick(flag, env_key, file_key, default):
        if flag is not None:
            return flag
        if env_key and env.get(env_key):
            return env[env_key]
        if file_key in filecfg:
            return filecfg[file_key]
        return default

    cfg.digits = _int("digits", pick(digits, "MOMENTS_DIGITS", "digits", cfg.digits))
    cfg.parallelism = _int("parallelism", pick(parallelism, "MOMENTS_PARALLELISM", "parallelism", cfg.parallelism))
    cfg.output_format = str(pick(fmt, None, "format", cfg.output_format))
    cfg.output_path = pick(output, None, "output", None)
    if "qtrunc" in filecfg:
        cfg.qtrunc_override = _int("qtrunc", filecfg["qtrunc"])
    for k, v in filecfg.items():
        if k.startswith("tolerance."):
            cfg.tolerance_overrides[k[len("tolerance."):]] = mpmath.mpf(v)
    if cfg.digits < 16:
        raise UsageError("digits must be at least 16")
    if cfg.parallelism < 1:
        raise UsageError("parallelism must be positive")
    if cfg.output_format not in ("text", "json", "csv"):
        raise UsageError("format must be text, json or csv")
    return cfg


def _fmt(v, digits: int) -> str:
    return V._num_str(v, digits)


def parse_point(text: str):
    """'0.5+0.6i', '1/2+3/5i', '0.5+0.6j' or 'i' as a complex number."""
    s = text.replace(" ", "").replace("I", "i").replace("j", "i")
    try:
        if "i" not in s:
            f = Fraction(s)
            return mpmath.mpc(mpmath.mpf(f.numerator) / f.denominator)
        if not s.endswith("i"):
            raise ValueError
        body = s[:-1]
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        re_part, im_part = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
        im_part = {"": "1", "+": "1", "-": "-1"}.get(im_part, im_part)
        fr, fi = Fraction(re_part), Fraction(im_part)
        return mpmath.mpc(mpmath.mpf(fr.numerator) / fr.denominator, mpmath.mpf(fi.numerator) / fi.denominator)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read {text!r} as a complex number") from None


# ----------------------------------------------------------------------
# eval


def eval_ikm(args, cfg, out):
    out(_fmt(ikm(args.a, args.b, args.n, cfg.ctx()).value, cfg.digits))


def eval_jym(args, cfg, out):
    out(_fmt(jym(args.alpha, args.beta, args.nu, cfg.ctx(), tail=args.tail).value, cfg.digits))


def eval_lvalue(args, cfg, out):
    out(_fmt(E.lvalue(M.get_form(args.form), args.s, cfg.ctx(), route=args.route), cfg.digits))


def eval_eta_q(args, cfg, out):
    N = args.n if args.n is not None else (cfg.qtrunc_override or 20)
    if N < 1:
        raise UsageError("N must be positive")
    qs = M.quotient_qseries(M.get_form(args.recipe), N)
    for k, c in enumerate(qs.coeffs):
        out(f"{qs.lead + k}\t{c}")


def eval_form(args, cfg, out):
    ctx = cfg.ctx()
    z = parse_point(args.z)
    if z.imag <= 0:
        raise UsageError("z must lie in the upper half plane")
    v = M.theta(z, ctx) if args.name == "theta" else M.eval_form(M.get_form(args.name), z, ctx)
    out(_fmt(v, cfg.digits))


def eval_eichler(args, cfg, out):
    if args.spec_id is None:
        for k, (desc, _) in E.NAMED_EICHLER.items():
            out(f"{k}\t{desc}")
        return
    if args.spec_id not in E.NAMED_EICHLER:
        raise UsageError(f"unknown Eichler integral {args.spec_id!r}; known: {', '.join(E.NAMED_EICHLER)}")
    out(_fmt(E.eichler(E.NAMED_EICHLER[args.spec_id][1], cfg.ctx()), cfg.digits))


def eval_table1(args, cfg, out):
    ctx = cfg.ctx()
    num = M.cm_derivative_table(None, 4, ctx)
    closed = M.table1_closed_forms(ctx)
    tol = mpmath.mpf(10) ** (-cfg.digits + 10)
    bad = 0
    with mpmath.workprec(ctx.work_bits):
        for key in sorted(closed):
            a, b = num[key], closed[key]
            res = abs(a - b)
            ok = res <= tol * max(1, abs(b))
            bad += not ok
            out(f"{key[0]}^({key[1]})\t{_fmt(b, 25)}\tresidual {_fmt(res, 3)}\t{'OK' if ok else 'MISMATCH'}")
    return EXIT_FAIL if bad else EXIT_OK


# ----------------------------------------------------------------------
# verify


def render(results: list, fmt: str) -> str:
    rows = [r.to_dict() for r in results]
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=REPORT_FIELDS + ("error",), extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        return buf.getvalue()
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f"  {r.error}" if r.error else ""
        lines.append(f"{status}  {r.id:<32} residual {_fmt(r.abs_residual, 3):<10} tol {_fmt(r.tolerance, 2):<8} {r.seconds:7.1f}s{extra}")
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} passed")
    return "\n".join(lines) + "\n"


def cmd_verify(args, cfg, out):
    if not V.select(args.suite):
        print(f"warning: no identities match suite {args.suite!r}", file=sys.stderr)
    results = V.run_suite(args.suite, cfg.ctx(), cfg.parallelism, cfg.tolerance_overrides)
    text = render(results, cfg.output_format)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out(text.rstrip("\n"))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None, help="significant digits (default 40)")
    common.add_argument("--config", dest="config_path", default=None, help="key=value settings file")

    p = argparse.ArgumentParser(prog="besselmoments", description="Bessel moments, modular forms and Eichler integrals at high precision.")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a single quantity")
    evs = ev.add_subparsers(dest="what", required=True)

    q = evs.add_parser("ikm", parents=[common], help="int I0^a K0^b t^n dt")
    for a in ("a", "b", "n"):
        q.add_argument(a, type=int)
    q.set_defaults(run=eval_ikm)

    q = evs.add_parser("jym", parents=[common], help="int J0^alpha Y0^beta t^nu dt")
    for a in ("alpha", "beta", "nu"):
        q.add_argument(a, type=int)
    q.add_argument("--tail", choices=("asymptotic", "wynn"), default="asymptotic")
    q.set_defaults(run=eval_jym)

    q = evs.add_parser("lvalue", parents=[common], help="critical L-value of f46 or f66")
    q.add_argument("form")
    q.add_argument("s", type=int)
    q.add_argument("--route", choices=("termwise", "quadrature", "explicit"), default="termwise")
    q.set_defaults(run=eval_lvalue)

    q = evs.add_parser("eta-q", parents=[common], help="exact q-expansion of a named eta quotient")
    q.add_argument("recipe")
    q.add_argument("n", type=int, nargs="?", default=None)
    q.set_defaults(run=eval_eta_q)

    q = evs.add_parser("form", parents=[common], help="value of a named modular form at z")
    q.add_argument("name")
    q.add_argument("z")
    q.set_defaults(run=eval_form)

    q = evs.add_parser("eichler", parents=[common], help="a named Eichler integral (no id lists them)")
    q.add_argument("spec_id", nargs="?", default=None)
    q.set_defaults(run=eval_eichler)

    q = evs.add_parser("table1", parents=[common], help="X63, Z63 derivatives at the CM point against closed forms")
    q.set_defaults(run=eval_table1)

    q = sub.add_parser("verify", parents=[common], help="run identity checks and write a report")
    q.add_argument("--suite", default="all", help="S, B, L, H, E, W, a single id, or all")
    q.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default=None)
    q.add_argument("-o", "--output", default=None)
    q.add_argument("--parallelism", type=int, default=None)
    q.set_defaults(run=cmd_verify)
    return p


def main(argv=None, out=print) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(
            args.digits,
            getattr(args, "parallelism", None),
            getattr(args, "fmt", None),
            getattr(args, "output", None),
            args.config_path,
        )
        with mpmath.workdps(cfg.digits + 10):
            code = args.run(args, cfg, out)
        return EXIT_OK if code is None else code
    except DivergenceError as exc:
        print(f"divergent: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except (UsageError, DomainError, E.ContourError, E.SplitError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
