"""Command-line front end.

Exit codes: 0 success, 1 an identity failed to verify, 2 invalid input,
3 enumeration bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from .errors import EnumerationBoundExceeded, InvalidInput, MotiveError
from .fields import SIGN, EtaleAlgebra, extend, make_field
from .forms import HermitianDiag, QuadraticForm, parse_coeffs
from .motives import derive
from .points import (
    CountReport,
    ModuleSpec,
    count_hermitian_variety,
    count_proj_space,
    count_quadric,
    count_S,
    count_weil_proj,
    check_bound,
    default_bound,
    proj_size,
    timed,
)
from .realize import RealizationCtx, a0, plan_sweep, sweep, verify_identity

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3

TSV_COLUMNS = ["identity", "p", "m", "k", "b", "coeffs", "n", "lhs", "rhs", "verdict", "elapsed_ms"]


@dataclass
class JobConfig:
    command: str | None = None
    target: str | None = None
    p: int | None = None
    m: int = 1
    k: int = 1
    b: str | None = None
    coeffs: str | None = None
    rank: int | None = None
    n: int | None = None
    dim: int | None = None
    format: str | None = None
    mode: str = "finite"
    quadratic: bool = False
    seed: int = 0
    bound: int | None = None
    jobs: int | None = None
    ps: str | None = None
    ms: str | None = None
    ns: str | None = None
    bs: str | None = None
    ks: str | None = None
    identities: str | None = None

    def to_kv(self) -> str:
        return "".join(f"{key}={value}\n" for key, value in asdict(self).items() if value is not None)

    @classmethod
    def from_kv(cls, text: str) -> "JobConfig":
        types = {f.name: f.type for f in fields(cls)}
        kw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidInput(f"config line {lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in types:
                raise InvalidInput(f"config line {lineno}: unknown key {key!r}")
            if "int" in types[key]:
                kw[key] = int(value)
            elif "bool" in types[key]:
                kw[key] = value.lower() in ("1", "true", "yes")
            else:
                kw[key] = value
        return cls(**kw)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--format", choices=["json", "tsv"])
    common.add_argument("--bound", type=int, help="enumeration bound (env UNITARY_MOTIVES_BOUND)")
    common.add_argument("--jobs", type=int)
    common.add_argument("--seed", type=int)

    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("--p", type=int)
    field.add_argument("--m", type=int)
    field.add_argument("--k", type=int)
    field.add_argument("--b")
    field.add_argument("--coeffs")
    field.add_argument("--rank", type=int)

    parser = argparse.ArgumentParser(prog="unitary-motives", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common, field], help="count points of a variety")
    c.add_argument("target", choices=["proj", "S", "weilproj", "quadric", "hermitian"])
    c.add_argument("--dim", type=int, help="F-dimension for `count proj`")

    v = sub.add_parser("verify", parents=[common, field], help="verify one identity by counting")
    v.add_argument("target", choices=["main", "proj"])

    s = sub.add_parser("sweep", parents=[common], help="verify identities over a parameter grid")
    s.add_argument("--p", dest="ps")
    s.add_argument("--m", dest="ms")
    s.add_argument("--n", dest="ns")
    s.add_argument("--b", dest="bs")
    s.add_argument("--k", dest="ks")
    s.add_argument("--identity", dest="identities")

    d = sub.add_parser("derive", parents=[common], help="print a symbolic identity")
    d.add_argument("target", choices=["main", "proj"])
    d.add_argument("--n", type=int, required=False)

    a = sub.add_parser("a0", parents=[common, field], help="A_0 of V(h): Z or 2Z")
    a.add_argument("--mode", choices=["finite", "sign"])
    a.add_argument("--quadratic", action="store_true", default=None, help="treat --coeffs as a quadratic form")
    return parser


def parse_config(argv: list[str]) -> JobConfig:
    args = _build_parser().parse_args(argv)
    cfg = JobConfig()
    if args.config:
        with open(args.config) as fh:
            cfg = JobConfig.from_kv(fh.read())
    for f in fields(JobConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, value)
    cfg.command = args.command
    if cfg.format is None:
        cfg.format = "tsv" if cfg.command == "sweep" else "json"
    return cfg


def _emit(obj: dict, out) -> None:
    out.write(json.dumps(obj, sort_keys=False) + "\n")


def _coeff_list(cfg: JobConfig, F, rank: int | None = None) -> tuple:
    if cfg.coeffs is None:
        if rank is None:
            raise InvalidInput("--coeffs (or --rank) is required")
        return (1,) * rank
    coeffs = parse_coeffs(cfg.coeffs, F)
    if rank is not None and len(coeffs) != rank:
        raise InvalidInput(f"--rank {rank} disagrees with {len(coeffs)} coefficients")
    return coeffs


def _need(value, flag: str):
    if value is None:
        raise InvalidInput(f"{flag} is required")
    return value


def cmd_count(cfg: JobConfig, out) -> int:
    F = make_field(_need(cfg.p, "--p"), cfg.m)
    ext = extend(F, cfg.k)
    params = {"p": F.p, "m": F.m, "k": cfg.k}
    t = cfg.target
    if t == "quadric":
        q = QuadraticForm(F, parse_coeffs(_need(cfg.coeffs, "--coeffs"), F))
        params["coeffs"] = [int(c) for c in q.coeffs]
        value, ms = timed(count_quadric, q, ext, bound=cfg.bound, jobs=cfg.jobs)
    elif t == "proj":
        dim = cfg.dim if cfg.dim is not None else 2 * _need(cfg.rank, "--rank or --dim")
        params["dim"] = dim
        check_bound(proj_size(dim, ext.Q), cfg.bound)
        value, ms = timed(count_proj_space, dim, F, ext)
    else:
        L = EtaleAlgebra(F, F.coerce(int(_need(cfg.b, "--b"))))
        params["b"] = int(L.b)
        if t == "hermitian":
            h = HermitianDiag(L, _coeff_list(cfg, F, cfg.rank))
            params["coeffs"] = [int(c) for c in h.coeffs]
            params["n"] = h.n
            value, ms = timed(count_hermitian_variety, h, ext, bound=cfg.bound, jobs=cfg.jobs)
        else:
            rank = cfg.rank if cfg.rank is not None else len(_coeff_list(cfg, F))
            N = ModuleSpec(L, rank)
            params["n"] = rank
            fn = count_S if t == "S" else count_weil_proj
            value, ms = timed(fn, N, ext, bound=cfg.bound, jobs=cfg.jobs)
    report = CountReport(t, params, value, ms)
    if cfg.format == "tsv":
        out.write("variety\tcount\n" f"{t}\t{value}\n")
    else:
        _emit(report.to_json(), out)
    return EXIT_OK


def cmd_verify(cfg: JobConfig, out) -> int:
    F = make_field(_need(cfg.p, "--p"), cfg.m)
    b = F.coerce(int(_need(cfg.b, "--b")))
    coeffs = _coeff_list(cfg, F, cfg.rank)
    ctx = RealizationCtx(F, b, coeffs, cfg.k, bound=cfg.bound, jobs=cfg.jobs)
    report = verify_identity(derive(cfg.target, ctx.n), ctx)
    _write_reports([report], cfg, out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _int_list(text: str | None, flag: str) -> list[int]:
    try:
        return [int(t) for t in _need(text, flag).split(",") if t.strip()]
    except ValueError:
        raise InvalidInput(f"cannot parse {flag} {text!r}") from None


def _write_reports(reports, cfg: JobConfig, out) -> None:
    if cfg.format == "tsv":
        out.write("\t".join(TSV_COLUMNS) + "\n")
        for r in reports:
            row = r.to_json()
            flat = {**row["params"], **row}
            flat["coeffs"] = ",".join(str(c) for c in row["params"]["coeffs"])
            out.write("\t".join(str(flat[c]) for c in TSV_COLUMNS) + "\n")
    else:
        for r in reports:
            _emit(r.to_json(), out)


def cmd_sweep(cfg: JobConfig, out) -> int:
    grid = {
        "p": _int_list(cfg.ps, "--p"),
        "m": _int_list(cfg.ms or "1", "--m"),
        "n": _int_list(cfg.ns, "--n"),
        "b": [t.strip() for t in (cfg.bs or "square,nonsquare").split(",") if t.strip()],
        "k": _int_list(cfg.ks or "1", "--k"),
        "identity": [t.strip() for t in (cfg.identities or "main,proj").split(",") if t.strip()],
    }
    for ident in grid["identity"]:
        if ident not in ("main", "proj"):
            raise InvalidInput(f"unknown identity {ident!r}")
    for p in grid["p"]:
        for m in grid["m"]:
            make_field(p, m)
    cells, skipped = plan_sweep(grid, cfg.seed, cfg.bound)
    for c in skipped:
        print(f"skipped (bound): {c}", file=sys.stderr)
    reports = sweep(grid, cfg.seed, jobs=cfg.jobs, bound=cfg.bound)
    _write_reports(reports, cfg, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_derive(cfg: JobConfig, out) -> int:
    n = _need(cfg.n, "--n")
    ident = derive(cfg.target, n)
    out.write(ident.pretty() + "\n")
    out.write(ident.canonical() + "\n")
    return EXIT_OK


def cmd_a0(cfg: JobConfig, out) -> int:
    coeffs_text = _need(cfg.coeffs, "--coeffs")
    if cfg.mode == "sign":
        if cfg.p is not None or cfg.k != 1 or cfg.m != 1:
            raise InvalidInput("sign mode takes no finite-field parameters")
        coeffs = parse_coeffs(coeffs_text, SIGN)
        if cfg.quadratic:
            form = QuadraticForm(SIGN, coeffs)
        else:
            form = HermitianDiag(EtaleAlgebra(SIGN, Fraction(_need(cfg.b, "--b"))), coeffs)
        result = a0(form, SIGN)
    else:
        if any("/" in t for t in coeffs_text.split(",")) or (cfg.b is not None and "/" in cfg.b):
            raise InvalidInput("finite mode takes integer residues, not fractions")
        F = make_field(_need(cfg.p, "--p"), cfg.m)
        coeffs = parse_coeffs(coeffs_text, F)
        if cfg.quadratic:
            form = QuadraticForm(F, coeffs)
        else:
            form = HermitianDiag(EtaleAlgebra(F, F.coerce(int(_need(cfg.b, "--b")))), coeffs)
        result = a0(form, extend(F, cfg.k), bound=cfg.bound)
    _emit(result.to_json(), out)
    return EXIT_OK


COMMANDS = {"count": cmd_count, "verify": cmd_verify, "sweep": cmd_sweep, "derive": cmd_derive, "a0": cmd_a0}


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    except (InvalidInput, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.jobs is None:
        cfg.jobs = os.cpu_count() or 1
    if cfg.bound is None:
        cfg.bound = default_bound()
    try:
        return COMMANDS[cfg.command](cfg, out)
    except EnumerationBoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (InvalidInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MotiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
