"""Command-line front end.

    hardy-bench verify --theorem LH2 --p 2 --Q 4 --R 1 --profile polybump:0.2,0.8,3
    hardy-bench remainder --p 2 --Q 2 --R 1 --profile bump:0.3,0.9
    hardy-bench sweep --theorem LH2 --p 3 --family logpower --eps 0.1,0.03,0.01,0.003 --format csv
    hardy-bench verify --euclidean --n 2 --theorem CKN --function bump-angular --mc-samples 1e7 --seed 42
    hardy-bench suite --jobs 4 --output report.json

Exit status: 0 all checks pass, 1 some check fails, 2 invalid configuration,
3 numerical failure (a partial report is still written).
"""
import argparse
import sys
import time
from dataclasses import fields, replace
from typing import Dict, List, Optional, Sequence, Tuple

from . import cartesian, report, sharpness, suite
from .errors import ConvergenceError, HardyBenchError
from .group import group_with_dimension, make_group, parse_quasi_norm, validate_quasi_norm
from .inequalities import THEOREMS, InequalityCase, remainder_identity, verify
from .profiles import parse_profile
from .quadrature import QuadratureSpec
from .report import ReportRecord, RunConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

# config-file keys that differ from RunConfig field names
_KEY_ALIASES = {"theorem": "theorem_id", "quasi-norm": "quasi_norm", "rel-tol": "rel_tol", "abs-tol": "abs_tol",
                "tol-margin": "tol_margin", "mc-samples": "mc_samples"}


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ parsing

def _floats(text) -> Tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    text = str(text).strip().strip("[]()")
    return tuple(float(v) for v in text.split(",") if v.strip())


_CONVERT = {"p": float, "Q": float, "R": float, "q": float, "rel_tol": float, "abs_tol": float,
            "tol_margin": float, "jobs": int, "n": int, "mc_samples": lambda v: int(float(v)),
            "seed": int, "weights": _floats, "eps": _floats,
            "euclidean": lambda v: str(v).strip().lower() in ("1", "true", "yes", "on")}


def _coerce(key: str, value):
    if isinstance(value, str):
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
            value = value[1:-1]
    try:
        return _CONVERT.get(key, str)(value)
    except (TypeError, ValueError):
        raise UsageError(f"bad value for {key}: {value!r}") from None


def read_config_file(path: str) -> Dict[str, object]:
    """Flat ``key = value`` file; '#' starts a comment."""
    names = {f.name for f in fields(RunConfig)}
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = _KEY_ALIASES.get(key.strip(), key.strip())
        if not sep or key not in names or key == "command":
            raise UsageError(f"{path}:{num}: expected 'key = value' with a known key, got {line!r}")
        out[key] = _coerce(key, value)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--config", help="key = value file; explicit flags override it")
    g.add_argument("--rel-tol", dest="rel_tol", type=float)
    g.add_argument("--abs-tol", dest="abs_tol", type=float)
    g.add_argument("--tol-margin", dest="tol_margin", type=float)
    g.add_argument("--jobs", type=int, help="worker processes (default $HARDY_BENCH_JOBS or 1)")
    g.add_argument("--output", help="output file (default stdout)")
    g.add_argument("--format", choices=report.FORMATS)
    g.add_argument("--timing", action="store_true", help="record wall time (reports are then not reproducible)")

    radial = argparse.ArgumentParser(add_help=False)
    r = radial.add_argument_group("case")
    r.add_argument("--theorem", dest="theorem_id")
    r.add_argument("--p", type=float)
    r.add_argument("--Q", type=float)
    r.add_argument("--R", type=float)
    r.add_argument("--q", type=float)
    r.add_argument("--profile")
    r.add_argument("--weights", type=_floats, help="dilation weights, e.g. 1,1,2")
    r.add_argument("--quasi-norm", dest="quasi_norm")

    ap = argparse.ArgumentParser(prog="hardy-bench", description=__doc__.split("\n")[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common, radial], help="check one inequality")
    v.add_argument("--euclidean", action="store_true", default=None, help="full-gradient check on R^n")
    v.add_argument("--n", type=int)
    v.add_argument("--function", choices=sorted(cartesian.FUNCTIONS))
    v.add_argument("--method", help="tensor-gauss[:order[:panels]] or monte-carlo")
    v.add_argument("--mc-samples", dest="mc_samples", type=lambda s: int(float(s)))
    v.add_argument("--seed", type=int)
    s = sub.add_parser("sweep", parents=[common, radial], help="sharpness sweep over an extremal family")
    s.add_argument("--family")
    s.add_argument("--eps", type=_floats, help="comma-separated, strictly decreasing")
    sub.add_parser("remainder", parents=[common, radial], help="check the remainder identity")
    u = sub.add_parser("suite", parents=[common], help="run the full battery")
    u.add_argument("--mc-samples", dest="mc_samples", type=lambda s: int(float(s)))
    u.add_argument("--seed", type=int)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values = read_config_file(ns.config) if ns.config else {}
    names = {f.name for f in fields(RunConfig)}
    for k, v in vars(ns).items():
        if k in names and v is not None:
            values[k] = v
    values["command"] = ns.command
    if "jobs" not in values:
        values["jobs"] = suite.default_jobs()
    return RunConfig(**values)


# --------------------------------------------------------------- validation

def resolve_group(cfg: RunConfig):
    """The group described by weights and/or Q; they must agree."""
    if cfg.weights is not None:
        group = make_group(cfg.weights)
        if cfg.Q is not None and abs(cfg.Q - group.Q) > 1e-12 * group.Q:
            raise UsageError(f"Q={cfg.Q} does not match the weights {list(cfg.weights)} (Q={group.Q})")
    else:
        group = group_with_dimension(cfg.Q if cfg.Q is not None else 2.0)
    validate_quasi_norm(group, parse_quasi_norm(cfg.quasi_norm))
    return group


def validate(cfg: RunConfig) -> RunConfig:
    """Reject invalid configurations, naming the violated constraint."""
    if cfg.command not in report.COMMANDS:
        raise UsageError(f"command must be one of {report.COMMANDS}")
    if cfg.format not in report.FORMATS:
        raise UsageError(f"format must be one of {report.FORMATS}")
    if not cfg.rel_tol > 0 or not cfg.abs_tol > 0:
        raise UsageError("tolerances must be positive")
    if not cfg.tol_margin >= 0:
        raise UsageError("tol-margin must be non-negative")
    if cfg.jobs < 1:
        raise UsageError("jobs must be at least 1")
    if cfg.command == "suite":
        return cfg
    if not cfg.p > 1:
        raise UsageError(f"p must exceed 1, got {cfg.p}")
    if not cfg.R > 0:
        raise UsageError(f"R must be positive, got {cfg.R}")
    if cfg.command == "verify" and cfg.euclidean:
        if cfg.theorem_id not in ("LH2", "LH2_RN", "CKN"):
            raise UsageError("--euclidean supports --theorem LH2 or CKN")
        if cfg.n not in (2, 3, 4):
            raise UsageError(f"n must be 2, 3 or 4, got {cfg.n}")
        if cfg.method is not None:
            cartesian.parse_method(cfg.method)
        return cfg
    group = resolve_group(cfg)
    cfg = replace(cfg, Q=group.Q)
    parse_profile(cfg.profile)
    if cfg.command == "verify":
        if cfg.theorem_id is None:
            raise UsageError("verify needs --theorem")
        if cfg.theorem_id not in THEOREMS:
            raise UsageError(f"unknown theorem {cfg.theorem_id!r}; expected one of {THEOREMS}")
    if cfg.command == "sweep":
        if cfg.family is None and cfg.theorem_id is None:
            raise UsageError("sweep needs --family or --theorem")
    return cfg


# ------------------------------------------------------------------ running

def _spec(cfg: RunConfig) -> QuadratureSpec:
    return QuadratureSpec(rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol)


def _case(cfg: RunConfig, theorem_id: str) -> InequalityCase:
    return InequalityCase(theorem_id, p=cfg.p, Q=cfg.Q, R=cfg.R, profile=parse_profile(cfg.profile), q=cfg.q,
                          weights=tuple(cfg.weights) if cfg.weights is not None else None)


def _family_for(cfg: RunConfig) -> str:
    if cfg.family is not None:
        return sharpness.resolve_family(cfg.family)
    for fam, tid in sharpness.FAMILY_THEOREM.items():
        if tid == cfg.theorem_id:
            return fam
    raise UsageError(f"no extremal family for theorem {cfg.theorem_id!r}")


def _euclidean(cfg: RunConfig):
    f = cartesian.make_function(cfg.function, cfg.n)
    if cfg.method is not None:
        method = cartesian.parse_method(cfg.method)
    elif cfg.n == 2 and f.radial:
        method = cartesian.TensorGauss()
    else:
        method = cartesian.MonteCarlo(cfg.mc_samples, cfg.seed)
    if cfg.theorem_id == "CKN":
        return cartesian.verify_ckn_fullgrad(f, method=method, tol_margin=cfg.tol_margin)
    return cartesian.verify_lh2_fullgrad(f, cfg.p, cfg.R, method, cfg.tol_margin)


def _timed(fn, timing):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) if timing else None


def run(cfg: RunConfig, timing: bool = False) -> Tuple[List[ReportRecord], int]:
    """Execute a validated config; returns (records, exit status)."""
    if cfg.command == "suite":
        cases = suite.all_cases(cfg.mc_samples, cfg.seed)
        results = suite.run_suite(cases, _spec(cfg), cfg.tol_margin, cfg.jobs, timing)
        records, numeric = [], False
        for case, (res, wall) in zip(cases, results):
            if isinstance(res, str):
                numeric = True
                kind, d = case
                records.append(ReportRecord(cfg.echo(), "error", {"case": dict(d, kind=kind), "message": res,
                                                                  "pass": False}, report.VERSION, wall))
            else:
                records.append(report.make_record(cfg, res, wall))
        status = EXIT_NUMERIC if numeric else (EXIT_OK if all(r.passed for r in records) else EXIT_FAIL)
        return records, status
    if cfg.command == "verify" and cfg.euclidean:
        res, wall = _timed(lambda: _euclidean(cfg), timing)
    elif cfg.command == "verify":
        res, wall = _timed(lambda: verify(_case(cfg, cfg.theorem_id), _spec(cfg), cfg.tol_margin), timing)
    elif cfg.command == "remainder":
        res, wall = _timed(lambda: remainder_identity(_case(cfg, "EQ_REM"), _spec(cfg)), timing)
    else:
        fam = _family_for(cfg)
        tid = cfg.theorem_id if cfg.theorem_id in sharpness.FAMILY_THEOREM.values() else None
        res, wall = _timed(lambda: sharpness.sweep(fam, cfg.eps, p=cfg.p, Q=cfg.Q, R=cfg.R, theorem_id=tid,
                                                   spec=_spec(cfg), tol_margin=cfg.tol_margin), timing)
        rec = report.make_record(cfg, res, wall)
        status = EXIT_OK if rec.passed else (EXIT_NUMERIC if not res.complete else EXIT_FAIL)
        return [rec], status
    rec = report.make_record(cfg, res, wall)
    return [rec], EXIT_OK if rec.passed else EXIT_FAIL


def _emit(cfg: RunConfig, records: Sequence[ReportRecord]):
    if cfg.command == "sweep" and cfg.format == "csv" and len(records) == 1 and records[0].kind == "sweep":
        data = report.serialize_sweep_csv(records[0])
    else:
        data = report.serialize(records, cfg.format)
    report.write(data, cfg.output)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = validate(config_from_args(ns))
    except (UsageError, HardyBenchError, ValueError, TypeError) as exc:
        print(f"hardy-bench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        records, status = run(cfg, ns.timing)
    except ConvergenceError as exc:
        print(f"hardy-bench: numerical failure: {exc}", file=sys.stderr)
        partial = {"message": str(exc), "partial_value": exc.value, "error_estimate": exc.error_estimate,
                   "subdivisions_used": exc.subdivisions_used, "pass": False}
        try:
            _emit(cfg, [ReportRecord(cfg.echo(), "error", partial, report.VERSION)])
        except OSError:
            pass
        return EXIT_NUMERIC
    except (HardyBenchError, ValueError) as exc:
        print(f"hardy-bench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _emit(cfg, records)
    except OSError as exc:
        print(f"hardy-bench: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return status


if __name__ == "__main__":
    sys.exit(main())
