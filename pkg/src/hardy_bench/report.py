"""Run configuration, report records and deterministic JSON/CSV output."""
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError
from .inequalities import RemainderReport, VerificationResult
from .sharpness import SweepResult

VERSION = "0.1.0"
COMMANDS = ("verify", "sweep", "remainder", "suite")
FORMATS = ("json", "csv")
CSV_COLUMNS = ("theorem_id", "params", "lhs", "rhs", "ratio", "pass", "err_lhs", "err_rhs", "R_at_sup")
SWEEP_COLUMNS = ("epsilon", "ratio", "lhs", "rhs")


@dataclass
class RunConfig:
    command: str = "verify"
    theorem_id: Optional[str] = None
    weights: Optional[Tuple[float, ...]] = None
    quasi_norm: str = "weighted-max"
    p: float = 2.0
    Q: Optional[float] = None
    R: float = 1.0
    q: Optional[float] = None
    profile: str = "bump:0.2,0.8"
    family: Optional[str] = None
    eps: Tuple[float, ...] = (0.1, 0.03, 0.01, 0.003)
    rel_tol: float = 1e-10
    abs_tol: float = 1e-300
    tol_margin: float = 1e-6
    jobs: int = 1
    output: Optional[str] = None
    format: str = "json"
    euclidean: bool = False
    n: int = 2
    function: str = "bump-angular"
    method: Optional[str] = None
    mc_samples: int = 10 ** 6
    seed: int = 42

    def echo(self) -> Dict[str, Any]:
        """Config fields that influence results (output location excluded)."""
        d = asdict(self)
        for k in ("output", "format", "jobs"):
            d.pop(k)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d


@dataclass
class ReportRecord:
    config: Dict[str, Any]
    kind: str
    result: Dict[str, Any]
    version: str = VERSION
    wall_time: Optional[float] = None

    @property
    def passed(self) -> bool:
        return bool(self.result.get("pass", False))


# ------------------------------------------------------------- conversions

def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def result_payload(obj) -> Tuple[str, Dict[str, Any]]:
    """(kind, dict) for a VerificationResult, RemainderReport or SweepResult."""
    if isinstance(obj, VerificationResult):
        return "verification", _plain({
            "theorem_id": obj.theorem_id, "params": obj.params, "lhs": obj.lhs, "rhs": obj.rhs,
            "constant": obj.constant, "ratio": obj.ratio, "pass": obj.passed, "err_lhs": obj.err_lhs,
            "err_rhs": obj.err_rhs, "R_at_sup": obj.R_at_sup, "extras": obj.extras})
    if isinstance(obj, RemainderReport):
        scale = max(obj.term_u, obj.term_v)
        return "remainder", _plain({
            "theorem_id": "EQ_REM", "params": obj.params, "term_u": obj.term_u, "term_v": obj.term_v,
            "term_rem": obj.term_rem, "residual": obj.residual,
            "relative_residual": obj.residual / scale if scale > 0 else 0.0, "pass": obj.passed,
            "err_u": obj.err_u, "err_v": obj.err_v, "err_rem": obj.err_rem, "extras": obj.extras})
    if isinstance(obj, SweepResult):
        return "sweep", _plain({
            "theorem_id": obj.theorem_id, "family_id": obj.family_id, "params": obj.params,
            "constant": obj.constant, "epsilons": obj.epsilons, "ratios": obj.ratios, "lhs": obj.lhs,
            "rhs": obj.rhs, "errors": obj.errors, "max_ratio": obj.max_ratio,
            "pass": obj.ceiling_ok and obj.complete, "tol_margin": obj.tol_margin})
    raise TypeError(f"cannot report objects of type {type(obj).__name__}")


def make_record(config: RunConfig, obj, wall_time: Optional[float] = None) -> ReportRecord:
    kind, payload = result_payload(obj)
    return ReportRecord(config.echo(), kind, payload, VERSION, wall_time)


# ----------------------------------------------------------- serialization

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _dump(x) -> str:
    # json with sorted keys and 17 significant digits for every float
    if x is None or isinstance(x, (bool, str)):
        return json.dumps(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return _fmt_float(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_dump(x[k])}" for k in sorted(x)) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _record_dict(r: ReportRecord) -> Dict[str, Any]:
    return {"config": r.config, "kind": r.kind, "result": r.result, "version": r.version, "wall_time": r.wall_time}


def _csv_rows(records: Sequence[ReportRecord]):
    for r in records:
        res = r.result
        if r.kind == "sweep":
            for e, ratio, lhs, rhs in zip(res["epsilons"], res["ratios"], res["lhs"], res["rhs"]):
                params = dict(res["params"], family=res["family_id"], epsilon=e)
                ok = not (ratio > 1 + res["tol_margin"]) and not math.isnan(ratio)
                yield [res["theorem_id"], params, lhs, rhs, ratio, ok, None, None, None]
        elif r.kind == "remainder":
            rhs = res["term_v"] - res["term_rem"]
            yield ["EQ_REM", res["params"], res["term_u"], rhs, res["relative_residual"], res["pass"],
                   res["err_u"], res["err_v"] + res["err_rem"], None]
        else:
            yield [res[c] for c in CSV_COLUMNS]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, dict):
        return _dump(v)
    return str(v)


def _write_csv(header, rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue().encode()


def serialize(records: Sequence[ReportRecord], fmt: str = "json") -> bytes:
    """Deterministic bytes: sorted keys and '.17g' floats."""
    if fmt == "json":
        return ("[" + ",\n ".join(_dump(_record_dict(r)) for r in records) + "]\n").encode()
    if fmt == "csv":
        return _write_csv(CSV_COLUMNS, _csv_rows(records))
    raise ConfigurationError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def serialize_sweep_csv(record: ReportRecord) -> bytes:
    """Plot-ready (epsilon, ratio, lhs, rhs) table for one sweep record."""
    res = record.result
    return _write_csv(SWEEP_COLUMNS, zip(res["epsilons"], res["ratios"], res["lhs"], res["rhs"]))


def parse(data: bytes) -> List[ReportRecord]:
    """Inverse of ``serialize(..., 'json')``."""
    items = json.loads(data.decode() if isinstance(data, (bytes, bytearray)) else data)
    names = {f.name for f in fields(ReportRecord)}
    return [ReportRecord(**{k: v for k, v in it.items() if k in names}) for it in items]


def write(data: bytes, path: Optional[str]):
    """Write to ``path``, or stdout when it is None or '-'."""
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)
