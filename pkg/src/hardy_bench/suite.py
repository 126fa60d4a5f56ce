"""The full verification battery: radial theorems, remainders, sweeps, Cartesian checks."""
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from . import cartesian, sharpness
from .errors import ConvergenceError
from .inequalities import InequalityCase, verify
from .profiles import parse_profile
from .quadrature import QuadratureSpec

BATTERY_PROFILES = ("bump:0.2,0.8", "polybump:0.2,0.8,3", "polybump:0.1,0.9,2", "powerlaw:-0.5,0.2,2",
                    "cbump:0.2,0.8")
BATTERY_P = (1.5, 2.0, 3.0)
BATTERY_Q = (2.0, 3.0, 4.0, 5.5)
BATTERY_R = (0.5, 1.0, 4.0)
REMAINDER_P = (1.5, 2.0, 3.0)

SWEEPS = (
    ("LH2_LOGPOWER", {"p": 2.0}), ("LH2_LOGPOWER", {"p": 3.0}), ("LH2_LOGPOWER", {"p": 4.0}),
    ("CLASSICAL_POWER", {"p": 2.0, "Q": 4.0}), ("CLASSICAL_POWER", {"p": 2.0, "Q": 3.0}),
    ("CLASSICAL_POWER", {"p": 3.0, "Q": 5.5}),
    ("CRITLOG_LOGCUT", {"Q": 2.0}), ("CRITLOG_LOGCUT", {"Q": 3.0}),
    ("ET_LOGCONC", {"Q": 2.0}), ("ET_LOGCONC", {"Q": 3.0}),
)

Case = Tuple[str, Dict]


def _inside(profile_key: str, R: float) -> bool:
    return parse_profile(profile_key).support[1] < R


def _p_values(Q: float) -> List[float]:
    return sorted(set(BATTERY_P) | {Q})


def theorem_cases() -> List[Case]:
    """Admissible (theorem, p, Q, R, profile) combinations of the battery."""
    out = []
    for prof in BATTERY_PROFILES:
        for Q in BATTERY_Q:
            for p in _p_values(Q):
                for R in BATTERY_R:
                    base = {"p": p, "Q": Q, "R": R, "profile": prof}
                    tids = ["LH2", "UP2"]
                    if p > 2:
                        tids.append("UP1")
                    if p < Q:
                        tids.append("CLASSICAL_LP")
                    if p == 2 and Q >= 3:
                        tids += ["HS1a", "HS1b"]
                    if p == 2 and Q == 2:
                        tids += ["Q2a", "Q2b"]
                    if p == Q and _inside(prof, R):
                        tids += ["CRITLOG", "BALL_UP"]
                    if p == Q and Q == int(Q) and R == 1.0 and _inside(prof, 1.0):
                        tids.append("EDMUNDS_TRIEBEL")
                    if R == 1.0:
                        tids.append("LH2_supR")
                    out += [("theorem", dict(base, theorem_id=t)) for t in tids]
                    if p in REMAINDER_P:
                        out.append(("theorem", dict(base, theorem_id="EQ_REM")))
    return out


def sweep_cases() -> List[Case]:
    return [("sweep", dict(params, family=fam)) for fam, params in SWEEPS]


def cartesian_cases(mc_samples: int, seed: int) -> List[Case]:
    out = []
    for p in BATTERY_P:
        for R in (0.1, 1.0):
            out.append(("cartesian", {"theorem_id": "LH2_RN", "function": "bump-radial", "n": 2, "p": p, "R": R,
                                      "method": "tensor-gauss"}))
    out.append(("cartesian", {"theorem_id": "CKN", "function": "bump-radial", "n": 2, "method": "tensor-gauss"}))
    for n in (2, 3):
        out.append(("cartesian", {"theorem_id": "LH2_RN", "function": "bump-angular", "n": n, "p": 2.0, "R": 1.0,
                                  "method": f"monte-carlo:{mc_samples}:{seed}"}))
        out.append(("cartesian", {"theorem_id": "CKN", "function": "bump-angular", "n": n,
                                  "method": f"monte-carlo:{mc_samples}:{seed}"}))
    return out


def all_cases(mc_samples: int = 10 ** 6, seed: int = 42) -> List[Case]:
    cases = theorem_cases() + sweep_cases() + cartesian_cases(mc_samples, seed)
    return sorted(cases, key=case_key)


def case_key(case: Case) -> str:
    kind, d = case
    return kind + "|" + json.dumps(d, sort_keys=True)


def run_case(case: Case, spec: QuadratureSpec, tol_margin: float):
    """Evaluate one case; returns a VerificationResult, RemainderReport or SweepResult."""
    kind, d = case
    if kind == "theorem":
        ic = InequalityCase(d["theorem_id"], p=d["p"], Q=d["Q"], R=d["R"], profile=parse_profile(d["profile"]))
        return verify(ic, spec, tol_margin)
    if kind == "sweep":
        return sharpness.sweep(d["family"], sharpness.DEFAULT_EPS, p=d.get("p", 2.0), Q=d.get("Q", 2.0),
                               spec=spec, tol_margin=tol_margin)
    f = cartesian.make_function(d["function"], d["n"])
    method = cartesian.parse_method(d["method"])
    if d["theorem_id"] == "CKN":
        return cartesian.verify_ckn_fullgrad(f, method=method, tol_margin=tol_margin)
    return cartesian.verify_lh2_fullgrad(f, d["p"], d["R"], method, tol_margin)


def _run_one(args):
    case, spec, tol_margin, timing = args
    t0 = time.perf_counter()
    try:
        res = run_case(case, spec, tol_margin)
    except ConvergenceError as exc:
        res = str(exc)
    return res, (time.perf_counter() - t0) if timing else None


def run_suite(cases: Sequence[Case], spec: QuadratureSpec, tol_margin: float, jobs: int = 1,
              timing: bool = False) -> List[Tuple[object, Optional[float]]]:
    """(result, wall time) per case in the order of ``cases``.

    A quadrature failure yields its message in place of the result.
    ``jobs > 1`` evaluates in worker processes; the order is unaffected.
    """
    work = [(c, spec, tol_margin, timing) for c in cases]
    if jobs <= 1:
        return [_run_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, work, chunksize=8))


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("HARDY_BENCH_JOBS", "1")))
    except ValueError:
        return 1
