"""Near-extremal families and ratio sweeps for the sharp constants.

Every family lives on a logarithmic scale: the extremal core is exact on a
range of e-folds that widens as epsilon shrinks, and each member is smooth
with compact support.

LH2_LOGPOWER
    g = c * (psi(L) - 1) * W(L) with L = |log(r/R)|, where
    psi = (x/(1+x))**(1-b/2) * (y/(1+y))**(b/2), x = (L/L0)**2, y = (L/L1)**2,
    b = (p-1)/p.  psi ~ L**2 at 0 (so g is smooth at r = R), ~ L**b on the
    core [L0, L1] and -> 1 beyond; W cuts off far past L1.
CRITLOG_LOGCUT
    g = |log r|**(-1/Q) * chi(log|log r|) for r < 1.
CLASSICAL_POWER
    g = r**(-(Q-p)/p) * chi(log r).
ET_LOGCONC
    g = M**((n-1)/n) * chi(log M) with M = 1 + log(1/r).

Here chi is the flat bump exp(-a/(x(1-x)) + 4a) on the rescaled window.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import ConfigurationError, ConvergenceError
from .inequalities import (DEFAULT_TOL_MARGIN, InequalityCase, VerificationResult, verify_classical_hardy,
                           verify_crit_log_hardy, verify_edmunds_triebel, verify_lh2)
from .profiles import Piece, RadialProfile, _fmt
from .quadrature import QuadratureSpec

FAMILIES = ("LH2_LOGPOWER", "CRITLOG_LOGCUT", "CLASSICAL_POWER", "ET_LOGCONC")
FAMILY_THEOREM = {"LH2_LOGPOWER": "LH2", "CRITLOG_LOGCUT": "CRITLOG",
                  "CLASSICAL_POWER": "CLASSICAL_LP", "ET_LOGCONC": "EDMUNDS_TRIEBEL"}
ALIASES = {"logpower": "LH2_LOGPOWER", "logcut": "CRITLOG_LOGCUT", "power": "CLASSICAL_POWER",
           "powerlaw": "CLASSICAL_POWER", "logconc": "ET_LOGCONC"}
DEFAULT_EPS = (0.1, 0.03, 0.01, 0.003)
SWEEP_SPEC = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-300)

# shape of the flat bump
_BUMP_A = 0.15


def flat_bump(x):
    """exp(-a/(x(1-x)) + 4a) on (0, 1) and its x-derivative; equals 1 at x = 1/2."""
    x = np.asarray(x, dtype=float)
    inside = (x > 0) & (x < 1)
    xs = np.where(inside, x, 0.5)
    q = xs * (1 - xs)
    with np.errstate(under="ignore"):
        f = np.where(inside, np.exp(-_BUMP_A / q + 4 * _BUMP_A), 0.0)
    df = np.where(inside, f * _BUMP_A * (1 - 2 * xs) / (q * q), 0.0)
    return f, df


def _log_piece(lo, hi, sign, offset):
    """Piece with t = offset + sign * exp(s) for s in [lo, hi]."""
    return Piece(lo, hi,
                 to_t=lambda s: offset + sign * np.exp(s),
                 jac=lambda s: sign * np.exp(s),
                 from_t=lambda t: np.log(np.maximum(sign * (t - offset), 1e-300)))


class LogPowerExtremal(RadialProfile):
    """Member of LH2_LOGPOWER; see the module docstring."""

    def __init__(self, p: float, R: float, ell: float, L0: float = 1e-3, kappa: float = 3.0,
                 tau: float = 3.0, c: float = 1.0):
        self.p, self.R, self.ell, self.L0, self.c = float(p), float(R), float(ell), float(L0), float(c)
        self.b = (p - 1) / p
        self.L1 = L0 * np.exp(ell)
        self.s2 = np.log(self.L1) + kappa
        self.s3 = self.s2 + tau
        self.s_min = np.log(L0) - 12.0
        self.anchor = float(np.log(R))
        Lmax = float(np.exp(self.s3))
        super().__init__(f"lh2_logpower:p={_fmt(p)},R={_fmt(R)},ell={_fmt(ell)}",
                         (self.anchor - Lmax, self.anchor + Lmax))

    def _shape(self, L):
        """(1 - (1 - psi) W, L * d/dL of g / c) as functions of L >= 0."""
        L = np.asarray(L, dtype=float)
        with np.errstate(divide="ignore", under="ignore"):
            x = (L / self.L0) ** 2
            y = (L / self.L1) ** 2
            # log psi written to stay accurate for tiny and huge L
            lpsi = (1 - self.b / 2) * (np.log(x) - np.log1p(x)) + (self.b / 2) * (np.log(y) - np.log1p(y))
            psi = np.exp(lpsi)
            one_minus_psi = -np.expm1(lpsi)
            lam = (2 - self.b) / (1 + x) + self.b / (1 + y)
            s = np.log(L)
        W, dW = _kernels.smooth_step((self.s3 - s) / (self.s3 - self.s2))
        dW = -dW / (self.s3 - self.s2)
        delta = psi * W + (1 - W)
        Ldg = psi * lam * W - one_minus_psi * dW
        delta = np.where(L > 0, delta, 0.0)
        Ldg = np.where(L > 0, Ldg, 0.0)
        return delta, Ldg

    def _values_log(self, t):
        u = t - self.anchor
        L = np.abs(u)
        delta, Ldg = self._shape(L)
        with np.errstate(divide="ignore", invalid="ignore"):
            e = np.where(L > 0, np.sign(u) * Ldg / np.where(L > 0, L, 1.0), 0.0)
        return self.c * (delta - 1.0), self.c * e

    def delta(self, t, logR):
        if logR == self.anchor:
            return self.c * self._shape(np.abs(np.asarray(t, dtype=float) - self.anchor))[0]
        return super().delta(t, logR)

    def pieces(self):
        eps = float(np.exp(self.s_min))
        return (_log_piece(self.s_min, self.s3, -1.0, self.anchor),
                Piece(self.anchor - eps, self.anchor + eps),
                _log_piece(self.s_min, self.s3, 1.0, self.anchor))


class LogCutExtremal(RadialProfile):
    """Member of CRITLOG_LOGCUT on |log r| in [exp(s0), exp(s1)]."""

    def __init__(self, Q: float, s0: float, s1: float):
        self.Q, self.s0, self.s1 = float(Q), float(s0), float(s1)
        super().__init__(f"critlog_logcut:Q={_fmt(Q)},s0={_fmt(s0)},s1={_fmt(s1)}",
                         (-float(np.exp(s1)), -float(np.exp(s0))))

    def _values_log(self, t):
        L = np.maximum(-t, 1e-300)
        s = np.log(L)
        w = self.s1 - self.s0
        chi, dchi = flat_bump((s - self.s0) / w)
        dchi = dchi / w
        amp = L ** (-1.0 / self.Q)
        g = amp * chi
        # d/dt = -d/dL, and L d/dL (L^(-1/Q) chi) = L^(-1/Q) (chi' - chi/Q)
        e = -amp * (dchi - chi / self.Q) / L
        return g, e

    def pieces(self):
        return (_log_piece(self.s0, self.s1, -1.0, 0.0),)


class PowerExtremal(RadialProfile):
    """Member of CLASSICAL_POWER on log r in [t0, t1]."""

    def __init__(self, p: float, Q: float, t0: float, t1: float):
        self.p, self.Q, self.alpha = float(p), float(Q), (Q - p) / p
        super().__init__(f"classical_power:p={_fmt(p)},Q={_fmt(Q)},t0={_fmt(t0)},t1={_fmt(t1)}", (t0, t1))

    def _values_log(self, t):
        t0, t1 = self.log_support
        w = t1 - t0
        chi, dchi = flat_bump((t - t0) / w)
        amp = np.exp(-self.alpha * t)
        return amp * chi, amp * (dchi / w - self.alpha * chi)


class LogConcExtremal(RadialProfile):
    """Member of ET_LOGCONC on log M in [m0, m1], M = 1 + log(1/r)."""

    def __init__(self, n: float, m0: float, m1: float):
        self.n, self.m0, self.m1 = float(n), float(m0), float(m1)
        self.beta = (n - 1) / n
        super().__init__(f"et_logconc:n={_fmt(n)},m0={_fmt(m0)},m1={_fmt(m1)}",
                         (1.0 - float(np.exp(m1)), 1.0 - float(np.exp(m0))))

    def _values_log(self, t):
        M = np.maximum(1.0 - t, 1e-300)
        sig = np.log(M)
        w = self.m1 - self.m0
        chi, dchi = flat_bump((sig - self.m0) / w)
        amp = M ** self.beta
        # dg/dt = -dg/dM and M dG/dM = M^beta (beta chi + chi')
        e = -amp * (self.beta * chi + dchi / w) / M
        return amp * chi, e

    def pieces(self):
        return (_log_piece(self.m0, self.m1, -1.0, 1.0),)


# ----------------------------------------------------------------- families

def resolve_family(name: str) -> str:
    fam = ALIASES.get(name, name)
    if fam not in FAMILIES:
        raise ConfigurationError(f"unknown family {name!r}; expected one of {FAMILIES} or {sorted(ALIASES)}")
    return fam


def _check_grid(epsilon_grid):
    eps = np.asarray(epsilon_grid, dtype=float)
    if eps.size == 0:
        raise ConfigurationError("epsilon grid is empty")
    if np.any(eps <= 0) or np.any(eps >= 0.5):
        raise ConfigurationError("epsilon values must lie in (0, 0.5)")
    if np.any(np.diff(eps) >= 0):
        raise ConfigurationError("epsilon grid must be strictly decreasing")
    return eps


def build_member(family_id: str, eps: float, p: float = 2.0, Q: float = 2.0, R: float = 1.0) -> RadialProfile:
    fam = resolve_family(family_id)
    k = np.log(1.0 / eps)
    if fam == "LH2_LOGPOWER":
        if not p > 1:
            raise ConfigurationError(f"p must exceed 1, got {p}")
        return LogPowerExtremal(p, R, ell=3.5 * k)
    if fam == "CRITLOG_LOGCUT":
        if not R >= 1:
            raise ConfigurationError("CRITLOG_LOGCUT members live on 0 < r < 1 and need R >= 1")
        if not Q > 1:
            raise ConfigurationError(f"Q must exceed 1, got {Q}")
        return LogCutExtremal(Q, -8.0 * k, np.log(400.0))
    if fam == "CLASSICAL_POWER":
        if not 1 < p < Q:
            raise ConfigurationError(f"CLASSICAL_POWER needs 1 < p < Q, got p={p}, Q={Q}")
        return PowerExtremal(p, Q, -2.5 * k, 2.5 * k)
    if Q != int(Q) or Q < 2:
        raise ConfigurationError(f"ET_LOGCONC needs an integer dimension n >= 2, got {Q}")
    return LogConcExtremal(Q, 0.5, 0.5 + 5.0 * k)


def build_family(family_id: str, params: Dict[str, float], epsilon_grid: Sequence[float] = DEFAULT_EPS
                 ) -> List[RadialProfile]:
    eps = _check_grid(epsilon_grid)
    kw = {k: float(v) for k, v in params.items() if k in ("p", "Q", "R")}
    return [build_member(family_id, float(e), **kw) for e in eps]


@dataclass
class SweepResult:
    family_id: str
    theorem_id: str
    constant: float
    epsilons: List[float]
    ratios: List[float]
    lhs: List[float]
    rhs: List[float]
    errors: List[Optional[str]] = field(default_factory=list)
    params: Dict[str, float] = field(default_factory=dict)
    tol_margin: float = DEFAULT_TOL_MARGIN

    @property
    def max_ratio(self) -> float:
        good = [r for r in self.ratios if np.isfinite(r)]
        return max(good) if good else float("nan")

    @property
    def final_ratio(self) -> float:
        return self.ratios[-1]

    @property
    def tail_monotone(self) -> bool:
        tail = [r for r in self.ratios[-3:]]
        return all(b >= a - 1e-4 for a, b in zip(tail, tail[1:]))

    @property
    def ceiling_ok(self) -> bool:
        return all(not (r > 1 + self.tol_margin) for r in self.ratios)

    @property
    def complete(self) -> bool:
        return all(e is None for e in self.errors)


def _verify_member(fam: str, profile, p, Q, R, spec, tol_margin) -> VerificationResult:
    if fam == "LH2_LOGPOWER":
        return verify_lh2(InequalityCase("LH2", p=p, Q=Q, R=R, profile=profile), spec, tol_margin)
    if fam == "CRITLOG_LOGCUT":
        return verify_crit_log_hardy(InequalityCase("CRITLOG", p=Q, Q=Q, R=R, profile=profile), spec, tol_margin)
    if fam == "CLASSICAL_POWER":
        return verify_classical_hardy(InequalityCase("CLASSICAL_LP", p=p, Q=Q, R=R, profile=profile),
                                      spec, tol_margin)
    return verify_edmunds_triebel(InequalityCase("EDMUNDS_TRIEBEL", p=Q, Q=Q, R=1.0, profile=profile),
                                  spec, tol_margin)


def sweep(family_id: str, epsilon_grid: Sequence[float] = DEFAULT_EPS, p: float = 2.0, Q: float = 2.0,
          R: float = 1.0, theorem_id: Optional[str] = None, spec: QuadratureSpec = SWEEP_SPEC,
          tol_margin: float = DEFAULT_TOL_MARGIN) -> SweepResult:
    """Evaluate the family's theorem ratio at each epsilon (largest first).

    A quadrature failure on one member is recorded in ``errors`` and the
    sweep continues.
    """
    fam = resolve_family(family_id)
    tid = FAMILY_THEOREM[fam]
    if theorem_id is not None and theorem_id != tid:
        raise ConfigurationError(f"family {fam} tests {tid}, not {theorem_id}")
    eps = _check_grid(epsilon_grid)
    members = build_family(fam, {"p": p, "Q": Q, "R": R}, eps)
    out = SweepResult(fam, tid, float("nan"), [float(e) for e in eps], [], [], [], [],
                      {"p": p, "Q": Q, "R": R}, tol_margin)
    for prof in members:
        try:
            res = _verify_member(fam, prof, p, Q, R, spec, tol_margin)
        except ConvergenceError as exc:
            out.ratios.append(float("nan"))
            out.lhs.append(float("nan"))
            out.rhs.append(float("nan"))
            out.errors.append(str(exc))
            continue
        out.constant = res.constant
        out.ratios.append(res.ratio)
        out.lhs.append(res.lhs)
        out.rhs.append(res.rhs)
        out.errors.append(None)
    return out
