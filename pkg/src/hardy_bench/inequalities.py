"""Radial verifiers for the critical Hardy family and its relatives.

All integrals are written in t = log r after dividing out the (common)
measure of the unit quasi-sphere, so reported sides are "per unit sphere
measure".  For radial data that factor appears with the same power on both
sides of every inequality here, so ratios are exact.

Conventions
-----------
* ``ratio = lhs / rhs`` and ``pass`` means ``ratio <= 1 + tol_margin``.
  For inequalities written as ``product >= bound`` we store the bound as
  ``lhs`` and the product as ``rhs`` so the same rule applies.
* 0/0 is reported as ratio 0.
* u = log(r/R); the quotient (g - g(R))/u is replaced by its limit r g'(r)
  at r = R when |u| < ``eps_u``.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import ConfigurationError, ParameterError, PreconditionError
from .profiles import FREE, RadialProfile, ZeroProfile
from .quadrature import ZERO, IntegralResult, QuadratureSpec, integrate, root_error

THEOREMS = ("LH2", "LH2_supR", "EQ_REM", "UP1", "UP2", "CRITLOG", "BALL_UP", "HS1a", "HS1b",
            "Q2a", "Q2b", "CLASSICAL_LP", "EDMUNDS_TRIEBEL")

DEFAULT_TOL_MARGIN = 1e-6
EPS_U = 1e-6
VERIFY_SPEC = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-300)


@dataclass(frozen=True)
class InequalityCase:
    theorem_id: str
    p: float = 2.0
    Q: float = 2.0
    R: float = 1.0
    profile: RadialProfile = field(default_factory=ZeroProfile)
    q: Optional[float] = None
    weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.theorem_id not in THEOREMS:
            raise ConfigurationError(f"unknown theorem id {self.theorem_id!r}")
        if self.weights is not None and abs(sum(self.weights) - self.Q) > 1e-12 * self.Q:
            raise ConfigurationError(f"Q={self.Q} does not match the weights {self.weights}")
        if not self.R > 0:
            raise ConfigurationError(f"R must be positive, got {self.R}")
        if not self.Q > 0:
            raise ConfigurationError(f"Q must be positive, got {self.Q}")

    @property
    def p_conj(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def logR(self) -> float:
        return float(np.log(self.R))

    def params(self) -> Dict[str, object]:
        out = {"p": self.p, "Q": self.Q, "R": self.R, "profile": self.profile.key}
        if self.q is not None:
            out["q"] = self.q
        if self.weights is not None:
            out["weights"] = list(self.weights)
        return out


@dataclass
class VerificationResult:
    theorem_id: str
    params: Dict[str, object]
    lhs: float
    rhs: float
    constant: float
    ratio: float
    passed: bool
    err_lhs: float = 0.0
    err_rhs: float = 0.0
    R_at_sup: Optional[float] = None
    extras: Dict[str, float] = field(default_factory=dict)


@dataclass
class RemainderReport:
    params: Dict[str, object]
    term_u: float
    term_v: float
    term_rem: float
    residual: float
    err_u: float = 0.0
    err_v: float = 0.0
    err_rem: float = 0.0
    extras: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        scale = max(self.term_u, self.term_v)
        return self.residual <= 1e-6 * scale and self.term_rem >= -1e-12


def make_result(theorem_id, params, lhs, rhs, constant, err_lhs=0.0, err_rhs=0.0,
                tol_margin=DEFAULT_TOL_MARGIN, **kw) -> VerificationResult:
    lhs, rhs = float(lhs), float(rhs)
    if lhs == 0.0:
        ratio = 0.0
    elif rhs == 0.0:
        ratio = float("inf")
    else:
        ratio = lhs / rhs
    return VerificationResult(theorem_id, dict(params), lhs, rhs, float(constant), ratio,
                              bool(ratio <= 1.0 + tol_margin), float(err_lhs), float(err_rhs), **kw)


# ------------------------------------------------------------ integration glue

def integrate_profile(profile: RadialProfile, F: Callable, spec: QuadratureSpec,
                      clip: Tuple[float, float] = (-np.inf, np.inf), knots: Sequence[float] = ()) -> IntegralResult:
    """Integral over t of F(t) on the profile support (intersected with ``clip``).

    The support is traversed piece by piece in each piece's own variable;
    ``knots`` are extra breakpoints given in t.
    """
    if profile.is_zero:
        return ZERO
    total = ZERO
    for piece in profile.pieces():
        t0, t1 = piece.t_range
        lo, hi = max(t0, clip[0]), min(t1, clip[1])
        if not lo < hi:
            continue
        y_lo = piece.lo if lo == t0 else float(piece.y_of(np.array(lo)))
        y_hi = piece.hi if hi == t1 else float(piece.y_of(np.array(hi)))
        if piece.to_t is not None and float(piece.t_of(np.array(piece.lo))) > float(piece.t_of(np.array(piece.hi))):
            # decreasing map: t0 corresponds to piece.hi
            y_lo = piece.hi if lo == t0 else float(piece.y_of(np.array(lo)))
            y_hi = piece.lo if hi == t1 else float(piece.y_of(np.array(hi)))
        ya, yb = min(y_lo, y_hi), max(y_lo, y_hi)
        pts = list(piece.knots) + [float(piece.y_of(np.array(k))) for k in knots if lo < k < hi]

        def G(y, piece=piece):
            return F(piece.t_of(y)) * np.abs(piece.dt(y))
        total = total + integrate(G, ya, yb, spec, [p for p in pts if ya < p < yb])
    return total


def _real(res: IntegralResult) -> Tuple[float, float]:
    return float(np.real(res.value)), float(res.error_estimate)


def _check_profile(profile: RadialProfile):
    if profile.boundary_class == FREE:
        raise PreconditionError(f"profile {profile.key} is not compactly supported away from the origin")


def _check_p(p):
    if not p > 1:
        raise ParameterError(f"p must exceed 1, got {p}")


def _anchor(profile: RadialProfile, logR: float):
    g, e = profile.values_log(np.array([logR]))
    return g[0], e[0]


def log_quotient(profile: RadialProfile, t, logR: float, eR, eps_u: float = EPS_U):
    """(g(r) - g(R)) / log(r/R), with its limit r g'(r)|_R near r = R."""
    u = t - logR
    small = np.abs(u) < eps_u
    d = profile.delta(t, logR)
    return np.where(small, eR, d / np.where(small, 1.0, u))


def log_tails(gR, profile: RadialProfile, logR: float, s: float, left=True, right=True) -> float:
    """Integral of |g(R)|^s / |u|^s du over the u-range outside the support."""
    a = abs(gR)
    if a == 0:
        return 0.0
    la, lb = profile.log_support
    out = 0.0
    ua, ub = la - logR, lb - logR
    if left and ua < 0:
        out += a ** s * (-ua) ** (1 - s) / (s - 1)
    if right and ub > 0:
        out += a ** s * ub ** (1 - s) / (s - 1)
    return out


def lh2_integrals(profile: RadialProfile, p: float, R: float, spec: QuadratureSpec = VERIFY_SPEC,
                  eps_u: float = EPS_U):
    """Return ((A, errA), (B, errB)) with A = int |delta/u|^p du (+ tails), B = int |r g'|^p dt."""
    logR = float(np.log(R))
    gR, eR = _anchor(profile, logR)

    def FA(t):
        return np.abs(log_quotient(profile, t, logR, eR, eps_u)) ** p

    def FB(t):
        return np.abs(profile.values_log(t)[1]) ** p
    A, eA = _real(integrate_profile(profile, FA, spec, knots=(logR,)))
    A += log_tails(gR, profile, logR, p)
    B, eB = _real(integrate_profile(profile, FB, spec))
    return (A, eA), (B, eB)


# ------------------------------------------------------------------ verifiers

def verify_lh2(case: InequalityCase, spec: QuadratureSpec = VERIFY_SPEC, tol_margin=DEFAULT_TOL_MARGIN,
               eps_u: float = EPS_U) -> VerificationResult:
    _check_p(case.p)
    _check_profile(case.profile)
    p, pc = case.p, case.p_conj
    (A, eA), (B, eB) = lh2_integrals(case.profile, p, case.R, spec, eps_u)
    lhs, rhs = A ** (1 / p), pc * B ** (1 / p)
    return make_result(case.theorem_id, case.params(), lhs, rhs, pc, root_error(A, eA, p),
                       pc * root_error(B, eB, p), tol_margin, extras={"lhs_p": A, "rhs_p": pc ** p * B})


def default_R_grid(profile: RadialProfile, n: int = 25) -> np.ndarray:
    a, b = profile.support
    return np.geomspace(a / 2, 2 * b, n)


def verify_lh2_sup(case: InequalityCase, R_grid: Optional[Sequence[float]] = None,
                   spec: QuadratureSpec = VERIFY_SPEC, tol_margin=DEFAULT_TOL_MARGIN) -> VerificationResult:
    _check_p(case.p)
    _check_profile(case.profile)
    grid = default_R_grid(case.profile) if R_grid is None else np.asarray(R_grid, dtype=float)
    if grid.size == 0:
        raise ConfigurationError("R_grid is empty")
    if np.any(grid <= 0):
        raise ConfigurationError("R_grid must be positive")
    p, pc = case.p, case.p_conj
    values = []
    B = eB = None
    for R in grid:
        (A, eA), (B, eB) = lh2_integrals(case.profile, p, float(R), spec)
        values.append((A, eA))
    A_all = np.array([v[0] for v in values])
    k = int(np.argmax(A_all))
    A, eA = values[k]
    lhs, rhs = A ** (1 / p), pc * B ** (1 / p)
    extras = {f"lhs_at_R[{i}]": float(v[0] ** (1 / p)) for i, v in enumerate(values)}
    return make_result("LH2_supR", case.params(), lhs, rhs, pc, root_error(A, eA, p), pc * root_error(B, eB, p),
                       tol_margin, R_at_sup=float(grid[k]), extras=extras)


def i_kernel(f_val, g_val, p: float):
    """The kernel I(f, g) = N(f, g) / |f - g|^2 with N the Young gap.

    At f = g (within 1e-14 relative) the radial limit (p-1)/2 |g|^(p-2) is
    returned.  Vectorised over array inputs.
    """
    _check_p(p)
    f = np.asarray(f_val, dtype=complex)
    g = np.asarray(g_val, dtype=complex)
    f, g = np.broadcast_arrays(f, g)
    scale = np.maximum(np.abs(f), np.abs(g))
    both0 = scale == 0
    # N is p-homogeneous, so work with unit-size arguments to avoid underflow
    s = np.where(both0, 1.0, scale)
    fs, gs = f / s, g / s
    diff = np.abs(fs - gs)
    same = diff <= 1e-14
    N = np.asarray(_kernels.young_gap(fs, gs, p), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = N / diff ** 2 * s ** (p - 2)
        lim = (p - 1) / 2 * np.abs(g) ** (p - 2)
    out = np.where(same, lim, out)
    if p < 2:
        out = np.where(both0, np.inf, out)
    elif p > 2:
        out = np.where(both0, 0.0, out)
    else:
        out = np.where(both0, 0.5, out)
    return out[()] if out.ndim == 0 else out


def remainder_identity(case: InequalityCase, spec: QuadratureSpec = VERIFY_SPEC,
                       eps_u: float = EPS_U) -> RemainderReport:
    """Evaluate both sides of the exact remainder identity for the radial case.

    term_u = ||u||^p, term_v = p'^p ||v||^p, term_rem = p int I(u, -p'v)|p'v + u|^2;
    after the radial reduction all three are Q-independent.
    """
    _check_p(case.p)
    _check_profile(case.profile)
    p, pc = case.p, case.p_conj
    prof = case.profile
    logR = case.logR
    gR, eR = _anchor(prof, logR)
    (A, eA), (B, eB) = lh2_integrals(prof, p, case.R, spec, eps_u)

    def FN(t):
        # u-side is delta / log(R/r) = -quotient
        ut = -log_quotient(prof, t, logR, eR, eps_u)
        e = prof.values_log(t)[1]
        return _kernels.young_gap(ut, -pc * e, p)
    rem, erem = _real(integrate_profile(prof, FN, spec, knots=(logR,)))
    tails = log_tails(gR, prof, logR, p)
    term_u = A
    term_v = pc ** p * B
    term_rem = p * rem + (p - 1) * tails
    extras = {}
    if p == 2:
        def FS(t):
            ut = -log_quotient(prof, t, logR, eR, eps_u)
            return np.abs(2 * prof.values_log(t)[1] + ut) ** 2
        S, _ = _real(integrate_profile(prof, FS, spec, knots=(logR,)))
        S += tails
        extras["norm_2v_plus_u_sq"] = S
        extras["p2_identity_residual"] = abs(term_u - (4 * B - S))
    return RemainderReport(case.params(), term_u, term_v, term_rem, abs(term_u - (term_v - term_rem)),
                           eA, pc ** p * eB, p * erem, extras)


def _power_integral(profile, F, spec, clip=(-np.inf, np.inf), knots=()):
    return _real(integrate_profile(profile, F, spec, clip, knots))


def _abs_pow_exp(x, s, k, t):
    """|x|^s * exp(k t) evaluated in log form to avoid overflow."""
    ax = np.abs(x)
    with np.errstate(divide="ignore"):
        return np.where(ax > 0, np.exp(s * np.log(np.where(ax > 0, ax, 1.0)) + k * t), 0.0)


def verify_uncertainty(case: InequalityCase, variant: str, spec: QuadratureSpec = VERIFY_SPEC,
                       tol_margin=DEFAULT_TOL_MARGIN) -> VerificationResult:
    _check_p(case.p)
    _check_profile(case.profile)
    p, pc, Q = case.p, case.p_conj, case.Q
    prof, logR = case.profile, case.logR
    gR, eR = _anchor(prof, logR)
    B, eB = _power_integral(prof, lambda t: np.abs(prof.values_log(t)[1]) ** p, spec)
    F1 = B ** (1 / p)
    eF1 = root_error(B, eB, p)
    if variant == "UP1":
        if not p > 2:
            raise ParameterError(f"UP1 needs p > 2 so that q = (1/2 - 1/p)^-1 > 1; got p={p}")
        q = 1.0 / (0.5 - 1.0 / p)
        if case.q is not None and abs(case.q - q) > 1e-12 * q:
            raise ParameterError(f"UP1 requires q = {q:.17g} for p = {p}, got {case.q}")
        G, eG = _power_integral(prof, lambda t: _abs_pow_exp(prof.values_log(t)[0], q, Q, t), spec)

        def FH(t):
            g = prof.values_log(t)[0]
            quo = log_quotient(prof, t, logR, eR)
            return _abs_pow_exp(g * quo, 2.0, Q * (1 - 2 / p), t)
        H, eH = _power_integral(prof, FH, spec, knots=(logR,))
        F2, eF2 = G ** (1 / q), root_error(G, eG, q)
        lhs, elhs = H ** 0.5 / pc, root_error(H, eH, 2) / pc
        params = dict(case.params(), q=q)
    elif variant == "UP2":
        Ap, eAp = _power_integral(prof, lambda t: np.abs(log_quotient(prof, t, logR, eR)) ** pc, spec,
                                  knots=(logR,))
        Ap += log_tails(gR, prof, logR, pc)
        A2, eA2 = _power_integral(prof, lambda t: np.abs(log_quotient(prof, t, logR, eR)) ** 2, spec,
                                  knots=(logR,))
        A2 += log_tails(gR, prof, logR, 2.0)
        F2, eF2 = Ap ** (1 / pc), root_error(Ap, eAp, pc)
        lhs, elhs = A2 / pc, eA2 / pc
        params = case.params()
    else:
        raise ConfigurationError(f"unknown uncertainty variant {variant!r}")
    rhs = F1 * F2
    return make_result(variant, params, lhs, rhs, 1 / pc, elhs, F1 * eF2 + F2 * eF1, tol_margin,
                       extras={"factor_grad": F1, "factor_second": F2})


def _inside_ball(case: InequalityCase):
    if case.profile.is_zero:
        return
    la, lb = case.profile.log_support
    if not lb < case.logR:
        raise PreconditionError(f"profile support must lie inside (0, R) with R={case.R}; "
                                f"support ends at {np.exp(lb):.6g}")


def verify_crit_log_hardy(case: InequalityCase, spec: QuadratureSpec = VERIFY_SPEC,
                          tol_margin=DEFAULT_TOL_MARGIN) -> VerificationResult:
    """int |g|^Q / r dr <= Q^Q int |log r|^Q |g'|^Q r^(Q-1) dr (power form)."""
    _check_profile(case.profile)
    _inside_ball(case)
    Q, prof = case.Q, case.profile
    L, eL = _power_integral(prof, lambda t: np.abs(prof.values_log(t)[0]) ** Q, spec)
    Rr, eR = _power_integral(prof, lambda t: np.abs(t * prof.values_log(t)[1]) ** Q, spec)
    C = Q ** Q
    params = dict(case.params(), p=Q)
    return make_result("CRITLOG", params, L, C * Rr, C, eL, C * eR, tol_margin,
                       extras={"rhs_integral": Rr})


def holder_equality_check(p: float, Q: float, r_grid) -> float:
    """Max relative gap between the two sides of the Hoelder equality for h = log r."""
    _check_p(p)
    r = np.asarray(r_grid, dtype=float)
    if np.any(r <= 0):
        raise ConfigurationError("grid radii must be positive")
    if np.any(r == 1.0):
        raise ConfigurationError("r = 1 makes both sides vanish")
    lg = np.abs(np.log(r))
    dh = 1.0 / r
    left = (dh * lg / r ** (Q / p - 1.0)) ** p
    right = (lg ** (p - 1.0) / r ** (Q * (p - 1.0) / p)) ** (p / (p - 1.0))
    return float(np.max(np.abs(left - right) / np.abs(right)))


def verify_ball_uncertainty(case: InequalityCase, spec: QuadratureSpec = VERIFY_SPEC,
                            tol_margin=DEFAULT_TOL_MARGIN) -> VerificationResult:
    _check_profile(case.profile)
    _inside_ball(case)
    Q, prof = case.Q, case.profile
    if not Q > 1:
        raise ParameterError(f"the quasi-ball uncertainty principle needs Q > 1, got {Q}")
    Qc = Q / (Q - 1)
    A, eA = _power_integral(prof, lambda t: np.abs(t * prof.values_log(t)[1]) ** Q, spec)
    G, eG = _power_integral(prof, lambda t: _abs_pow_exp(prof.values_log(t)[0], Qc, Qc + Q, t), spec)
    H, eH = _power_integral(prof, lambda t: _abs_pow_exp(prof.values_log(t)[0], 2.0, Q, t), spec)
    F1, F2 = A ** (1 / Q), G ** (1 / Qc)
    params = dict(case.params(), p=Q)
    return make_result("BALL_UP", params, H / Q, F1 * F2, 1 / Q, eH / Q,
                       F1 * root_error(G, eG, Qc) + F2 * root_error(A, eA, Q), tol_margin,
                       extras={"factor_grad": F1, "factor_second": F2})


def verify_hardy_sobolev(case: InequalityCase, part: str, spec: QuadratureSpec = VERIFY_SPEC,
                         tol_margin=DEFAULT_TOL_MARGIN) -> VerificationResult:
    """L^2 Hardy-Sobolev bounds on the ball of radius R (Q >= 3)."""
    _check_profile(case.profile)
    Q, R, prof, logR = case.Q, case.R, case.profile, case.logR
    if not Q >= 3:
        raise ParameterError(f"Hardy-Sobolev bounds need Q >= 3, got {Q}")
    ball = (-np.inf, logR)
    la, _ = prof.log_support
    gR, _ = _anchor(prof, logR)
    B, eB = _power_integral(prof, lambda t: _abs_pow_exp(prof.values_log(t)[1], 2.0, Q - 2, t), spec, ball)
    c1 = 2 / (Q - 2)
    grad = B ** 0.5
    egrad = root_error(B, eB, 2)
    params = dict(case.params(), p=2.0)
    if part == "a":
        A, eA = _power_integral(prof, lambda t: _abs_pow_exp(prof.delta(t, logR), 2.0, Q - 2, t), spec, ball)
        if gR != 0 and la < logR:
            # below the support g - g(R) = -g(R)
            A += abs(gR) ** 2 * np.exp((Q - 2) * la) / (Q - 2)
        return make_result("HS1a", params, A ** 0.5, c1 * grad, c1, root_error(A, eA, 2), c1 * egrad, tol_margin)
    if part == "b":
        H, eH = _power_integral(prof, lambda t: _abs_pow_exp(prof.values_log(t)[0], 2.0, Q - 2, t), spec, ball)
        M, eM = _power_integral(prof, lambda t: _abs_pow_exp(prof.values_log(t)[0], 2.0, Q, t), spec, ball)
        k = (Q / (Q - 2)) ** 0.5
        s1 = k / R * M ** 0.5
        s2 = c1 * (1 + k) * grad
        lhs = H ** 0.5
        extras = {"rhs_mass_term": s1, "rhs_gradient_term": s2,
                  "ratio_without_mass_term": (lhs / s2) if s2 > 0 else 0.0}
        return make_result("HS1b", params, lhs, s1 + s2, c1 * (1 + k), root_error(H, eH, 2),
                           k / R * root_error(M, eM, 2) + c1 * (1 + k) * egrad, tol_margin, extras=extras)
    raise ConfigurationError(f"unknown Hardy-Sobolev part {part!r}")


def verify_q2(case: InequalityCase, part: str, spec: QuadratureSpec = VERIFY_SPEC,
              tol_margin=DEFAULT_TOL_MARGIN) -> VerificationResult:
    """The Q = 2 logarithmic bounds on the ball of radius R."""
    _check_profile(case.profile)
    if case.Q != 2:
        raise ParameterError(f"these bounds need Q = 2, got {case.Q}")
    R, prof, logR = case.R, case.profile, case.logR
    ball = (-np.inf, logR)
    gR, eR = _anchor(prof, logR)
    B, eB = _power_integral(prof, lambda t: np.abs(prof.values_log(t)[1]) ** 2, spec, ball)
    grad, egrad = B ** 0.5, root_error(B, eB, 2)
    params = dict(case.params(), p=2.0)
    if part == "a":
        A, eA = _power_integral(prof, lambda t: np.abs(log_quotient(prof, t, logR, eR)) ** 2, spec, ball,
                                knots=(logR,))
        A += log_tails(gR, prof, logR, 2.0, right=False)
        return make_result("Q2a", params, A ** 0.5, 2 * grad, 2.0, root_error(A, eA, 2), 2 * egrad, tol_margin)
    if part == "b":
        def weighted(log_power):
            def F(t):
                L = np.abs(logR - t)
                w = (1 + L ** log_power) ** 2
                return np.abs(prof.values_log(t)[0]) ** 2 / w
            return F
        H, eH = _power_integral(prof, weighted(1), spec, ball)
        Hd, _ = _power_integral(prof, weighted(2), spec, ball)
        M, eM = _power_integral(prof, lambda t: _abs_pow_exp(prof.values_log(t)[0], 2.0, 2.0, t), spec, ball)
        s1 = 2 ** 0.5 / R * M ** 0.5
        s2 = 2 * (1 + 2 ** 0.5) * grad
        extras = {"rhs_mass_term": s1, "rhs_gradient_term": s2, "lhs_squared_log_weight": Hd ** 0.5,
                  "ratio_squared_log_weight": (Hd ** 0.5 / (s1 + s2)) if s1 + s2 > 0 else 0.0}
        return make_result("Q2b", params, H ** 0.5, s1 + s2, 2 * (1 + 2 ** 0.5), root_error(H, eH, 2),
                           2 ** 0.5 / R * root_error(M, eM, 2) + 2 * (1 + 2 ** 0.5) * egrad, tol_margin,
                           extras=extras)
    raise ConfigurationError(f"unknown Q=2 part {part!r}")


def verify_classical_hardy(case: InequalityCase, spec: QuadratureSpec = VERIFY_SPEC,
                           tol_margin=DEFAULT_TOL_MARGIN) -> VerificationResult:
    _check_profile(case.profile)
    p, Q, prof = case.p, case.Q, case.profile
    _check_p(p)
    if not p < Q:
        raise ParameterError(f"the subcritical Hardy inequality needs 1 < p < Q, got p={p}, Q={Q}")
    A, eA = _power_integral(prof, lambda t: _abs_pow_exp(prof.values_log(t)[0], p, Q - p, t), spec)
    B, eB = _power_integral(prof, lambda t: _abs_pow_exp(prof.values_log(t)[1], p, Q - p, t), spec)
    C = p / (Q - p)
    return make_result("CLASSICAL_LP", case.params(), A ** (1 / p), C * B ** (1 / p), C,
                       root_error(A, eA, p), C * root_error(B, eB, p), tol_margin)


def verify_edmunds_triebel(case: InequalityCase, spec: QuadratureSpec = VERIFY_SPEC,
                           tol_margin=DEFAULT_TOL_MARGIN) -> VerificationResult:
    """Critical Hardy bound on the unit ball with the 1 + log(1/r) weight (n = Q)."""
    _check_profile(case.profile)
    n, prof = case.Q, case.profile
    if case.weights is not None and any(w != 1 for w in case.weights):
        raise ConfigurationError("this bound is stated for unit dilation weights only")
    if n != int(n) or n < 2:
        raise ConfigurationError(f"need an integer dimension n >= 2, got {n}")
    _, lb = prof.log_support
    if not prof.is_zero and not lb < 0:
        raise PreconditionError("profile support must lie inside the unit ball")
    A, eA = _power_integral(prof, lambda t: np.abs(prof.values_log(t)[0] / (1.0 - t)) ** n, spec)
    B, eB = _power_integral(prof, lambda t: np.abs(prof.values_log(t)[1]) ** n, spec)
    C = n / (n - 1)
    params = dict(case.params(), p=n)
    return make_result("EDMUNDS_TRIEBEL", params, A ** (1 / n), C * B ** (1 / n), C,
                       root_error(A, eA, n), C * root_error(B, eB, n), tol_margin)


def verify(case: InequalityCase, spec: QuadratureSpec = VERIFY_SPEC, tol_margin=DEFAULT_TOL_MARGIN):
    """Dispatch on ``case.theorem_id``; EQ_REM returns a RemainderReport."""
    tid = case.theorem_id
    if tid == "LH2":
        return verify_lh2(case, spec, tol_margin)
    if tid == "LH2_supR":
        return verify_lh2_sup(case, None, spec, tol_margin)
    if tid == "EQ_REM":
        return remainder_identity(case, spec)
    if tid in ("UP1", "UP2"):
        return verify_uncertainty(case, tid, spec, tol_margin)
    if tid == "CRITLOG":
        return verify_crit_log_hardy(case, spec, tol_margin)
    if tid == "BALL_UP":
        return verify_ball_uncertainty(case, spec, tol_margin)
    if tid in ("HS1a", "HS1b"):
        return verify_hardy_sobolev(case, tid[-1], spec, tol_margin)
    if tid in ("Q2a", "Q2b"):
        return verify_q2(case, tid[-1], spec, tol_margin)
    if tid == "CLASSICAL_LP":
        return verify_classical_hardy(case, spec, tol_margin)
    return verify_edmunds_triebel(case, spec, tol_margin)
