"""Full-gradient checks on R^n with box quadrature or seeded Monte Carlo.

Test functions are supported in an annulus a < |x| < b so every integrand
with negative powers of |x| vanishes near the origin.
"""
from dataclasses import dataclass
from math import gamma, pi
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from . import _kernels
from .errors import ConfigurationError, DomainError
from .group import GroupSpec, dilate
from .inequalities import DEFAULT_TOL_MARGIN, VerificationResult, make_result
from .profiles import RadialProfile
from .quadrature import IntegralResult

MC_CHUNK = 1 << 16


def sphere_measure(n: int) -> float:
    """Surface measure of the Euclidean unit sphere in R^n."""
    return 2 * pi ** (n / 2) / gamma(n / 2)


@dataclass(frozen=True)
class TensorGauss:
    order: int = 10
    panels: int = 32

    def __str__(self):
        return f"tensor-gauss:{self.order}:{self.panels}"


@dataclass(frozen=True)
class MonteCarlo:
    samples: int = 10 ** 6
    seed: int = 42

    def __str__(self):
        return f"monte-carlo:{self.samples}:{self.seed}"


Method = Union[TensorGauss, MonteCarlo]


def parse_method(text: str) -> Method:
    """'tensor-gauss[:order[:panels]]' or 'monte-carlo[:samples[:seed]]'."""
    kind, *args = text.strip().split(":")
    try:
        if kind == "tensor-gauss":
            return TensorGauss(*(int(float(a)) for a in args))
        if kind == "monte-carlo":
            return MonteCarlo(*(int(float(a)) for a in args))
    except (TypeError, ValueError):
        raise ConfigurationError(f"bad integration method {text!r}") from None
    raise ConfigurationError(f"unknown integration method {text!r}")


@dataclass(frozen=True)
class CartesianTestFunction:
    """f: (N, n) -> (N,), grad: (N, n) -> (N, n), both from one call ``fg``."""
    name: str
    n: int
    fg: Callable
    radial_support: Tuple[float, float]
    radial: bool = False

    @property
    def box(self) -> np.ndarray:
        b = self.radial_support[1]
        return np.array([[-b, b]] * self.n)

    def f(self, x):
        return self.fg(x)[0]

    def grad(self, x):
        return self.fg(x)[1]


def radial_bump(a: float, b: float, n: int = 2) -> CartesianTestFunction:
    def fg(x):
        x = np.asarray(x, dtype=float)
        rho = np.sqrt(np.sum(x * x, axis=1))
        g, dg = _kernels.bump(rho, a, b)
        safe = np.where(rho > 0, rho, 1.0)
        return g, (dg / safe)[:, None] * x
    return CartesianTestFunction(f"bump-radial:{a:g},{b:g}", n, fg, (a, b), radial=True)


def from_profile(profile: RadialProfile, n: int = 2) -> CartesianTestFunction:
    """f(x) = g(|x|) for a compactly supported real profile."""
    def fg(x):
        x = np.asarray(x, dtype=float)
        rho = np.sqrt(np.sum(x * x, axis=1))
        safe = np.where(rho > 0, rho, 1.0)
        g, e = profile.values_log(np.log(safe))
        g = np.where(rho > 0, np.real(g), 0.0)
        e = np.where(rho > 0, np.real(e), 0.0)
        return g, (e / safe ** 2)[:, None] * x
    return CartesianTestFunction(f"radial[{profile.key}]", n, fg, profile.support, radial=True)


def bump_angular(a: float, b: float, n: int = 2) -> CartesianTestFunction:
    """Non-radial f(x) = bump(|x|) * x1/|x|."""
    return CartesianTestFunction(f"bump-angular:{a:g},{b:g}", n,
                                 lambda x: _kernels.bump_angular(x, a, b), (a, b))


FUNCTIONS = {"bump-angular": bump_angular, "bump-radial": radial_bump}


def make_function(name: str, n: int, a: float = 0.2, b: float = 0.8) -> CartesianTestFunction:
    if name not in FUNCTIONS:
        raise ConfigurationError(f"unknown test function {name!r}; expected one of {sorted(FUNCTIONS)}")
    return FUNCTIONS[name](a, b, n)


# ----------------------------------------------------------------- integration

def _gauss_nodes(lo, hi, order, panels):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    c = 0.5 * (edges[:-1] + edges[1:])
    h = 0.5 * (edges[1:] - edges[:-1])
    return (c[:, None] + h[:, None] * x).ravel(), (h[:, None] * w).ravel()


def _tensor(integrand, box, order, panels):
    n = box.shape[0]
    nodes = [_gauss_nodes(box[k, 0], box[k, 1], order, panels) for k in range(n)]
    # iterate over the first axis in blocks, full tensor on the rest
    rest = np.stack(np.meshgrid(*[nd[0] for nd in nodes[1:]], indexing="ij"), axis=-1).reshape(-1, n - 1) \
        if n > 1 else np.zeros((1, 0))
    wrest = np.ones(1)
    for nd in nodes[1:]:
        wrest = np.outer(wrest, nd[1]).ravel()
    total = None
    x0, w0 = nodes[0]
    block = max(1, (1 << 18) // max(1, rest.shape[0]))
    for i in range(0, x0.size, block):
        xs, ws = x0[i:i + block], w0[i:i + block]
        pts = np.concatenate([np.repeat(xs, rest.shape[0])[:, None], np.tile(rest, (xs.size, 1))], axis=1)
        vals = np.asarray(integrand(pts))
        wts = np.outer(ws, wrest).ravel()
        part = np.tensordot(wts, vals, axes=(0, 0))
        total = part if total is None else total + part
    return total


def _mc(integrand, box, samples, seed):
    n = box.shape[0]
    lo, width = box[:, 0], box[:, 1] - box[:, 0]
    vol = float(np.prod(width))
    nchunks = -(-samples // MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(nchunks)
    s = sq = None
    squeeze = False
    for i, child in enumerate(children):
        m = min(MC_CHUNK, samples - i * MC_CHUNK)
        rng = np.random.default_rng(child)
        x = lo + width * rng.random((m, n))
        vals = np.asarray(integrand(x), dtype=float)
        squeeze = vals.ndim == 1
        vals2 = vals.reshape(m, -1)
        moments = [_kernels.sum_moments(vals2[:, k]) for k in range(vals2.shape[1])]
        cs = np.array([mm[0] for mm in moments])
        cq = np.array([mm[1] for mm in moments])
        s = cs if s is None else s + cs
        sq = cq if sq is None else sq + cq
    mean = s / samples
    var = np.maximum(sq / samples - mean * mean, 0.0)
    value = vol * mean
    sigma = vol * np.sqrt(var / samples)
    if squeeze:
        return value[0], sigma[0]
    return value, sigma


def integrate_box(integrand: Callable, box, method: Method = TensorGauss(),
                  singular_at_origin: bool = False, exclusion_radius: float = 0.0) -> IntegralResult:
    """Integrate ``integrand(points (N, n))`` over an axis-aligned box.

    Tensor Gauss returns the refined value with |I(2P) - I(P)| as its error;
    Monte Carlo returns the 1-sigma standard error.  Vector-valued
    integrands (N, k) give array values.
    """
    box = np.asarray(box, dtype=float)
    if box.ndim != 2 or box.shape[1] != 2 or np.any(box[:, 1] <= box[:, 0]):
        raise ConfigurationError("box must be a list of (lo, hi) pairs with lo < hi")
    n = box.shape[0]
    origin_inside = bool(np.all((box[:, 0] <= 0) & (box[:, 1] >= 0)))
    if singular_at_origin and origin_inside and not exclusion_radius > 0:
        raise DomainError("the integrand is singular at the origin, which lies in the box")
    if isinstance(method, TensorGauss):
        if n > 4:
            raise ConfigurationError("tensor Gauss quadrature is limited to n <= 4")
        coarse = _tensor(integrand, box, method.order, method.panels)
        fine = _tensor(integrand, box, method.order, 2 * method.panels)
        err = np.abs(fine - coarse)
        return IntegralResult(fine, err, 2 * method.panels)
    if isinstance(method, MonteCarlo):
        if method.samples < 2:
            raise ConfigurationError("Monte Carlo needs at least two samples")
        value, sigma = _mc(integrand, box, int(method.samples), int(method.seed))
        return IntegralResult(value, sigma, int(method.samples))
    raise ConfigurationError(f"unsupported integration method {method!r}")


# ------------------------------------------------------------------ verifiers

def _euclid(v):
    # scaled so that squares of tiny components do not underflow
    m = np.max(np.abs(v), axis=1)
    safe = np.where(m > 0, m, 1.0)
    return m * np.sqrt(np.sum((v / safe[:, None]) ** 2, axis=1))


def _norms(parts, p):
    return np.abs(parts) ** (1.0 / p)


def _root_err(I, e, p):
    I = np.maximum(np.abs(I), 1e-300)
    return e / p * I ** (1.0 / p - 1.0)


def _pass(ratio, sigma_ratio, tol_margin, stochastic):
    slack = 3 * sigma_ratio if stochastic else 0.0
    return bool(ratio <= 1 + tol_margin + slack)


def verify_lh2_fullgrad(f: CartesianTestFunction, p: float, R: float, method: Method = TensorGauss(),
                        tol_margin: float = DEFAULT_TOL_MARGIN) -> VerificationResult:
    """Both links of the chain LHS <= p'||.. x/|x| . grad f|| <= p'||.. |grad f|||."""
    if not p > 1:
        raise ConfigurationError(f"p must exceed 1, got {p}")
    n = f.n
    a, b = f.radial_support
    if a < R < b:
        raise DomainError("the trace f(R x/|x|) must vanish: choose R outside the support annulus")
    pc = p / (p - 1)

    def integrand(x):
        rho = np.sqrt(np.sum(x * x, axis=1))
        safe = np.where(rho > 0, rho, 1.0)
        val, grad = f.fg(x)
        fR, _ = f.fg(x * (R / safe)[:, None])
        radial_dir = np.abs(np.sum(grad * x, axis=1) / safe)
        full = _euclid(grad)
        logw = np.abs(np.log(R / safe))
        w = safe ** (1 - n / p)
        lhs = np.where(rho > 0, np.abs(val - fR) ** p / (safe ** n * logw ** p), 0.0)
        return np.stack([lhs, (w * radial_dir) ** p, (w * full) ** p], axis=1)

    res = integrate_box(integrand, f.box, method, singular_at_origin=True, exclusion_radius=a)
    I, E = np.asarray(res.value), np.asarray(res.error_estimate)
    lhs, r1, r2 = (float(v) for v in _norms(I, p))
    el, e1, e2 = (float(v) for v in _root_err(I, E, p))
    rhs1, rhs2 = pc * r1, pc * r2
    stochastic = isinstance(method, MonteCarlo)
    out = make_result("LH2_RN", {"p": p, "n": n, "R": R, "function": f.name, "method": str(method)},
                      lhs, rhs1, pc, el, pc * e1, tol_margin)
    s1 = out.ratio * (el / max(lhs, 1e-300) + e1 / max(r1, 1e-300))
    chain = rhs1 / rhs2 if rhs2 > 0 else 0.0
    s2 = chain * (e1 / max(r1, 1e-300) + e2 / max(r2, 1e-300))
    pass1 = _pass(out.ratio, s1, tol_margin, stochastic)
    pass2 = _pass(chain, s2, tol_margin, stochastic)
    out.passed = pass1 and pass2
    out.extras.update({"rhs_full_gradient": rhs2, "err_rhs_full_gradient": pc * e2, "pass_radial_direction": pass1,
                       "pass_full_gradient": pass2, "ratio_sigma": s1, "chain_ratio": chain})
    return out


def verify_ckn_fullgrad(f: CartesianTestFunction, R: Optional[float] = None, method: Method = TensorGauss(),
                        tol_margin: float = DEFAULT_TOL_MARGIN) -> VerificationResult:
    """||f/|x|||_n <= n ||log|x| grad f||_n, and the radial-direction form on B(0, R)."""
    n = f.n
    a, b = f.radial_support
    if R is None:
        R = max(1.0, 2 * b)
    if not b < R:
        raise DomainError("the support must lie inside the ball B(0, R)")

    def integrand(x):
        rho = np.sqrt(np.sum(x * x, axis=1))
        safe = np.where(rho > 0, rho, 1.0)
        val, grad = f.fg(x)
        lg = np.abs(np.log(safe))
        radial_dir = np.abs(np.sum(grad * x, axis=1) / safe)
        full = _euclid(grad)
        lhs = np.where(rho > 0, np.abs(val / safe) ** n, 0.0)
        return np.stack([lhs, (lg * radial_dir) ** n, (lg * full) ** n], axis=1)

    res = integrate_box(integrand, f.box, method, singular_at_origin=True, exclusion_radius=a)
    I, E = np.asarray(res.value), np.asarray(res.error_estimate)
    lhs, r1, r2 = (float(v) for v in _norms(I, n))
    el, e1, e2 = (float(v) for v in _root_err(I, E, n))
    stochastic = isinstance(method, MonteCarlo)
    out = make_result("CKN", {"n": n, "R": R, "function": f.name, "method": str(method)},
                      lhs, n * r2, n, el, n * e2, tol_margin)
    ratio_r = lhs / (n * r1) if r1 > 0 else 0.0
    s_full = out.ratio * (el / max(lhs, 1e-300) + e2 / max(r2, 1e-300))
    s_r = ratio_r * (el / max(lhs, 1e-300) + e1 / max(r1, 1e-300))
    pass_full = _pass(out.ratio, s_full, tol_margin, stochastic)
    pass_r = _pass(ratio_r, s_r, tol_margin, stochastic)
    out.passed = pass_full and pass_r
    out.extras.update({"rhs_radial_direction": n * r1, "ratio_radial_direction": ratio_r,
                       "pass_full_gradient": pass_full, "pass_radial_direction": pass_r,
                       "ratio_sigma": s_full, "lhs_power": float(I[0]), "rhs_radial_power": float(I[1])})
    return out


def cauchy_schwarz_check(f: CartesianTestFunction, samples: int = 10 ** 5, seed: int = 0) -> Tuple[bool, float]:
    """|x/|x| . grad f| <= |grad f| at random points of the support box."""
    rng = np.random.default_rng(seed)
    box = f.box
    x = box[:, 0] + (box[:, 1] - box[:, 0]) * rng.random((samples, f.n))
    _, grad = f.fg(x)
    rho = np.sqrt(np.sum(x * x, axis=1))
    radial_dir = np.abs(np.sum(grad * x, axis=1) / rho)
    full = _euclid(grad)
    # relative rounding plus a floor for subnormal gradients
    slack = 4 * f.n * np.finfo(float).eps * np.sum(np.abs(grad), axis=1) + np.finfo(float).tiny
    excess = radial_dir - full - slack
    return bool(np.all(excess <= 0)), float(np.max(radial_dir - full))


def dilation_scaling(F: Callable, group: GroupSpec, lam: float, box, method: Method = TensorGauss()):
    """Return (integral of F(D_lam x), integral of F(x), their ratio, lam**-Q)."""
    box = np.asarray(box, dtype=float)
    if box.shape[0] != group.n:
        raise ConfigurationError("box dimension does not match the group")
    scaled = integrate_box(lambda x: F(dilate(group, lam, x)), box, method)
    base = integrate_box(F, box, method)
    return float(scaled.value), float(base.value), float(scaled.value / base.value), lam ** (-group.Q)
