"""Hot elementwise kernels with a numba path and a pure-numpy fallback.

The backend is chosen once at import time from ``HARDY_BENCH_BACKEND``
(``numba`` or ``numpy``; default ``numba`` when numba imports cleanly).
Both implementations stay reachable as ``NUMPY`` and ``NUMBA`` so tests and
the benchmark can compare them directly.
"""
import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

# Gauss-Kronrod 21/10 abscissae on [-1, 1] (positive half, descending) and weights.
GK21_NODES = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
])
GK21_NODES = np.concatenate([GK21_NODES, -GK21_NODES[-2::-1]])
GK21_KRONROD = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
GK21_KRONROD = np.concatenate([GK21_KRONROD, GK21_KRONROD[-2::-1]])
_G10 = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
GK21_GAUSS = np.zeros(21)
GK21_GAUSS[1:10:2] = _G10
GK21_GAUSS[11:20:2] = _G10[::-1]

_EPS = np.finfo(float).eps
# below this distance from 1 the Young gap uses its Taylor series
_SERIES_CUTOFF = 1e-3


# ---------------------------------------------------------------- numpy path

def _np_smooth_step(x):
    x = np.asarray(x, dtype=float)
    s = np.where(x >= 1.0, 1.0, 0.0)
    ds = np.zeros_like(x)
    inside = (x > 0.0) & (x < 1.0)
    if np.any(inside):
        xi = x[inside]
        z = 1.0 / (1.0 - xi) - 1.0 / xi
        with np.errstate(over="ignore"):
            e = np.exp(-np.abs(z))
        s_in = np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
        zp = 1.0 / (1.0 - xi) ** 2 + 1.0 / xi ** 2
        with np.errstate(over="ignore", invalid="ignore"):
            ds_in = zp * e / (1.0 + e) ** 2
        s[inside] = s_in
        ds[inside] = np.where(np.isfinite(ds_in), ds_in, 0.0)
    return s, ds


def _np_bump(r, a, b):
    r = np.asarray(r, dtype=float)
    q = (r - a) * (b - r)
    pos = q > 0
    qs = np.where(pos, q, 1.0)
    with np.errstate(under="ignore"):
        g = np.where(pos, np.exp(-1.0 / qs), 0.0)
        dg = np.where(g > 0, g * (a + b - 2.0 * r) / (qs * qs), 0.0)
    return g, dg


def _np_young_gap(f, w, p):
    f = np.asarray(f)
    w = np.asarray(w)
    f, w = np.broadcast_arrays(f, w)
    a = np.abs(f)
    b = np.abs(w)
    out = np.empty(a.shape)
    fz = a == 0
    wz = (b == 0) & ~fz
    gen = ~(fz | wz)
    out[fz] = b[fz] ** p / p
    out[wz] = (p - 1.0) / p * a[wz] ** p
    if np.any(gen):
        ag, bg = a[gen], b[gen]
        t = bg / ag
        d = np.where(np.abs(t - 1.0) < _SERIES_CUTOFF, t - 1.0, 0.0)
        series = (p - 1.0) * d * d * (0.5 + d * ((p - 2.0) / 6.0 + d * (p - 2.0) * (p - 3.0) / 24.0))
        # without the ratio t, so that |w| >> |f| cannot overflow
        with np.errstate(over="ignore", invalid="ignore"):
            direct = bg ** p / p - ag ** (p - 1.0) * bg + (p - 1.0) / p * ag ** p
        radial = np.maximum(np.where(np.abs(t - 1.0) < _SERIES_CUTOFF, ag ** p * series, direct), 0.0)
        diff2 = np.abs(f[gen] - w[gen]) ** 2
        ang = np.maximum(0.5 * (diff2 - (ag - bg) ** 2), 0.0)
        out[gen] = radial + ag ** (p - 2.0) * ang
    return out


def _np_gk21_panels(fx, half_widths):
    k = fx @ GK21_KRONROD
    g = fx @ GK21_GAUSS
    mean = k / 2.0
    resasc = np.abs(fx - mean[:, None]) @ GK21_KRONROD
    resabs = np.abs(fx) @ GK21_KRONROD
    hw = np.abs(half_widths)
    return k * half_widths, g * half_widths, resabs * hw, resasc * hw


def _np_sum_moments(values):
    values = np.asarray(values, dtype=float)
    return float(np.sum(values)), float(np.sum(values * values))


def _np_bump_angular(x, a, b):
    rho = np.sqrt(np.sum(x * x, axis=1))
    safe = np.where(rho > 0, rho, 1.0)
    g, dg = _np_bump(rho, a, b)
    c = x[:, 0] / safe
    f = g * c
    grad = (dg * c / safe)[:, None] * x - (g * x[:, 0] / safe ** 3)[:, None] * x
    grad[:, 0] += g / safe
    grad[rho == 0] = 0.0
    f[rho == 0] = 0.0
    return f, grad


# ---------------------------------------------------------------- numba path

if numba is not None:
    _jit = numba.njit(cache=True, nogil=True)

    @_jit
    def _nb_smooth_step(x):
        n = x.size
        s = np.empty(n)
        ds = np.empty(n)
        for i in range(n):
            xi = x[i]
            if xi <= 0.0:
                s[i] = 0.0
                ds[i] = 0.0
            elif xi >= 1.0:
                s[i] = 1.0
                ds[i] = 0.0
            else:
                z = 1.0 / (1.0 - xi) - 1.0 / xi
                e = np.exp(-abs(z))
                if z >= 0:
                    s[i] = 1.0 / (1.0 + e)
                else:
                    s[i] = e / (1.0 + e)
                d = (1.0 / (1.0 - xi) ** 2 + 1.0 / xi ** 2) * e / (1.0 + e) ** 2
                ds[i] = d if np.isfinite(d) else 0.0
        return s, ds

    @_jit
    def _nb_bump(r, a, b):
        n = r.size
        g = np.zeros(n)
        dg = np.zeros(n)
        for i in range(n):
            q = (r[i] - a) * (b - r[i])
            if q > 0.0:
                gi = np.exp(-1.0 / q)
                g[i] = gi
                if gi > 0.0:
                    dg[i] = gi * (a + b - 2.0 * r[i]) / (q * q)
        return g, dg

    @_jit
    def _nb_young_gap(f, w, p):
        n = f.size
        out = np.empty(n)
        for i in range(n):
            a = abs(f[i])
            b = abs(w[i])
            if a == 0.0:
                out[i] = b ** p / p
            elif b == 0.0:
                out[i] = (p - 1.0) / p * a ** p
            else:
                t = b / a
                d = t - 1.0
                if abs(d) < 1e-3:
                    rad = a ** p * (p - 1.0) * d * d * (0.5 + d * ((p - 2.0) / 6.0 + d * (p - 2.0) * (p - 3.0) / 24.0))
                else:
                    rad = b ** p / p - a ** (p - 1.0) * b + (p - 1.0) / p * a ** p
                if rad < 0.0:
                    rad = 0.0
                diff2 = abs(f[i] - w[i]) ** 2
                ang = 0.5 * (diff2 - (a - b) ** 2)
                if ang < 0.0:
                    ang = 0.0
                out[i] = rad + a ** (p - 2.0) * ang
        return out

    @_jit
    def _nb_gk21_panels(fx, half_widths, wk, wg):
        m = fx.shape[0]
        k = np.zeros(m, dtype=fx.dtype)
        g = np.zeros(m, dtype=fx.dtype)
        resabs = np.zeros(m)
        resasc = np.zeros(m)
        for i in range(m):
            ki = fx[i, 0] * 0.0
            gi = fx[i, 0] * 0.0
            ra = 0.0
            for j in range(21):
                ki += wk[j] * fx[i, j]
                gi += wg[j] * fx[i, j]
                ra += wk[j] * abs(fx[i, j])
            mean = ki / 2.0
            rs = 0.0
            for j in range(21):
                rs += wk[j] * abs(fx[i, j] - mean)
            hw = half_widths[i]
            k[i] = ki * hw
            g[i] = gi * hw
            resabs[i] = ra * abs(hw)
            resasc[i] = rs * abs(hw)
        return k, g, resabs, resasc

    @_jit
    def _nb_sum_moments(values):
        # Kahan-compensated sums
        s = 0.0
        cs = 0.0
        q = 0.0
        cq = 0.0
        for i in range(values.size):
            v = values[i]
            y = v - cs
            t = s + y
            cs = (t - s) - y
            s = t
            y2 = v * v - cq
            t2 = q + y2
            cq = (t2 - q) - y2
            q = t2
        return s, q

    @_jit
    def _nb_bump_angular(x, a, b):
        npts, dim = x.shape
        f = np.zeros(npts)
        grad = np.zeros((npts, dim))
        for i in range(npts):
            rho2 = 0.0
            for j in range(dim):
                rho2 += x[i, j] * x[i, j]
            rho = np.sqrt(rho2)
            if rho == 0.0:
                continue
            q = (rho - a) * (b - rho)
            if q <= 0.0:
                continue
            g = np.exp(-1.0 / q)
            if g == 0.0:
                continue
            dg = g * (a + b - 2.0 * rho) / (q * q)
            c = x[i, 0] / rho
            f[i] = g * c
            for j in range(dim):
                grad[i, j] = dg * c * x[i, j] / rho - g * x[i, 0] * x[i, j] / rho ** 3
            grad[i, 0] += g / rho
        return f, grad


def _flat(fn):
    # numba kernels take 1-D contiguous arrays; restore the caller's shape
    def wrapper(x, *args):
        x = np.asarray(x, dtype=float)
        out = fn(np.ascontiguousarray(x.ravel()), *args)
        return tuple(o.reshape(x.shape) for o in out)
    return wrapper


def _young_gap_nb(f, w, p):
    f = np.asarray(f)
    w = np.asarray(w)
    f, w = np.broadcast_arrays(f, w)
    shape = f.shape
    fc = np.ascontiguousarray(f.ravel().astype(complex))
    wc = np.ascontiguousarray(w.ravel().astype(complex))
    return _nb_young_gap(fc, wc, float(p)).reshape(shape)


def _gk21_nb(fx, half_widths):
    fx = np.ascontiguousarray(fx)
    if not np.iscomplexobj(fx):
        fx = fx.astype(float)
    return _nb_gk21_panels(fx, np.ascontiguousarray(half_widths, dtype=float), GK21_KRONROD, GK21_GAUSS)


def _bump_nb(r, a, b):
    r = np.asarray(r, dtype=float)
    g, dg = _nb_bump(np.ascontiguousarray(r.ravel()), float(a), float(b))
    return g.reshape(r.shape), dg.reshape(r.shape)


NUMPY = SimpleNamespace(
    name="numpy",
    smooth_step=_np_smooth_step,
    bump=_np_bump,
    young_gap=_np_young_gap,
    gk21_panels=_np_gk21_panels,
    sum_moments=_np_sum_moments,
    bump_angular=_np_bump_angular,
)

if numba is not None:
    NUMBA = SimpleNamespace(
        name="numba",
        smooth_step=_flat(_nb_smooth_step),
        bump=_bump_nb,
        young_gap=_young_gap_nb,
        gk21_panels=_gk21_nb,
        sum_moments=lambda v: _nb_sum_moments(np.ascontiguousarray(v, dtype=float).ravel()),
        bump_angular=lambda x, a, b: _nb_bump_angular(np.ascontiguousarray(x, dtype=float), float(a), float(b)),
    )
else:  # pragma: no cover
    NUMBA = None


def _select():
    requested = os.environ.get("HARDY_BENCH_BACKEND", "numba").strip().lower()
    if requested not in ("numba", "numpy"):
        raise ValueError(f"HARDY_BENCH_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and NUMBA is not None:
        return NUMBA
    return NUMPY


ACTIVE = _select()
BACKEND = ACTIVE.name

smooth_step = ACTIVE.smooth_step
bump = ACTIVE.bump
young_gap = ACTIVE.young_gap
gk21_panels = ACTIVE.gk21_panels
sum_moments = ACTIVE.sum_moments
bump_angular = ACTIVE.bump_angular
