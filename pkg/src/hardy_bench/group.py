"""Homogeneous groups in exponential coordinates: dilations and quasi-norms.

Only the dilation structure and the inverse map are modelled.  The group
law itself is never needed by the inequalities checked here.
"""
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, DomainError, InvalidGroupError, ShapeError

QUASI_NORM_KINDS = ("euclidean", "weighted-max", "weighted-power", "koranyi")


@dataclass(frozen=True)
class GroupSpec:
    weights: Tuple[float, ...]
    Q: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "Q", float(sum(self.weights)))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def is_isotropic(self) -> bool:
        return all(w == 1 for w in self.weights)


@dataclass(frozen=True)
class QuasiNormSpec:
    kind: str
    parameters: Tuple[float, ...] = ()

    def __str__(self):
        if self.kind == "weighted-power":
            return f"weighted-power:{self.parameters[0]:g}"
        return self.kind


def make_group(weights: Sequence[float]) -> GroupSpec:
    """Build a group from its dilation weights; Q is their sum."""
    ws = tuple(float(w) for w in weights)
    if not ws:
        raise InvalidGroupError("a homogeneous group needs at least one dilation weight")
    if any(not np.isfinite(w) or w <= 0 for w in ws):
        raise InvalidGroupError(f"dilation weights must be positive and finite, got {ws}")
    return GroupSpec(ws)


def group_with_dimension(Q: float) -> GroupSpec:
    """A convenient abelian group of homogeneous dimension Q.

    Integer Q gives the isotropic R^Q; a fractional part is carried by one
    extra coordinate of weight ``1 + frac`` so every weight stays >= 1.
    """
    if Q <= 0:
        raise InvalidGroupError(f"homogeneous dimension must be positive, got {Q}")
    whole = int(np.floor(Q))
    frac = Q - whole
    if frac == 0:
        return make_group([1.0] * whole)
    if whole == 0:
        return make_group([Q])
    return make_group([1.0] * (whole - 1) + [1.0 + frac])


def parse_quasi_norm(text: str) -> QuasiNormSpec:
    text = text.strip().strip('"').strip("'")
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind not in QUASI_NORM_KINDS:
        raise ConfigurationError(f"unknown quasi-norm {text!r}; expected one of {QUASI_NORM_KINDS}")
    if kind == "weighted-power":
        if not arg:
            raise ConfigurationError("weighted-power needs an exponent, e.g. 'weighted-power:2'")
        try:
            return QuasiNormSpec(kind, (float(arg),))
        except ValueError:
            raise ConfigurationError(f"bad weighted-power exponent {arg!r}") from None
    if arg:
        raise ConfigurationError(f"quasi-norm {kind!r} takes no parameter")
    return QuasiNormSpec(kind)


def validate_quasi_norm(group: GroupSpec, spec: QuasiNormSpec) -> None:
    if spec.kind not in QUASI_NORM_KINDS:
        raise ConfigurationError(f"unknown quasi-norm kind {spec.kind!r}")
    if spec.kind == "euclidean" and not group.is_isotropic:
        raise ConfigurationError("the euclidean norm is homogeneous only when all weights equal 1")
    if spec.kind == "koranyi" and group.weights != (1.0, 1.0, 2.0):
        raise ConfigurationError("the Koranyi norm requires weights (1, 1, 2)")
    if spec.kind == "weighted-power":
        if len(spec.parameters) != 1:
            raise ConfigurationError("weighted-power takes exactly one parameter N")
        N = spec.parameters[0]
        if not N > 0:
            raise ConfigurationError(f"weighted-power exponent must be positive, got {N}")
        bad = [w for w in group.weights if 2 * N / w < 1]
        if bad:
            raise ConfigurationError(f"weighted-power:{N:g} needs 2N/nu >= 1 for every weight; fails for {bad}")


def _coords(group: GroupSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (group.n,):
        raise ShapeError(f"expected coordinates with trailing dimension {group.n}, got shape {x.shape}")
    return x


def dilate(group: GroupSpec, lam: float, x) -> np.ndarray:
    """Apply D_lambda: coordinate k is scaled by lambda**nu_k."""
    if not lam > 0:
        raise DomainError(f"dilation factor must be positive, got {lam}")
    x = _coords(group, x)
    return x * np.power(lam, np.asarray(group.weights))


def inverse(group: GroupSpec, x) -> np.ndarray:
    # in exponential coordinates the group inverse is negation
    return -_coords(group, x)


def quasi_norm(group: GroupSpec, spec: QuasiNormSpec, x) -> np.ndarray:
    """Evaluate |x| along the last axis; returns a scalar for a single point."""
    validate_quasi_norm(group, spec)
    x = _coords(group, x)
    nu = np.asarray(group.weights)
    ax = np.abs(x)
    if spec.kind == "euclidean":
        out = np.sqrt(np.sum(ax * ax, axis=-1))
    elif spec.kind == "weighted-max":
        out = np.max(ax ** (1.0 / nu), axis=-1)
    elif spec.kind == "weighted-power":
        two_n = 2.0 * spec.parameters[0]
        # factor out the largest homogeneous component to avoid overflow
        comps = ax ** (1.0 / nu)
        top = np.max(comps, axis=-1, keepdims=True)
        safe = np.where(top > 0, top, 1.0)
        out = (top * np.sum((comps / safe) ** two_n, axis=-1, keepdims=True) ** (1.0 / two_n))[..., 0]
    else:
        out = ((x[..., 0] ** 2 + x[..., 1] ** 2) ** 2 + x[..., 2] ** 2) ** 0.25
    return out[()] if out.ndim == 0 else out
