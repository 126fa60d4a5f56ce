import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from hardy_bench.errors import ConfigurationError, DomainError
from hardy_bench.profiles import (REGISTRY, BumpProfile, PolyBumpProfile, ZeroProfile, affine, euler_apply,
                                  finite_diff_check, log_bound_lemmas, log_profile, mean_value_bound_check,
                                  monomial, parse_profile, polynomial, radial_derivative, sup_derivative)

import oracles

REGISTERED = ["bump:0.2,0.8", "polybump:0.2,0.8,3", "polybump:0.1,0.9,2", "powerlaw:-0.5,0.2,2",
              "logpower:0.5,0.1,0.7,1", "cbump:0.2,0.8"]


def test_radial_derivative_examples():
    assert radial_derivative(monomial(3), 2.0) == pytest.approx(12.0, rel=1e-15)
    assert radial_derivative(log_profile(), np.e) == pytest.approx(1 / np.e, rel=1e-15)
    bump = BumpProfile(0.2, 0.8)
    h = 1e-5
    central = (bump.g(0.5 + h) - bump.g(0.5 - h)) / (2 * h)
    assert abs(radial_derivative(bump, 0.5) - central) <= 1e-8


def test_radial_derivative_domain():
    with pytest.raises(DomainError):
        radial_derivative(monomial(2), 0.0)
    with pytest.raises(DomainError):
        euler_apply(monomial(2), -1.0)


def test_bump_matches_closed_form():
    r = np.linspace(0.1, 0.9, 801)
    # profiles are evaluated at exp(log r); the ulp shift matters only where g is tiny
    b = BumpProfile(0.2, 0.8)
    ref, dref = oracles.bump(r, 0.2, 0.8), oracles.dbump(r, 0.2, 0.8)
    assert np.max(np.abs(b.g(r) - ref)) <= 1e-13 * np.max(ref)
    assert np.max(np.abs(b.dg(r) - dref)) <= 1e-12 * np.max(np.abs(dref))
    pb = PolyBumpProfile(0.2, 0.8, 3)
    dref = oracles.dpolybump(r, 0.2, 0.8, 3)
    assert np.max(np.abs(pb.dg(r) - dref)) <= 1e-12 * np.max(np.abs(dref))


def test_euler_examples():
    r = np.array([0.3, 1.0, 7.0])
    g = monomial(2.5)
    assert np.allclose(euler_apply(g, r), 2.5 * g.g(r), rtol=1e-14)
    assert np.all(euler_apply(affine(0.0, 3.0), r) == 0.0)
    mix = polynomial([0, 0, 1, 1])  # r^2 + r^3
    assert euler_apply(mix, 1.0) == pytest.approx(5.0, rel=1e-15)
    # no single mu gives euler = mu * g at two radii
    r2 = np.array([0.5, 2.0])
    mus = euler_apply(mix, r2) / mix.g(r2)
    assert abs(mus[0] - mus[1]) > 0.1


@pytest.mark.parametrize("mu", [-2.0, -1.0, 0.5, 1.0, 3.0])
def test_euler_eigenrelation(mu):
    r = np.geomspace(0.01, 100, 57)
    g = monomial(mu)
    assert np.allclose(euler_apply(g, r), mu * g.g(r), rtol=1e-10, atol=0)


def test_finite_diff_examples():
    grid = np.linspace(0.25, 0.75, 51)
    assert finite_diff_check(PolyBumpProfile(0.2, 0.8, 2), grid, 1e-5) <= 1e-9
    # central difference of log: truncation h^2/(3 r^3) plus cancellation eps/h
    lg = log_profile()
    assert finite_diff_check(lg, np.linspace(1.0, 2.0, 41), 1e-5) <= 1e-10
    bound = 1e-10 / (3 * 0.5 ** 3) + 4 * np.finfo(float).eps * abs(np.log(0.5)) / 1e-5
    assert finite_diff_check(lg, np.linspace(0.5, 2.0, 61), 1e-5) <= bound
    # exact for affine g when r, h and the arithmetic are dyadic
    h = 2.0 ** -17
    assert finite_diff_check(affine(2.0, 0.5), np.linspace(0.5, 2.0, 97), h) <= 1e-12
    # otherwise only the rounding of g(r +- h) remains
    assert finite_diff_check(affine(1.7, -0.3), np.linspace(0.5, 2.0, 61), 1e-5) <= 4 * np.finfo(float).eps * 3.1 / 1e-5


def test_finite_diff_domain():
    with pytest.raises(DomainError):
        finite_diff_check(BumpProfile(0.2, 0.8), [0.2 + 1e-7], 1e-5)
    with pytest.raises(DomainError):
        finite_diff_check(BumpProfile(0.2, 0.8), [0.5], 0.0)


@pytest.mark.parametrize("key", REGISTERED)
def test_registry_profiles_gate(key):
    prof = parse_profile(key)
    a, b = prof.support
    grid = np.linspace(a + 0.05 * (b - a), b - 0.05 * (b - a), 41)
    scale = sup_derivative(prof)
    assert finite_diff_check(prof, grid, 1e-5 * (b - a)) <= 1e-6 * scale
    assert np.all(prof.g(np.array([a * 0.9, b * 1.1])) == 0)


def test_log_bound_examples():
    assert log_bound_lemmas(1.0, 0.5) == (True, True)
    assert log_bound_lemmas(1.0, 0.999) == (True, True)
    assert log_bound_lemmas(2.0, 1.0) == (True, True)
    for r in (1.0, 1.5, 0.0):
        with pytest.raises(DomainError):
            log_bound_lemmas(1.0, r)


def test_log_bound_random_pairs():
    rng = np.random.default_rng(7)
    R = rng.uniform(1e-3, 1e3, 10_000)
    r = R * rng.uniform(1e-9, 1 - 1e-12, 10_000)
    for Ri, ri in zip(R[:200], r[:200]):
        assert log_bound_lemmas(Ri, ri) == (True, True)
    d = R - r
    logq = np.log1p(d / r)
    assert np.all(d / R <= logq * (1 + 4e-16)) and np.all(logq <= d / r * (1 + 4e-16))


@pytest.mark.parametrize("key", ["bump:0.2,0.8", "polybump:0.1,0.9,2", "powerlaw:-0.5,0.2,2"])
def test_mean_value_bound(key):
    prof = parse_profile(key)
    a, b = prof.support
    for R in np.linspace(a + 0.1 * (b - a), b, 5):
        assert mean_value_bound_check(prof, R, np.linspace(a * (1 + 1e-9), R, 200))


def test_registry_and_parse():
    assert set(REGISTRY) >= {"bump", "polybump", "powerlaw", "logpower", "cbump", "zero"}
    assert parse_profile("zero").is_zero
    assert np.all(ZeroProfile().g(np.array([0.1, 1.0])) == 0)
    c = parse_profile("cbump:0.2,0.8")
    assert c.g(0.5) == pytest.approx((1 + 1j) * oracles.bump(0.5, 0.2, 0.8), rel=1e-15)
    for bad in ("nosuch:1,2", "bump:1", "bump:a,b", "bump:0.8,0.2", "polybump:0.2,0.8,1"):
        with pytest.raises(ConfigurationError):
            parse_profile(bad)


@seed(1)
@settings(max_examples=60, deadline=None)
@given(lam=st.floats(0.05, 20.0), c=st.floats(1e-3, 1e3), r=st.floats(0.01, 10.0))
def test_dilation_and_scaling(lam, c, r):
    base = PolyBumpProfile(0.2, 0.8, 3)
    d = base.dilated(lam)
    assert d.g(r) == pytest.approx(base.g(lam * r), rel=1e-12, abs=1e-300)
    assert d.dg(r) == pytest.approx(lam * base.dg(lam * r), rel=1e-9, abs=1e-300)
    assert base.scaled(c).g(r) == pytest.approx(c * base.g(r), rel=1e-15, abs=0)
