import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from hardy_bench.cartesian import (MonteCarlo, TensorGauss, bump_angular, cauchy_schwarz_check, dilation_scaling,
                                   from_profile, integrate_box, make_function, parse_method, radial_bump,
                                   sphere_measure, verify_ckn_fullgrad, verify_lh2_fullgrad)
from hardy_bench.errors import ConfigurationError, DomainError
from hardy_bench.group import make_group
from hardy_bench.inequalities import InequalityCase, verify_lh2
from hardy_bench.profiles import BumpProfile, ZeroProfile

import oracles


def gaussian(x):
    return np.exp(-np.sum(x * x, axis=1))


def test_unit_box():
    res = integrate_box(lambda x: np.ones(len(x)), [[0, 1], [0, 1]])
    assert res.value == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gaussian_tensor(n):
    res = integrate_box(gaussian, [[-8, 8]] * n, TensorGauss(order=10, panels=16))
    assert abs(res.value - np.pi ** (n / 2)) <= 1e-8
    half = integrate_box(gaussian, [[0, 8]] * n, TensorGauss(order=10, panels=16))
    assert half.value == pytest.approx(res.value * 2.0 ** -n, rel=1e-12)


def test_gaussian_monte_carlo():
    res = integrate_box(gaussian, [[-6, 6]] * 2, MonteCarlo(samples=400_000, seed=3))
    assert abs(res.value - np.pi) <= 5 * res.error_estimate and res.error_estimate > 0


def test_monte_carlo_reproducible():
    m = MonteCarlo(samples=200_000, seed=7)
    a = integrate_box(gaussian, [[-4, 4]] * 3, m)
    b = integrate_box(gaussian, [[-4, 4]] * 3, m)
    c = integrate_box(gaussian, [[-4, 4]] * 3, MonteCarlo(samples=200_000, seed=8))
    assert a.value == b.value and a.error_estimate == b.error_estimate and a.value != c.value


def test_vector_valued_matches_scalar():
    m = MonteCarlo(samples=100_000, seed=1)
    vec = integrate_box(lambda x: np.stack([gaussian(x), x[:, 0] ** 2], axis=1), [[-3, 3]] * 2, m)
    sca = integrate_box(gaussian, [[-3, 3]] * 2, m)
    assert np.asarray(vec.value).shape == (2,) and vec.value[0] == sca.value


def test_integrate_box_errors():
    with pytest.raises(DomainError):
        integrate_box(gaussian, [[-1, 1]] * 2, singular_at_origin=True)
    assert integrate_box(gaussian, [[0.5, 1]] * 2, singular_at_origin=True).value > 0
    with pytest.raises(ConfigurationError):
        integrate_box(gaussian, [[1, 0]])
    with pytest.raises(ConfigurationError):
        integrate_box(gaussian, [[0, 1]] * 5)
    with pytest.raises(ConfigurationError):
        integrate_box(gaussian, [[0, 1]], MonteCarlo(samples=1))


def test_sphere_measure():
    assert sphere_measure(2) == pytest.approx(2 * np.pi, rel=1e-15)
    assert sphere_measure(3) == pytest.approx(4 * np.pi, rel=1e-15)


def test_method_parsing():
    assert parse_method("tensor-gauss:8:12") == TensorGauss(8, 12)
    assert parse_method("monte-carlo:1000:5") == MonteCarlo(1000, 5)
    assert parse_method(str(MonteCarlo())) == MonteCarlo()
    for bad in ("simpson", "tensor-gauss:x", "monte-carlo:1:2:3"):
        with pytest.raises(ConfigurationError):
            parse_method(bad)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("R", [0.1, 1.0])
def test_cross_pipeline_lh2(p, R):
    f = radial_bump(0.2, 0.8)
    cart = verify_lh2_fullgrad(f, p, R)
    rad = verify_lh2(InequalityCase("LH2", p=p, R=R, profile=BumpProfile(0.2, 0.8)))
    w = sphere_measure(2) ** (1 / p)
    assert cart.lhs == pytest.approx(w * rad.lhs, rel=1e-6)
    assert cart.rhs == pytest.approx(w * rad.rhs, rel=1e-6)
    assert cart.extras["rhs_full_gradient"] == pytest.approx(w * rad.rhs, rel=1e-6)
    assert cart.passed


def test_cross_pipeline_ckn():
    f = radial_bump(0.2, 0.8)
    res = verify_ckn_fullgrad(f)
    g = lambda r: oracles.bump(r, 0.2, 0.8)
    dg = lambda r: oracles.dbump(r, 0.2, 0.8)
    lhs = (2 * np.pi * oracles.quad(lambda r: g(r) ** 2 / r, 0.2, 0.8)) ** 0.5
    rhs = 2 * (2 * np.pi * oracles.quad(lambda r: (np.log(r) * dg(r)) ** 2 * r, 0.2, 0.8)) ** 0.5
    assert res.lhs == pytest.approx(lhs, rel=1e-6) and res.rhs == pytest.approx(rhs, rel=1e-6)
    assert res.extras["rhs_radial_direction"] == pytest.approx(rhs, rel=1e-6) and res.passed


def test_angular_functions_pass():
    for n in (2, 3):
        f = bump_angular(0.2, 0.8, n)
        m = MonteCarlo(samples=200_000, seed=42)
        lh = verify_lh2_fullgrad(f, 2.0, 1.0, m)
        ckn = verify_ckn_fullgrad(f, method=m)
        assert lh.passed and ckn.passed
        assert lh.extras["chain_ratio"] <= 1 + 1e-12
        assert ckn.extras["ratio_radial_direction"] >= ckn.ratio


def test_verifier_domain():
    f = radial_bump(0.2, 0.8)
    with pytest.raises(DomainError):
        verify_lh2_fullgrad(f, 2.0, 0.5)
    with pytest.raises(DomainError):
        verify_ckn_fullgrad(f, R=0.7)
    with pytest.raises(ConfigurationError):
        verify_lh2_fullgrad(f, 1.0, 1.0)
    with pytest.raises(ConfigurationError):
        make_function("nosuch", 2)


def test_zero_function():
    f = from_profile(ZeroProfile(), 2)
    assert verify_ckn_fullgrad(f).ratio == 0 and verify_lh2_fullgrad(f, 2.0, 1.0).passed


@pytest.mark.parametrize("name,n", [("bump-radial", 2), ("bump-angular", 2), ("bump-angular", 3)])
def test_cauchy_schwarz(name, n):
    ok, excess = cauchy_schwarz_check(make_function(name, n), samples=100_000)
    assert ok and excess <= 1e-12


def test_dilation_scaling():
    G = make_group([1, 2])
    box = [[-7, 7], [-14, 14]]
    F = lambda x: np.exp(-x[:, 0] ** 2 - x[:, 1] ** 2 / 4)
    scaled, base, ratio, expected = dilation_scaling(F, G, 2.0, box, TensorGauss(order=10, panels=24))
    assert ratio == pytest.approx(expected, rel=1e-10) and expected == 0.125


@seed(1)
@settings(max_examples=4, deadline=None)
@given(lam=st.floats(1.0, 2.0))
def test_dilation_scaling_heisenberg(lam):
    G = make_group([1, 1, 2])
    # the box is wide enough that F is negligible outside its image under D_lam
    box = [[-7, 7]] * 2 + [[-28, 28]]
    F = lambda x: np.exp(-x[:, 0] ** 2 - x[:, 1] ** 2 - x[:, 2] ** 2 / 16)
    _, _, ratio, expected = dilation_scaling(F, G, lam, box, TensorGauss(order=10, panels=14))
    assert ratio == pytest.approx(expected, rel=1e-8)
