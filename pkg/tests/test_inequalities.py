import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from hardy_bench.errors import ConfigurationError, ParameterError, PreconditionError
from hardy_bench.inequalities import (THEOREMS, InequalityCase, holder_equality_check, i_kernel, remainder_identity,
                                      verify, verify_lh2, verify_lh2_sup)
from hardy_bench.profiles import ZeroProfile, parse_profile

import oracles

P = parse_profile


def case(tid, prof="bump:0.2,0.8", **kw):
    return InequalityCase(tid, profile=P(prof) if isinstance(prof, str) else prof, **kw)


def pb(a, b, k):
    return (lambda r: oracles.polybump(r, a, b, k)), (lambda r: oracles.dpolybump(r, a, b, k))


def bp(a, b):
    return (lambda r: oracles.bump(r, a, b)), (lambda r: oracles.dbump(r, a, b))


ZERO_CASES = [("LH2", {}), ("LH2_supR", {}), ("UP1", {"p": 4.0, "Q": 4.0}), ("UP2", {}),
              ("CRITLOG", {"p": 2.0, "Q": 2.0}), ("BALL_UP", {"p": 3.0, "Q": 3.0}), ("HS1a", {"Q": 3.0}),
              ("HS1b", {"Q": 4.0}), ("Q2a", {}), ("Q2b", {}), ("CLASSICAL_LP", {"Q": 3.0}),
              ("EDMUNDS_TRIEBEL", {"p": 2.0, "Q": 2.0})]


@pytest.mark.parametrize("tid,kw", ZERO_CASES)
def test_zero_profile(tid, kw):
    res = verify(InequalityCase(tid, profile=ZeroProfile(), **kw))
    assert res.lhs == 0 and res.rhs == 0 and res.ratio == 0 and res.passed


def test_zero_remainder():
    rep = remainder_identity(case("EQ_REM", ZeroProfile()))
    assert rep.term_u == rep.term_v == rep.term_rem == rep.residual == 0 and rep.passed


def test_unknown_theorem_and_bad_params():
    with pytest.raises(ConfigurationError):
        InequalityCase("HG")
    with pytest.raises(ConfigurationError):
        InequalityCase("LH2", R=0.0)
    with pytest.raises(ConfigurationError):
        InequalityCase("LH2", Q=4.0, weights=(1.0, 1.0))
    with pytest.raises(ParameterError):
        verify_lh2(case("LH2", p=1.0))
    assert len(THEOREMS) == 13


# ------------------------------------------------------------- oracle values

def test_lh2_polybump_oracle():
    g, dg = pb(0.2, 0.8, 3)
    res = verify_lh2(case("LH2", "polybump:0.2,0.8,3", p=2.0, R=1.0))
    lhs, rhs = oracles.lh2_sides(g, dg, 0.2, 0.8, 2.0, 1.0)
    assert res.lhs == pytest.approx(lhs, rel=1e-9) and res.rhs == pytest.approx(rhs, rel=1e-9)
    assert 0 < res.ratio <= 1 and res.constant == 2.0


def test_up1_oracle():
    g, dg = pb(0.2, 0.8, 3)
    p, q, Q = 4.0, 4.0, 4.0
    res = verify(case("UP1", "polybump:0.2,0.8,3", p=p, q=q, Q=Q, R=1.0))
    F1 = oracles.quad(lambda r: abs(dg(r)) ** p * r ** (p - 1), 0.2, 0.8) ** (1 / p)
    F2 = oracles.weighted_norm(g, 0.2, 0.8, q, Q)
    third = oracles.quad(lambda r: g(r) ** 4 / (r ** (2 * Q / p) * np.log(r) ** 2) * r ** (Q - 1), 0.2, 0.8) ** 0.5
    assert res.rhs == pytest.approx(F1 * F2, rel=1e-9)
    assert res.lhs == pytest.approx((p - 1) / p * third, rel=1e-9)
    assert res.passed and res.ratio == pytest.approx(0.34709445099573855, rel=1e-8)


def test_up1_needs_p_above_two():
    with pytest.raises(ParameterError):
        verify(case("UP1", p=2.0))
    with pytest.raises(ParameterError):
        verify(case("UP1", p=4.0, q=3.0))


def test_up2_at_p2_tracks_lh2():
    up = verify(case("UP2", "polybump:0.2,0.8,3", p=2.0, R=1.0))
    lh = verify_lh2(case("LH2", "polybump:0.2,0.8,3", p=2.0, R=1.0))
    assert up.passed and up.ratio == pytest.approx(lh.ratio, rel=1e-10)


def test_critlog_oracle():
    g, dg = bp(0.1, 0.5)
    Q = 3.0
    res = verify(case("CRITLOG", "bump:0.1,0.5", p=Q, Q=Q, R=1.0))
    lhs = oracles.quad(lambda r: g(r) ** Q / r, 0.1, 0.5)
    rhs = Q ** Q * oracles.quad(lambda r: abs(np.log(r) * dg(r)) ** Q * r ** (Q - 1), 0.1, 0.5)
    assert res.passed and res.ratio == pytest.approx(lhs / rhs, rel=1e-9)


def test_critlog_support_must_be_inside_ball():
    with pytest.raises(PreconditionError):
        verify(case("CRITLOG", "bump:0.2,0.8", p=2.0, Q=2.0, R=0.5))
    with pytest.raises(PreconditionError):
        verify(case("BALL_UP", "bump:0.2,0.8", p=2.0, Q=2.0, R=0.8))


def test_holder_equality_examples():
    assert holder_equality_check(2, 2, [np.e]) <= 1e-15
    assert holder_equality_check(3, 4, [0.5]) <= 1e-15
    assert holder_equality_check(2.5, 3.7, np.geomspace(1e-3, 1e3, 1000)[np.arange(1000) != 500]) <= 1e-12
    with pytest.raises(ConfigurationError):
        holder_equality_check(2, 2, [0.5, 1.0])


def test_ball_uncertainty_oracle():
    g, dg = bp(0.1, 0.6)
    Q = 4.0
    Qc = Q / (Q - 1)
    res = verify(case("BALL_UP", "bump:0.1,0.6", p=Q, Q=Q, R=1.0))
    A = oracles.quad(lambda r: abs(np.log(r) * dg(r)) ** Q * r ** (Q - 1), 0.1, 0.6) ** (1 / Q)
    G = oracles.quad(lambda r: r ** Qc * g(r) ** Qc * r ** (Q - 1), 0.1, 0.6) ** (1 / Qc)
    H = oracles.quad(lambda r: g(r) ** 2 * r ** (Q - 1), 0.1, 0.6) / Q
    assert res.passed and res.ratio == pytest.approx(H / (A * G), rel=1e-9)


def test_ball_uncertainty_amplitude():
    base = verify(case("BALL_UP", "bump:0.1,0.6", p=4.0, Q=4.0))
    big = verify(case("BALL_UP", P("bump:0.1,0.6").scaled(10.0), p=4.0, Q=4.0))
    assert big.lhs == pytest.approx(100 * base.lhs, rel=1e-10)
    assert big.rhs == pytest.approx(100 * base.rhs, rel=1e-10)
    assert big.passed == base.passed


def test_hardy_sobolev_oracle():
    g, dg = pb(0.2, 0.9, 2)
    Q = 4.0
    a = verify(case("HS1a", "polybump:0.2,0.9,2", Q=Q, R=1.0))
    b = verify(case("HS1b", "polybump:0.2,0.9,2", Q=Q, R=1.0))
    lhs = oracles.weighted_norm(g, 0.2, 0.9, 2, Q, shift=2)
    grad = oracles.weighted_norm(dg, 0.2, 0.9, 2, Q)
    mass = oracles.weighted_norm(g, 0.2, 0.9, 2, Q)
    assert a.lhs == pytest.approx(lhs, rel=1e-9) and a.rhs == pytest.approx(2 / (Q - 2) * grad, rel=1e-9)
    c = (Q / (Q - 2)) ** 0.5
    assert b.extras["rhs_mass_term"] == pytest.approx(c * mass, rel=1e-9)
    assert b.extras["rhs_gradient_term"] == pytest.approx(2 / (Q - 2) * (1 + c) * grad, rel=1e-9)
    assert a.passed and b.passed
    assert "ratio_without_mass_term" in b.extras  # recorded, not asserted


def test_hardy_sobolev_needs_q3():
    with pytest.raises(ParameterError):
        verify(case("HS1a", Q=2.0))


def test_q2_oracle():
    g, dg = pb(0.1, 0.8, 3)
    res = verify(case("Q2a", "polybump:0.1,0.8,3", R=1.0))
    lhs = oracles.quad(lambda r: g(r) ** 2 / (r * np.log(1 / r) ** 2), 0.1, 0.8) ** 0.5
    rhs = 2 * oracles.weighted_norm(dg, 0.1, 0.8, 2, 2.0)
    assert res.passed and res.lhs == pytest.approx(lhs, rel=1e-9) and res.rhs == pytest.approx(rhs, rel=1e-9)
    assert verify(case("Q2b", "polybump:0.1,0.8,3", R=1.0)).passed
    with pytest.raises(ParameterError):
        verify(case("Q2a", Q=3.0))


def test_q2b_oracle():
    g, dg = pb(0.1, 0.8, 3)
    res = verify(case("Q2b", "polybump:0.1,0.8,3", R=1.0))
    lhs = oracles.quad(lambda r: g(r) ** 2 / (r * (1 + np.log(1 / r)) ** 2), 0.1, 0.8) ** 0.5
    shown = oracles.quad(lambda r: g(r) ** 2 / (r * (1 + np.log(1 / r) ** 2) ** 2), 0.1, 0.8) ** 0.5
    rhs = 2 ** 0.5 * oracles.weighted_norm(g, 0.1, 0.8, 2, 2.0) + 2 * (1 + 2 ** 0.5) * oracles.weighted_norm(
        dg, 0.1, 0.8, 2, 2.0)
    assert res.lhs == pytest.approx(lhs, rel=1e-9) and res.rhs == pytest.approx(rhs, rel=1e-9)
    assert res.extras["lhs_squared_log_weight"] == pytest.approx(shown, rel=1e-9)


def test_classical_oracle():
    g, dg = bp(1.0, 2.0)
    p, Q = 2.0, 3.0
    res = verify(case("CLASSICAL_LP", "bump:1,2", p=p, Q=Q))
    lhs = oracles.weighted_norm(g, 1, 2, p, Q, shift=p)
    rhs = p / (Q - p) * oracles.weighted_norm(dg, 1, 2, p, Q)
    assert res.passed and res.ratio == pytest.approx(lhs / rhs, rel=1e-9)
    with pytest.raises(ParameterError):
        verify(case("CLASSICAL_LP", p=3.0, Q=3.0))


def test_classical_powerlaw_window():
    # with exponent -1 the ratio on a window of log-width L is at most (1 + (pi/L)^2)^(-1/2)
    res = verify(case("CLASSICAL_LP", "powerlaw:-0.95,0.01,100", p=2.0, Q=4.0))
    ceiling = (1 + (np.pi / np.log(1e4)) ** 2) ** -0.5
    assert res.ratio == pytest.approx(0.9029392363516398, rel=1e-8)
    assert res.ratio < ceiling < 0.95


def test_edmunds_triebel_oracle():
    g, dg = bp(0.05, 0.9)
    n = 3.0
    res = verify(case("EDMUNDS_TRIEBEL", "bump:0.05,0.9", p=n, Q=n))
    lhs = oracles.quad(lambda r: g(r) ** n / (r * (1 + np.log(1 / r)) ** n), 0.05, 0.9) ** (1 / n)
    rhs = n / (n - 1) * oracles.weighted_norm(dg, 0.05, 0.9, n, n)
    assert res.passed and res.ratio == pytest.approx(lhs / rhs, rel=1e-9)
    with pytest.raises(ConfigurationError):
        verify(case("EDMUNDS_TRIEBEL", "bump:0.05,0.9", p=4.0, Q=4.0, weights=(1.0, 1.0, 2.0)))
    with pytest.raises(PreconditionError):
        verify(case("EDMUNDS_TRIEBEL", "bump:0.5,1.5", p=2.0, Q=2.0))


# ------------------------------------------------------------- remainder

def test_remainder_oracle():
    g, dg = pb(0.3, 0.9, 2)
    p = 3.0
    rep = remainder_identity(case("EQ_REM", "polybump:0.3,0.9,2", p=p, Q=4.0, R=1.0))
    u = oracles.quad(lambda r: g(r) ** p / (r * abs(np.log(r)) ** p), 0.3, 0.9)
    v = (p / (p - 1)) ** p * oracles.quad(lambda r: abs(dg(r)) ** p * r ** (p - 1), 0.3, 0.9)
    assert rep.term_u == pytest.approx(u, rel=1e-9) and rep.term_v == pytest.approx(v, rel=1e-9)
    assert rep.residual <= 1e-6 * max(rep.term_u, rep.term_v) and rep.term_rem >= -1e-12


@pytest.mark.parametrize("prof", ["bump:0.2,0.8", "cbump:0.2,0.8", "polybump:0.1,0.9,2"])
@pytest.mark.parametrize("R", [0.5, 1.0, 4.0])
def test_p2_identity(prof, R):
    rep = remainder_identity(case("EQ_REM", prof, p=2.0, R=R))
    lhs = rep.term_u
    rhs = 4 * rep.term_v / 4 - rep.extras["norm_2v_plus_u_sq"]
    assert abs(lhs - rhs) <= 1e-8 * max(lhs, rep.term_v)
    assert rep.extras["p2_identity_residual"] <= 1e-8 * rep.term_v


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_remainder_matches_lh2_ratio(p):
    c = case("LH2", "polybump:0.2,0.8,3", p=p, R=0.5)
    ratio = verify_lh2(c).ratio
    rep = remainder_identity(case("EQ_REM", "polybump:0.2,0.8,3", p=p, R=0.5))
    assert ratio ** p == pytest.approx(1 - rep.term_rem / rep.term_v, rel=1e-6)


def test_i_kernel_examples():
    assert i_kernel(2.0, 2.0, 3.0) == pytest.approx(2.0, rel=1e-15)
    assert i_kernel(1.0, 0.0, 2.0) == pytest.approx(0.5, rel=1e-15)
    assert i_kernel(2.0 + 1e-6, 2.0, 3.0) == pytest.approx(2.0, rel=1e-4)


def test_i_kernel_positive_on_random_triples():
    rng = np.random.default_rng(11)
    n = 100_000
    f = rng.normal(size=n) + 1j * rng.normal(size=n)
    g = rng.normal(size=n) + 1j * rng.normal(size=n)
    p = rng.uniform(1.0 + 1e-9, 10.0, n)
    vals = np.array([i_kernel(f[i:i + 1000], g[i:i + 1000], p[i]) for i in range(0, n, 1000)]).ravel()
    assert np.all(vals >= 0)


@seed(1)
@settings(max_examples=100, deadline=None)
@given(fr=st.floats(-5, 5), fi=st.floats(-5, 5), gr=st.floats(-5, 5), gi=st.floats(-5, 5), p=st.floats(1.01, 10))
def test_i_kernel_nonnegative(fr, fi, gr, gi, p):
    assert i_kernel(complex(fr, fi), complex(gr, gi), p) >= 0


# ------------------------------------------------------------- invariances

@pytest.mark.parametrize("lam", [0.1, 3.0, 20.0])
@pytest.mark.parametrize("R", [0.5, 1.0])
def test_lh2_scale_invariance(lam, R):
    prof = P("polybump:0.2,0.8,3")
    a = verify_lh2(case("LH2", prof, p=2.5, R=R))
    b = verify_lh2(case("LH2", prof.dilated(lam), p=2.5, R=R / lam))
    assert b.lhs == pytest.approx(a.lhs, rel=1e-8) and b.rhs == pytest.approx(a.rhs, rel=1e-8)


@seed(1)
@settings(max_examples=25, deadline=None)
@given(c=st.floats(1e-3, 1e3), p=st.sampled_from([1.5, 2.0, 3.0]), R=st.sampled_from([0.5, 1.0, 4.0]))
def test_amplitude_homogeneity(c, p, R):
    prof = P("bump:0.2,0.8")
    a = verify_lh2(case("LH2", prof, p=p, R=R))
    b = verify_lh2(case("LH2", prof.scaled(c), p=p, R=R))
    assert b.lhs == pytest.approx(c * a.lhs, rel=1e-10) and b.rhs == pytest.approx(c * a.rhs, rel=1e-10)
    assert b.ratio == pytest.approx(a.ratio, rel=1e-10)


def test_complex_profile_matches_real():
    for R in (0.5, 1.0):
        a = verify_lh2(case("LH2", "bump:0.2,0.8", p=3.0, R=R))
        b = verify_lh2(case("LH2", "cbump:0.2,0.8", p=3.0, R=R))
        assert b.ratio == pytest.approx(a.ratio, rel=1e-12)
        assert b.lhs == pytest.approx(2 ** 0.5 * a.lhs, rel=1e-12)


def test_lh2_sup():
    c = case("LH2_supR", "polybump:0.2,0.8,3", p=2.0)
    res = verify_lh2_sup(c)
    assert res.passed and 0.1 <= res.R_at_sup <= 1.6
    grid = np.geomspace(0.1, 1.6, 25)
    single = max(verify_lh2(case("LH2", "polybump:0.2,0.8,3", p=2.0, R=R)).lhs for R in grid)
    assert res.lhs == pytest.approx(single, rel=1e-12)
    with pytest.raises(ConfigurationError):
        verify_lh2_sup(c, [])
    assert verify_lh2_sup(case("LH2_supR", ZeroProfile())).lhs == 0


def test_lh2_decreases_beyond_support():
    prof = P("polybump:0.2,0.8,3")
    lhs = [verify_lh2(case("LH2", prof, p=2.0, R=R)).lhs for R in np.geomspace(0.85, 20, 25)]
    assert np.all(np.diff(lhs) < 0)


def test_lh2_sup_scale():
    prof = P("bump:0.2,0.8")
    grid = np.geomspace(0.1, 1.6, 25)
    a = verify_lh2_sup(case("LH2_supR", prof), grid)
    b = verify_lh2_sup(case("LH2_supR", prof.dilated(3.0)), grid / 3.0)
    assert b.lhs == pytest.approx(a.lhs, rel=1e-8) and b.R_at_sup == pytest.approx(a.R_at_sup / 3.0, rel=1e-12)


def test_battery_profiles_pass_every_theorem():
    for prof in ("bump:0.2,0.8", "polybump:0.1,0.9,2", "powerlaw:-0.5,0.2,2", "cbump:0.2,0.8"):
        for tid, kw in [("LH2", {"p": 1.5}), ("UP2", {"p": 3.0}), ("UP1", {"p": 3.0}), ("HS1a", {"Q": 5.5}),
                        ("HS1b", {"Q": 3.0}), ("Q2a", {"R": 0.5}), ("Q2b", {"R": 4.0}),
                        ("CLASSICAL_LP", {"p": 3.0, "Q": 5.5})]:
            assert verify(case(tid, prof, **kw)).passed
