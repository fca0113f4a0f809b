import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezelab import (
    SpinMoments,
    SpinState,
    TwistParams,
    apply_twist,
    css_state,
    kitagawa_moments,
    min_transverse_variance,
    moments,
    squeezing_param,
    xi_to_db,
)

spins = st.integers(min_value=1, max_value=40).map(lambda two_s: two_s / 2.0)
angles = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
small_angles = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


def test_css_single_atom():
    st1 = css_state(0.5)
    assert np.allclose(st1.amps, [1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_css_two_atoms():
    st2 = css_state(1)
    assert np.allclose(st2.amps, [0.5, 1 / math.sqrt(2), 0.5])


def test_css_moments_s10():
    m = moments(css_state(10))
    assert m.sx == pytest.approx(10.0, abs=1e-12)
    assert m.sy == pytest.approx(0.0, abs=1e-12)
    assert m.sz == pytest.approx(0.0, abs=1e-12)
    assert m.sy2 == pytest.approx(5.0, abs=1e-12)
    assert m.sz2 == pytest.approx(5.0, abs=1e-12)
    assert m.syz == pytest.approx(0.0, abs=1e-12)


def test_css_normalized_large():
    st_big = css_state(10_000)
    assert np.sum(st_big.populations()) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("bad", [-1, 0.3, 0, float("nan")])
def test_css_invalid_spin(bad):
    with pytest.raises(ValueError):
        css_state(bad)


def test_state_validation():
    with pytest.raises(ValueError):
        SpinState(S=1, amps=np.array([1.0, 0.0]))  # wrong length
    with pytest.raises(ValueError):
        SpinState(S=1, amps=np.array([1.0, 1.0, 1.0]))  # not normalized


def test_stretched_state_moments():
    amps = np.zeros(11, dtype=complex)
    amps[-1] = 1.0  # |m = S>
    m = moments(SpinState(S=5, amps=amps))
    assert m.sz == pytest.approx(5.0, abs=1e-12)
    assert m.sx == pytest.approx(0.0, abs=1e-12)
    assert m.sy == pytest.approx(0.0, abs=1e-12)
    assert m.sy2 == pytest.approx(2.5, abs=1e-12)  # S/2 transverse projection noise


def test_twist_identity():
    st0 = css_state(7.5)
    st1 = apply_twist(st0, TwistParams(rho=0.0, mu=0.0))
    assert np.allclose(st1.amps, st0.amps)


def test_single_atom_never_squeezes():
    # Sz^2 is proportional to the identity for one atom: shearing does
    # nothing, so xi stays at the SQL and the transverse variance at S/2
    for mu in (0.0, 0.1, 1.0, 3.0):
        st1 = apply_twist(css_state(0.5), TwistParams(rho=0.0, mu=mu))
        assert squeezing_param(moments(st1), 0.5) == pytest.approx(1.0, abs=1e-12)
        for rho in (0.0, 0.4, -2.0):
            rotated = apply_twist(css_state(0.5), TwistParams(rho=rho, mu=mu))
            assert min_transverse_variance(moments(rotated)) == pytest.approx(0.25, abs=1e-12)


def test_pure_rotation():
    st1 = apply_twist(css_state(50), TwistParams(rho=0.3, mu=0.0))
    m = moments(st1)
    assert m.sx == pytest.approx(50 * math.cos(0.3), rel=1e-12)
    assert m.sy == pytest.approx(50 * math.sin(0.3), rel=1e-12)


def test_twist_matches_closed_form_s100():
    st1 = apply_twist(css_state(100), TwistParams(rho=0.0, mu=0.02))
    exact = moments(st1).as_array()
    closed = kitagawa_moments(100, 0.0, 0.02).as_array()
    assert np.all(np.abs(exact - closed) <= 1e-10 * np.maximum(np.abs(closed), 100.0))


@given(S=spins, rho=angles, mu=angles)
@settings(deadline=None, derandomize=True)
def test_twist_preserves_norm_and_populations(S, rho, mu):
    st0 = css_state(S)
    st1 = apply_twist(st0, TwistParams(rho=rho, mu=mu))
    assert abs(np.sum(st1.populations()) - 1.0) < 1e-12
    assert np.allclose(st1.populations(), st0.populations(), atol=1e-12)


@given(S=spins, rho1=small_angles, mu1=small_angles, rho2=small_angles, mu2=small_angles)
@settings(deadline=None, max_examples=60, derandomize=True)
def test_twist_composition(S, rho1, mu1, rho2, mu2):
    st0 = css_state(S)
    a = apply_twist(apply_twist(st0, TwistParams(rho1, mu1)), TwistParams(rho2, mu2))
    b = apply_twist(st0, TwistParams(rho1 + rho2, mu1 + mu2))
    ma, mb = moments(a).as_array(), moments(b).as_array()
    assert np.allclose(ma, mb, rtol=1e-12, atol=1e-12 * S)


@given(S=spins, rho=angles, mu=st.floats(min_value=0.0, max_value=0.5))
@settings(deadline=None, derandomize=True)
def test_moment_matrix_is_positive(S, rho, mu):
    # Cauchy-Schwarz on the symmetrized product for states we produce
    m = moments(apply_twist(css_state(S), TwistParams(rho, mu)))
    assert m.sy2 >= 0 and m.sz2 >= 0
    assert m.sy2 * m.sz2 >= (0.5 * m.syz) ** 2 - 1e-9


def test_closed_form_equivalence_grid_small():
    for S in (1, 2, 10):
        for rho in np.linspace(-math.pi, math.pi, 5):
            for mu in np.linspace(0.0, 0.5, 5):
                exact = moments(apply_twist(css_state(S), TwistParams(rho, mu))).as_array()
                closed = kitagawa_moments(S, rho, mu).as_array()
                assert np.all(np.abs(exact - closed) <= 1e-10 * np.maximum(np.abs(closed), S))


def test_min_variance_css():
    m = moments(css_state(8))
    assert min_transverse_variance(m) == pytest.approx(4.0, abs=1e-12)


def test_min_variance_uncorrelated():
    m = SpinMoments(sx=1.0, sy=0.0, sz=0.0, sy2=2.0, sz2=1.0, syz=0.0)
    assert min_transverse_variance(m) == pytest.approx(1.0, rel=1e-12)


def test_min_variance_bounds():
    m = moments(apply_twist(css_state(20), TwistParams(0.0, 0.05)))
    v = min_transverse_variance(m)
    assert 0.0 <= v <= min(m.sy2, m.sz2)


def test_min_variance_rejects_nan():
    with pytest.raises(ValueError):
        min_transverse_variance(SpinMoments(1, 0, 0, float("nan"), 1, 0))


def test_ideal_optimum_asymptote():
    # closed-form moments at the asymptotic optimum shearing, S = 1e4
    S = 10_000
    mu = 12 ** (1 / 6) / S ** (2 / 3)
    xi = squeezing_param(kitagawa_moments(S, 0.0, mu), S)
    assert xi == pytest.approx(12 ** (2 / 3) / (8 * S ** (2 / 3)), rel=0.10)


def test_squeezing_param_css_is_unity():
    for S in (0.5, 3, 17.5, 400):
        assert squeezing_param(moments(css_state(S)), S) == pytest.approx(1.0, abs=1e-9)


def test_squeezing_param_degenerate_mean_spin():
    m = SpinMoments(sx=0.0, sy=0.0, sz=0.0, sy2=1.0, sz2=1.0, syz=0.0)
    with pytest.raises(ValueError, match="degenerate"):
        squeezing_param(m, 2)


def test_xi_to_db():
    assert xi_to_db(1.0) == 0.0
    assert xi_to_db(0.01) == pytest.approx(-20.0, abs=1e-12)
    with pytest.raises(ValueError):
        xi_to_db(0.0)


def test_twist_params_must_be_finite():
    with pytest.raises(ValueError):
        TwistParams(rho=float("inf"), mu=0.0)
