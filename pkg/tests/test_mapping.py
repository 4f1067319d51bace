import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdwell.mapping import (ScalingProfile, exponential_profile, identity_profile, mapped_kernel, ode_residuals,
                            t_tilde, transform_coords)
from tdwell.propagators import CoshParams, Family, PhysicalParams, PropagatorHandle, k_isho, k_td_full

finite = dict(allow_nan=False, allow_infinity=False)
coord = st.floats(-6, 6, **finite)
times = st.floats(0.02, 5, **finite)
P = PhysicalParams()
CP = CoshParams(alpha=0.3, mu=1.0)


@settings(max_examples=150, deadline=None)
@given(coord, coord, times)
def test_identity_profile_is_identity(x, xp, t):
    prof = identity_profile()
    for fam, cp in [(Family.FREE, None), (Family.STATIC_DELTA_FREE, None), (Family.COSH_WELL, CP)]:
        h = PropagatorHandle(fam, P, cp)
        assert mapped_kernel(prof, h, P, x, t, xp) == pytest.approx(h(x, t, xp), rel=1e-14)


@settings(max_examples=150, deadline=None)
@given(coord, coord, times, st.floats(0.2, 3, **finite), st.floats(0.2, 2, **finite))
def test_exponential_map_reproduces_direct_kernels(x, xp, t, w, v0):
    p = PhysicalParams(omega=w, v0=v0)
    prof = exponential_profile(p)
    a = mapped_kernel(prof, PropagatorHandle(Family.FREE, p), p, x, t, xp)
    assert abs(a - k_isho(p, x, t, xp)) <= 1e-11 * abs(k_isho(p, x, t, xp))
    b = mapped_kernel(prof, PropagatorHandle(Family.STATIC_DELTA_FREE, p), p, x, t, xp)
    ref = k_td_full(p, x, t, xp)
    assert abs(b - ref) <= 1e-11 * abs(ref)


def test_exponential_profile_satisfies_constraints():
    t = np.linspace(0, 10, 101)
    for w in (0.1, 1.0, 3.0):
        rep = ode_residuals(exponential_profile(PhysicalParams(omega=w)), PhysicalParams(omega=w), t)
        assert rep.max_normalized < 1e-13


def test_residual_detects_wrong_profile():
    good = exponential_profile(PhysicalParams(omega=1.0))
    prof = ScalingProfile(C=good.C, Cdot=good.Cdot, Cddot=good.Cddot, g2=lambda t: -2.0 + 0 * np.asarray(t))
    rep = ode_residuals(prof, P, np.linspace(0, 2, 11))
    assert rep.max_normalized > 0.1


def test_residual_for_constant_k_profile():
    """C = sqrt(1 + t^2) solves C'' = K / C^3 with K = 1 and g2 = 0."""
    c = lambda t: np.sqrt(1 + np.asarray(t, float) ** 2)
    prof = ScalingProfile(C=c, Cdot=lambda t: np.asarray(t, float) / c(t), Cddot=lambda t: c(t) ** -3, K_const=1.0)
    assert ode_residuals(prof, P, np.linspace(0, 5, 21)).max_normalized < 1e-14
    # t~ = arctan t by numerical quadrature
    assert np.allclose(t_tilde(prof, [0.5, 2.0]), np.arctan([0.5, 2.0]), rtol=1e-12)


def test_t_tilde_closed_form_matches_quadrature():
    p = PhysicalParams(omega=0.7)
    prof = exponential_profile(p)
    open_prof = ScalingProfile(C=prof.C, Cdot=prof.Cdot, Cddot=prof.Cddot, g2=prof.g2)
    ts = np.array([0.1, 1.0, 4.0])
    assert np.allclose(t_tilde(prof, ts), t_tilde(open_prof, ts), rtol=1e-12)
    with pytest.raises(ValueError):
        t_tilde(prof, -1.0)


def test_transform_coords():
    p = PhysicalParams(omega=0.5)
    mc = transform_coords(exponential_profile(p), 2.0, 1.0, 2.0)
    assert mc.x_tilde == pytest.approx(2.0 * np.exp(-1.0))
    assert mc.xp_tilde == pytest.approx(1.0)
    assert mc.prefactor == pytest.approx(np.exp(-0.5))
    assert mc.t_tilde == pytest.approx((1 - np.exp(-2.0)) / 1.0)


def test_nonpositive_profile_rejected():
    bad = ScalingProfile(C=lambda t: 1.0 - np.asarray(t, float), Cdot=lambda t: -1.0 + 0 * np.asarray(t),
                         Cddot=lambda t: 0 * np.asarray(t, float))
    with pytest.raises(ValueError):
        ode_residuals(bad, P, [0.0, 2.0])
    with pytest.raises(ValueError):
        ode_residuals(identity_profile(), P, [])


def test_mapped_kernel_guards():
    prof = exponential_profile(P)
    with pytest.raises(ValueError):
        mapped_kernel(prof, PropagatorHandle(Family.INVERTED_OSC, P), P, 0.0, 1.0, 0.0)
    shifted = ScalingProfile(C=prof.C, Cdot=prof.Cdot, Cddot=prof.Cddot, has_shift=True)
    with pytest.raises(NotImplementedError):
        mapped_kernel(shifted, PropagatorHandle(Family.FREE, P), P, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        exponential_profile(PhysicalParams(omega=0.0))
