import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdwell.propagators import CoshParams, Family, PhysicalParams, PropagatorHandle, psi_ch
from tdwell.scenarios import (AMU, CaseLabel, Fig2Config, Fig3Config, Fig3LabParams, InsufficientRangeError,
                              OpticalTrapParams, SurvivalCurve, UnitMode, UnitSystem, UnsupportedDimensionError,
                              analytic_survival, asymptotic_constants, asymptotic_decay_check, convert_units,
                              cosh_late_slope, critical_depth, fit_log_slope, has_metastable_well, mg_nk_per_um,
                              optical_potential_cut, run_fig1, run_fig3, second_moment_width, stationary_points)

DIMS = ["energy", "length", "time", "mass", "frequency", "force"]
unit_systems = st.one_of(
    st.just(UnitSystem()),
    st.builds(lambda m, l: UnitSystem(UnitMode.ATOMIC, m * AMU, l),
              st.floats(1.0, 300.0), st.floats(1e-9, 1e-4)),
)


@settings(max_examples=200, deadline=None)
@given(unit_systems, st.sampled_from(DIMS), st.floats(-1e6, 1e6, allow_nan=False).filter(lambda v: abs(v) > 1e-6))
def test_unit_round_trip(us, dim, value):
    back = convert_units(us, convert_units(us, value, dim, "to_si"), dim, "from_si")
    assert abs(back - value) <= 1e-12 * abs(value)


def test_unit_anchors():
    lab = UnitSystem()
    assert convert_units(lab, 1.0, "energy") == pytest.approx(1.380649e-32, rel=1e-15)
    assert convert_units(lab, 87.0, "mass") == pytest.approx(87 * 1.66053906660e-27, rel=1e-15)
    assert convert_units(lab, 1.0, "time") == 1e-3
    with pytest.raises(UnsupportedDimensionError):
        convert_units(lab, 1.0, "charge")
    with pytest.raises(UnsupportedDimensionError):
        UnitSystem(UnitMode.ATOMIC).si_factor("charge")
    with pytest.raises(ValueError):
        convert_units(lab, 1.0, "energy", "sideways")


def test_atomic_unit_system_is_consistent():
    us = UnitSystem(UnitMode.ATOMIC, 87 * AMU, 0.5e-6)
    # hbar = 1: energy * time = hbar
    assert us.si_factor("energy") * us.si_factor("time") == pytest.approx(1.054571817e-34, rel=1e-14)
    # m = 1: force = mass * length / time^2
    assert us.si_factor("force") == pytest.approx(us.si_factor("mass") * us.si_factor("length")
                                                  / us.si_factor("time") ** 2, rel=1e-14)


def test_mg_matches_force():
    assert abs(mg_nk_per_um(87.0) / 103.0 - 1) < 0.02


def test_optical_cut_and_classifier():
    otp = OpticalTrapParams()
    assert optical_potential_cut(otp, 0.0) == -otp.V0
    assert otp.z0 == pytest.approx(math.pi * 27.0**2 / 10.6)
    roots = stationary_points(otp)
    assert len(roots) == 2 and 0 < roots[0] < roots[1] < 3 * otp.w0
    assert has_metastable_well(otp)
    assert not has_metastable_well(replace(otp, V0=2286.0))
    vc = critical_depth(otp)
    assert 2286.0 < vc < 2400.0
    # at the threshold V'' vanishes where V' does: V0 = F w0 sqrt(e) / 2
    assert vc == pytest.approx(otp.F * otp.w0 * math.sqrt(math.e) / 2, rel=1e-8)
    with pytest.raises(ValueError):
        OpticalTrapParams(w0=-1.0)
    with pytest.raises(ValueError):
        critical_depth(otp, lo=2500.0, hi=4000.0)
    assert otp.laser_depth_nk() > 0


def test_run_fig1():
    x, out = run_fig1()
    assert out[2400.0][1] and not out[2286.0][1]
    assert out[2400.0][0].shape == x.shape


def test_survival_curve_validation():
    SurvivalCurve(CaseLabel.FREE, [0.0, 1.0], [1.0, 0.5])
    with pytest.raises(ValueError):
        SurvivalCurve(CaseLabel.FREE, [0.0, 0.0], [1.0, 0.5])
    with pytest.raises(ValueError):
        SurvivalCurve(CaseLabel.FREE, [0.0, 1.0], [1.0, 1.1])


def test_fit_log_slope():
    t = np.linspace(0, 5, 51)
    slope, icpt = fit_log_slope(t, 0.3 * np.exp(-0.7 * t), (1.0, 5.0))
    assert slope == pytest.approx(-0.7) and icpt == pytest.approx(math.log(0.3))
    with pytest.raises(InsufficientRangeError):
        fit_log_slope(t, np.exp(-t), (1.0, 1.05))


def test_asymptotic_check_requires_range_and_case():
    t = np.linspace(0, 3, 31)
    short = SurvivalCurve(CaseLabel.DECAYING_DELTA_ISHO, t, np.exp(-t))
    with pytest.raises(InsufficientRangeError):
        asymptotic_decay_check(short, PhysicalParams())
    with pytest.raises(ValueError):
        asymptotic_decay_check(SurvivalCurve(CaseLabel.FREE, t, np.exp(-t)), PhysicalParams())


def test_asymptotic_level_matches_constants():
    """P_c(6) against exp(-w t) c1 c2 within 10%."""
    p = PhysicalParams()
    c1, c2 = asymptotic_constants(p)
    P6, _ = analytic_survival(PropagatorHandle(Family.TD_DELTA_INVERTED_OSC, p), p, Fig2Config(), [6.0])
    assert abs(P6[0] / (math.exp(-6.0) * c1 * c2) - 1) < 0.1


def test_analytic_survival_starts_at_one_and_is_bounded():
    p = PhysicalParams()
    P, t = analytic_survival(PropagatorHandle(Family.INVERTED_OSC, p), p, Fig2Config(), [0.0, 0.5, 2.0])
    assert abs(P[0] - 1) < 1e-6
    assert np.all((P >= 0) & (P <= 1 + 1e-6))
    assert P[1] > P[2]


@pytest.mark.slow
def test_cosh_late_slope_matches_omega():
    """The late-time decay rate does not depend on the well shape."""
    p = PhysicalParams(omega=1.0, v0=0.0)
    slope, P = cosh_late_slope(p, CoshParams(alpha=1.0, mu=1.0), np.linspace(4.0, 8.0, 5))
    assert abs(slope / -1.0 - 1) < 0.05
    assert np.all(np.diff(P) < 0)


def test_fig3_dimensionless_parameters():
    lab = Fig3LabParams()
    p, cp = lab.dimensionless()
    assert (p.m, p.hbar, cp.mu) == (1.0, 1.0, 1.0)
    assert cp.alpha == pytest.approx(1 / 450)
    # time unit m / (hbar mu^2) for 87 u and mu = 2 / um
    t_unit = 87 * AMU / (1.054571817e-34 * (2e6) ** 2)
    assert p.omega == pytest.approx(2 * math.pi * 50 * t_unit, rel=1e-12)
    with pytest.raises(ValueError):
        Fig3LabParams(alpha=0.0)


def test_run_fig3_snapshots():
    p, cp = Fig3LabParams().dimensionless()
    cfg = Fig3Config(omega_times=(0.0, 1.0), n_out=600)
    snaps = run_fig3(p, cp, cfg)
    s0, s1 = snaps
    assert np.array_equal(np.abs(s0.psi.amps) ** 2, np.abs(psi_ch(cp, s0.psi.grid.x)) ** 2)
    for s in snaps:
        assert s.psi.norm() <= 1 + 1e-4 and s.psi_free.norm() <= 1 + 1e-4
    assert second_moment_width(s1.psi) < second_moment_width(s1.psi_free)
    assert s1.t == pytest.approx(1.0 / p.omega)
    # potential snapshot at t = 0 is the bare well plus the inverted oscillator
    x = s0.psi.grid.x
    assert np.allclose(s0.potential, -0.5 * p.omega**2 * x * x - cp.alpha / (
        0.5 * (cp.alpha * np.exp(x) + np.exp(-x))) ** 2)
