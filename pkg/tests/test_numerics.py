import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdwell import regression
from tdwell.numerics import (Grid1D, GridMismatchError, QuadratureConfig, QuadratureError, WaveFunction,
                             adaptive_gk, evolve_state, integrate_line, l2_distance, overlap, support_interval,
                             survival)
from tdwell.propagators import Family, PhysicalParams, PropagatorHandle, psi_cap, psi_delta, psi_free_delta

P = PhysicalParams()


def _battery():
    """(label, f, a, b, exact, breakpoints): 100 integrands with closed-form integrals."""
    out = []
    for a in np.linspace(0.3, 4.0, 20):
        out.append((f"gauss{a:.2f}", lambda x, a=a: np.exp(-a * x * x), -np.inf, np.inf, math.sqrt(math.pi / a), ()))
    for a in np.linspace(0.2, 5.0, 20):
        out.append((f"exp{a:.2f}", lambda x, a=a: np.exp(-a * x), 0.0, np.inf, 1.0 / a, ()))
    for k in np.linspace(0.0, 6.0, 20):
        out.append((f"cosgauss{k:.2f}", lambda x, k=k: np.cos(k * x) * np.exp(-x * x), -np.inf, np.inf,
                    math.sqrt(math.pi) * math.exp(-k * k / 4), ()))
    for s in np.linspace(-0.7, 2.0, 20):
        # int_0^1 x^s dx, algebraic endpoint singularity for s < 0
        out.append((f"pow{s:.2f}", lambda x, s=s: np.where(x > 0, np.abs(x) ** s, 0.0), 0.0, 1.0, 1.0 / (s + 1), ()))
    for c in np.linspace(-3, 3, 20):
        # kinked integrand with a breakpoint at the kink; the odd imaginary part integrates to zero
        out.append((f"kink{c:.2f}", lambda x, c=c: np.exp(-np.abs(x - c)) * (1 + 1j * np.sign(x - c)),
                    -np.inf, np.inf, 2.0 + 0j, (c,)))
    return out


BATTERY = _battery()


def test_battery_size():
    assert len(BATTERY) == 100


@pytest.mark.parametrize("case", BATTERY, ids=[c[0] for c in BATTERY])
def test_integrate_line_error_estimates_are_honest(case):
    """Either the tolerance is met, or QuadratureError reports an estimate whose bound still holds."""
    label, f, a, b, exact, bps = case
    cfg = QuadratureConfig(abs_tol=1e-11, rel_tol=1e-10)
    try:
        est, err = integrate_line(f, a, b, cfg, breakpoints=bps)
        met = True
    except QuadratureError as exc:
        est, err, met = exc.estimate, float(np.max(exc.err_est)), False
    true = abs(est - exact)
    # the reported bound covers the actual error (up to rounding)
    assert true <= err + 1e-14 * max(1.0, abs(exact))
    if met:
        assert true <= max(cfg.abs_tol, cfg.rel_tol * abs(exact))
    else:
        # only the strongest endpoint singularities may exhaust the bisection depth
        assert label.startswith("pow-")


def test_gaussian_to_1e12():
    est, _ = integrate_line(lambda x: np.exp(-x * x), -np.inf, np.inf, QuadratureConfig(1e-13, 1e-13))
    assert abs(est - math.sqrt(math.pi)) < 1e-12


def test_moshinsky_integral_with_real_k():
    from tdwell.specfun import moshinsky

    x, k, t = 1.0, 0.5, 2.0
    f = lambda xp: np.exp(1j * k * xp + 1j * (x - xp) ** 2 / (2 * t)) / np.sqrt(2j * np.pi * t)
    est, _ = integrate_line(f, -np.inf, 0.0, oscillatory_tail=True, center=x)
    assert abs(est - moshinsky(x, k, t)) < 1e-8


def test_oscillatory_tail_fresnel():
    """int_{-inf}^{inf} exp(i x^2) dx = sqrt(pi) exp(i pi/4)."""
    est, _ = integrate_line(lambda x: np.exp(1j * x * x), -np.inf, np.inf, oscillatory_tail=True)
    assert abs(est - math.sqrt(math.pi) * complex(math.cos(math.pi / 4), math.sin(math.pi / 4))) < 1e-8


def test_quadrature_error_carries_estimate():
    cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-14, max_depth=2)
    with pytest.raises(QuadratureError) as exc:
        integrate_line(lambda x: np.sin(1.0 / np.maximum(x, 1e-12)), 0.0, 1.0, cfg)
    assert exc.value.estimate is not None


def test_vector_integrand_and_tol_scale():
    ks = np.array([1.0, 2.0, 3.0])
    est, err, ok = adaptive_gk(lambda x: np.exp(-ks[:, None] * x[None, :] ** 2), -np.inf, np.inf,
                               tol_scale=np.array([1.0, 10.0, 100.0]))
    assert np.all(ok)
    assert np.allclose(est, np.sqrt(np.pi / ks), rtol=1e-8)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        Grid1D(1.0, 0.0, 32)
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, 8)


def test_grid_and_wavefunction():
    g = Grid1D.symmetric(5.0, 100)
    assert g.dx == pytest.approx(0.1)
    assert g.x[0] == -5.0 and g.x[-1] == pytest.approx(4.9)
    with pytest.raises(ValueError):
        WaveFunction(g, np.zeros(99, complex))
    with pytest.raises(ValueError):
        WaveFunction(g, np.full(100, np.nan, complex))
    wf = WaveFunction.from_function(g, lambda x: np.exp(-x * x) + 0j)
    assert wf(np.array([0.05]))[0] == pytest.approx(np.exp(-0.0025))
    wg = WaveFunction(g, wf.amps)
    # without the analytic form, sampling between nodes interpolates linearly
    assert abs(wg(np.array([0.05]))[0] - 0.5 * (wf.amps[50] + wf.amps[51])) < 1e-15
    lo, hi = support_interval(wf, 1e-6)
    assert -4.0 < lo < -3.5 and 3.5 < hi < 4.0


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(-3, 3), st.floats(0.0, 2.0))
def test_survival_bounds_and_overlap_symmetry(width, shift, k):
    g = Grid1D.symmetric(20.0, 1024)
    x = g.x
    a = np.exp(-0.5 * x * x) * np.pi**-0.25
    b = np.exp(-0.5 * ((x - shift) / width) ** 2 + 1j * k * x)
    b /= math.sqrt(np.sum(np.abs(b) ** 2) * g.dx)
    wa, wb = WaveFunction(g, a + 0j), WaveFunction(g, b)
    s = survival(wa, wb)
    assert -1e-12 <= s <= 1 + 1e-9
    assert abs(overlap(wa, wb) - np.conj(overlap(wb, wa))) < 1e-13
    assert survival(wa, wa) == pytest.approx(1.0, abs=1e-12)


def test_overlap_grid_mismatch():
    a = WaveFunction(Grid1D.symmetric(5.0, 64), np.ones(64, complex))
    b = WaveFunction(Grid1D.symmetric(6.0, 64), np.ones(64, complex))
    with pytest.raises(GridMismatchError):
        overlap(a, b)
    with pytest.raises(GridMismatchError):
        l2_distance(a, b)


def test_evolve_state_matches_closed_forms():
    g = Grid1D.symmetric(10.0, 256)
    f0 = lambda xx: psi_delta(P, xx)
    psi0 = WaveFunction(g, f0(g.x), func=f0)
    cfg = QuadratureConfig(abs_tol=1e-12, rel_tol=1e-10)
    out = evolve_state(PropagatorHandle(Family.INVERTED_OSC, P), psi0, 1.0, g, cfg, support=(-40, 40))
    assert np.max(np.abs(out.amps - psi_cap(P, g.x, 1.0))) < 1e-9
    even = evolve_state(PropagatorHandle(Family.FREE, P), psi0, 0.7, g, cfg, support=(-40, 40), even=True)
    assert np.max(np.abs(even.amps - psi_free_delta(P, g.x, 0.7))) < 1e-9
    with pytest.raises(ValueError):
        evolve_state(PropagatorHandle(Family.FREE, P), psi0, 0.0, g)


def test_free_survival_regression_constant():
    g = Grid1D.symmetric(20.0, 2048)
    f0 = lambda xx: psi_delta(P, xx)
    psi0 = WaveFunction(g, f0(g.x), func=f0)
    psit = evolve_state(PropagatorHandle(Family.FREE, P), psi0, 1.0, g,
                        QuadratureConfig(abs_tol=1e-12, rel_tol=1e-10), support=(-40, 40), even=True)
    assert abs(survival(psi0, psit) / regression.P_FREE_T1 - 1) < 1e-8


def test_richardson_overlap_beats_plain_sum():
    """The kinked psi_delta overlap converges faster with the Richardson step."""
    exact = 1.0
    g = Grid1D.symmetric(30.0, 600)
    a = WaveFunction(g, psi_delta(P, g.x))
    plain = abs(np.sum(np.abs(a.amps) ** 2) * g.dx - exact)
    assert abs(overlap(a, a).real - exact) < plain
