"""Fast regression harness behind `tdwell selftest`: one check group per library module."""

import time

import numpy as np

from . import regression


def _rel(a, b):
    return abs(a - b) / abs(b)


def _specfun(c):
    from .specfun import erfc_c, gamma_c, moshinsky

    rng = np.random.default_rng(0)
    x = rng.uniform(-5, 5, 200)
    k = rng.uniform(-3, 3, 200) + 1j * rng.uniform(-3, 3, 200)
    t = rng.uniform(0.1, 5, 200)
    ident = moshinsky(x, k, t) + moshinsky(-x, -k, t) - np.exp(1j * k * x - 0.5j * k * k * t)
    return (_rel(gamma_c(1 + 1j), c["GAMMA_1_PLUS_I"]) < 1e-12
            and _rel(erfc_c(1.0).real, c["ERFC_1"]) < 1e-14
            and _rel(moshinsky(1.0, -0.5j, 2.0), c["MOSHINSKY_1_M05I_2"]) < 1e-12
            and np.max(np.abs(ident)) < 1e-11)


def _propagators(c):
    from .numerics import QuadratureConfig, integrate_line
    from .propagators import PhysicalParams, k_isho, psi_cap, psi_delta

    p = PhysicalParams()
    cfg = QuadratureConfig(abs_tol=1e-12, rel_tol=1e-11)
    ok = True
    for x in (0.0, 0.7, -2.5):
        ref, _ = integrate_line(lambda xp: k_isho(p, x, 1.0, xp) * psi_delta(p, xp), -40, 40, cfg, breakpoints=(0.0,))
        ok &= abs(psi_cap(p, x, 1.0) - ref) < 1e-8
    return bool(ok)


def _mapping(c):
    from .mapping import exponential_profile, mapped_kernel, ode_residuals
    from .propagators import Family, PhysicalParams, PropagatorHandle, k_td_full

    p = PhysicalParams()
    rng = np.random.default_rng(1)
    x, xp, t = rng.uniform(-5, 5, 300), rng.uniform(-5, 5, 300), rng.uniform(0.01, 5, 300)
    prof = exponential_profile(p)
    a = k_td_full(p, x, t, xp)
    b = mapped_kernel(prof, PropagatorHandle(Family.STATIC_DELTA_FREE, p), p, x, t, xp)
    return np.max(np.abs(a - b) / np.abs(a)) < 1e-12 and ode_residuals(prof, p, t).max_normalized < 1e-12


def _spectral(c):
    from .propagators import PhysicalParams
    from .spectral import find_delta_pole, gamma_pole_ladder

    p = PhysicalParams()
    pole = find_delta_pole(p)
    ladder = gamma_pole_ladder(p, 4)
    return (abs(pole.E_pole - c["POLE_W1_V1"]) < 1e-9
            and np.max(np.abs(ladder - (-1j * (np.array([0, 2, 4, 6]) + 0.5)))) < 1e-12)


def _numerics(c):
    from .numerics import Grid1D, QuadratureConfig, WaveFunction, evolve_state, survival
    from .propagators import Family, PhysicalParams, PropagatorHandle, psi_delta

    p = PhysicalParams()
    grid = Grid1D.symmetric(20.0, 2048)
    f0 = lambda xx: psi_delta(p, xx)
    psi0 = WaveFunction(grid, f0(grid.x), func=f0)
    psit = evolve_state(PropagatorHandle(Family.FREE, p), psi0, 1.0, grid,
                        QuadratureConfig(abs_tol=1e-12, rel_tol=1e-10), support=(-40, 40), even=True)
    return _rel(survival(psi0, psit), c["P_FREE_T1"]) < 1e-8


def _oracle(c):
    from .numerics import Grid1D, WaveFunction
    from .oracle import PotentialSpec, cn_evolve

    grid = Grid1D.symmetric(10.24, 2048)
    x = grid.x
    psi0 = WaveFunction(grid, np.pi ** -0.25 * np.exp(-0.5 * x * x) + 0j)
    out = cn_evolve(PotentialSpec(static=True), None, psi0, 0.5, 1e-4)
    ref = np.pi ** -0.25 * (1 + 0.5j) ** -0.5 * np.exp(-0.5 * x * x / (1 + 0.5j))
    return float(np.sqrt(np.sum(np.abs(out.amps - ref) ** 2) * grid.dx)) < 1e-6


def _scenarios(c):
    from .scenarios import OpticalTrapParams, has_metastable_well, mg_nk_per_um

    return (has_metastable_well(OpticalTrapParams(V0=2400.0))
            and not has_metastable_well(OpticalTrapParams(V0=2286.0))
            and abs(mg_nk_per_um() / 103.0 - 1.0) < 0.02)


GROUPS = (
    ("specfun", _specfun),
    ("propagators", _propagators),
    ("mapping", _mapping),
    ("spectral", _spectral),
    ("numerics", _numerics),
    ("oracle", _oracle),
    ("scenarios", _scenarios),
)


def run_selftest(stream=None, constants=None):
    """Run every group; print one PASS/FAIL line each.  ``constants`` overrides entries of regression.ALL."""
    c = dict(regression.ALL)
    if constants:
        c.update(constants)
    all_ok = True
    for name, fn in GROUPS:
        t0 = time.perf_counter()
        try:
            ok = bool(fn(c))
            note = ""
        except Exception as e:  # a crash is a failure of that group, not of the harness
            ok, note = False, f" ({type(e).__name__}: {e})"
        all_ok &= ok
        if stream is not None:
            print(f"{'PASS' if ok else 'FAIL'} {name} [{time.perf_counter() - t0:.2f}s]{note}", file=stream)
    return all_ok
