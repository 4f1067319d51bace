"""End-to-end experiments: survival curves, the optical trap cut, and the cosh-well atom laser.

Everything runs in dimensionless units; UnitSystem converts at the edges.
Lab units are nK (energy, times k_B), micrometres, milliseconds and atomic
mass units.  The cosh-well scenario uses 1/mu as length unit, hbar^2 mu^2/m
as energy unit and m/(hbar mu^2) as time unit.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import oracle
from .mapping import exponential_profile, mapped_kernel
from .numerics import Grid1D, QuadratureConfig, WaveFunction, evolve_state, integrate_line, survival
from .propagators import (CoshParams, Family, PhysicalParams, PropagatorHandle, k_delta_static, psi_ch,
                          psi_delta, v_cosh)

K_B = 1.380649e-23
HBAR_SI = 1.054571817e-34
AMU = 1.66053906660e-27
G_EARTH = 9.81


class UnsupportedDimensionError(ValueError):
    pass


class InsufficientRangeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# units


class UnitMode(enum.Enum):
    ATOMIC = "Atomic"
    LAB = "LabNanoKelvinMicron"


_LAB_SI = {
    "energy": K_B * 1e-9,
    "length": 1e-6,
    "time": 1e-3,
    "mass": AMU,
    "frequency": 1e3,
    "force": K_B * 1e-9 / 1e-6,
}


@dataclass(frozen=True)
class UnitSystem:
    """Either the lab system or a dimensionless (m = hbar = 1) system anchored by a mass and a length."""

    mode: UnitMode = UnitMode.LAB
    mass_kg: float = 87 * AMU
    length_m: float = 1e-6

    def si_factor(self, dimension):
        if self.mode is UnitMode.LAB:
            try:
                return _LAB_SI[dimension]
            except KeyError:
                raise UnsupportedDimensionError(dimension) from None
        m, l = self.mass_kg, self.length_m
        t = m * l * l / HBAR_SI
        table = {
            "mass": m,
            "length": l,
            "time": t,
            "energy": HBAR_SI / t,
            "frequency": 1.0 / t,
            "force": HBAR_SI / (t * l),
        }
        if dimension not in table:
            raise UnsupportedDimensionError(dimension)
        return table[dimension]


def convert_units(us, value, dimension, direction="to_si"):
    """Multiply into SI ("to_si") or divide out of SI ("from_si")."""
    f = us.si_factor(dimension)
    if direction == "to_si":
        return np.asarray(value, float) * f
    if direction == "from_si":
        return np.asarray(value, float) / f
    raise ValueError("direction must be 'to_si' or 'from_si'")


def mg_nk_per_um(mass_amu=87.0, g=G_EARTH):
    """Gravitational force m g in nK/um."""
    return mass_amu * AMU * g / _LAB_SI["force"]


# ---------------------------------------------------------------------------
# optical trap cut


@dataclass(frozen=True)
class OpticalTrapParams:
    V0: float = 2400.0            # nK
    w0: float = 27.0              # um
    lambda_laser: float = 10.6    # um
    F: float = 103.0              # nK/um
    alpha_s: float = 5.3e-39      # m^2 C / V
    P_laser: float = 0.2          # W
    epsilon0: float = 8.8541878128e-12
    c: float = 299792458.0

    def __post_init__(self):
        for name in ("V0", "w0", "lambda_laser", "F", "alpha_s", "P_laser", "epsilon0", "c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def z0(self):
        return math.pi * self.w0**2 / self.lambda_laser

    def laser_depth_nk(self):
        """alpha_s P / (pi eps0 c w0^2) in nK."""
        w0 = self.w0 * 1e-6
        return self.alpha_s * self.P_laser / (math.pi * self.epsilon0 * self.c * w0 * w0) / _LAB_SI["energy"]


def optical_potential_cut(otp, x):
    """-V0 exp(-2 x^2/w0^2) - F x along the gravity axis (nK, x in um)."""
    x = np.asarray(x, float)
    return -otp.V0 * np.exp(-2.0 * x * x / otp.w0**2) - otp.F * x


def _dv(otp, x):
    return 4.0 * otp.V0 * x / otp.w0**2 * np.exp(-2.0 * x * x / otp.w0**2) - otp.F


def stationary_points(otp, span=3.0, n=6001):
    """Real roots of V'(x) in (0, span w0), bracketed on a fine grid and polished by brentq."""
    xs = np.linspace(0.0, span * otp.w0, n)[1:]
    d = _dv(otp, xs)
    roots = []
    for i in np.nonzero(np.sign(d[:-1]) != np.sign(d[1:]))[0]:
        roots.append(brentq(lambda z: _dv(otp, z), xs[i], xs[i + 1], xtol=1e-12))
    return roots


def has_metastable_well(otp):
    """A local minimum (and the barrier top beyond it) exists iff V' has two roots."""
    return len(stationary_points(otp)) >= 2


def critical_depth(otp, lo=1000.0, hi=4000.0, tol=1e-9):
    """Smallest V0 (nK) with a metastable well, by bisection on the classifier."""
    from dataclasses import replace

    if has_metastable_well(replace(otp, V0=lo)) or not has_metastable_well(replace(otp, V0=hi)):
        raise ValueError("bracket does not straddle the transition")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if has_metastable_well(replace(otp, V0=mid)):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def run_fig1(depths=(2400.0, 2286.0), w0=27.0, F=103.0, x_range=(-60.0, 120.0), n=721):
    x = np.linspace(*x_range, n)
    out = {}
    for v0 in depths:
        otp = OpticalTrapParams(V0=v0, w0=w0, F=F)
        out[v0] = (optical_potential_cut(otp, x), has_metastable_well(otp))
    return x, out


# ---------------------------------------------------------------------------
# survival curves


class CaseLabel(enum.Enum):
    FREE = "FreeParticle"
    STATIC_DELTA_ISHO = "StaticDeltaIsho"
    DECAYING_DELTA_ISHO = "DecayingDeltaIsho"
    PURE_ISHO = "PureIsho"


@dataclass
class SurvivalCurve:
    case_label: CaseLabel
    t: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, float)
        self.P = np.asarray(self.P, float)
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("sample times must increase strictly")
        if np.any(self.P < -1e-12) or np.any(self.P > 1 + 1e-6):
            raise ValueError("survival probability outside [0, 1 + 1e-6]")


@dataclass(frozen=True)
class Fig2Config:
    t_max: float = 8.0
    n_samples: int = 200
    half_width: float = 20.0
    n_grid: int = 2048
    oracle_n: int = 8192
    oracle_dt: float = 1e-3
    cap_strength: float = 200.0
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)


def _times(cfg):
    return np.linspace(0.0, cfg.t_max, cfg.n_samples + 1)


def analytic_survival(handle, p, cfg=Fig2Config(), times=None):
    """P(t) = |<psi_delta|psi(t)>|^2 with psi(t) from quadrature of the kernel.

    The output grid is symmetric and every kernel here preserves parity, so
    only |x| is computed; the per-point tolerance is relaxed where psi_delta
    (the overlap partner) is small.
    """
    if times is None:
        times = _times(cfg)
    grid = Grid1D.symmetric(cfg.half_width, cfg.n_grid)
    f0 = lambda xx: psi_delta(p, xx)
    psi0 = WaveFunction(grid, f0(grid.x), func=f0)
    weight = np.abs(psi0.amps) / np.abs(psi0.amps).max()
    support = (-40.0 / p.kappa, 40.0 / p.kappa)
    P = np.empty(len(times))
    for i, t in enumerate(times):
        if t == 0:
            P[i] = survival(psi0, psi0)
            continue
        psit = evolve_state(handle, psi0, float(t), grid, cfg.quad, support=support, even=True, weight=weight)
        P[i] = survival(psi0, psit)
    return np.minimum(P, 1.0 + 1e-9), times


def oracle_survival_static_delta(p, cfg=Fig2Config(), times=None, sigmas=None):
    """Curve (b): static delta on the inverted oscillator via the sigma-extrapolated CN oracle."""
    if times is None:
        times = _times(cfg)
    if sigmas is None:
        s0 = oracle.delta_sigma(p)
        sigmas = (s0, s0 / 2, s0 / 4)
    grid = Grid1D.symmetric(cfg.half_width, cfg.oracle_n)
    psi0 = WaveFunction(grid, psi_delta(p, grid.x))
    cap = oracle.CapSpec(strength=cfg.cap_strength)
    snaps = [float(t) for t in times if t > 0]
    runs = oracle.evolve_sigma_extrapolated(oracle.static_delta_isho_potential, sigmas, cap, psi0,
                                            float(times[-1]), cfg.oracle_dt, p, snapshots=snaps)
    vals = [survival(psi0, psi0) if t == 0 else None for t in times]
    it = iter(runs[:len(snaps)])
    P = np.array([v if v is not None else survival(psi0, next(it)) for v in vals])
    return np.clip(P, 0.0, 1.0 + 1e-9), times


def run_fig2(p=PhysicalParams(), cfg=Fig2Config()):
    """Curves (a) free, (b) static delta + inverted oscillator, (c) decaying delta + inverted oscillator, (d) inverted oscillator."""
    curves = []
    Pa, t = analytic_survival(PropagatorHandle(Family.FREE, p), p, cfg)
    curves.append(SurvivalCurve(CaseLabel.FREE, t, Pa))
    Pb, _ = oracle_survival_static_delta(p, cfg, t)
    curves.append(SurvivalCurve(CaseLabel.STATIC_DELTA_ISHO, t, Pb))
    Pc, _ = analytic_survival(PropagatorHandle(Family.TD_DELTA_INVERTED_OSC, p), p, cfg)
    curves.append(SurvivalCurve(CaseLabel.DECAYING_DELTA_ISHO, t, Pc))
    Pd, _ = analytic_survival(PropagatorHandle(Family.INVERTED_OSC, p), p, cfg)
    curves.append(SurvivalCurve(CaseLabel.PURE_ISHO, t, Pd))
    return curves


def fit_log_slope(t, P, window):
    """Least-squares slope (and intercept) of ln P on the time window [lo, hi]."""
    t, P = np.asarray(t), np.asarray(P)
    sel = (t >= window[0]) & (t <= window[1]) & (P > 0)
    if np.count_nonzero(sel) < 3:
        raise InsufficientRangeError("fewer than three samples in the fit window")
    slope, icpt = np.polyfit(t[sel], np.log(P[sel]), 1)
    return float(slope), float(icpt)


def asymptotic_constants(p, cfg=QuadratureConfig(abs_tol=1e-12, rel_tol=1e-10)):
    """The two |.|^2 constants of the late-time law P ~ exp(-w t) c1 c2 for psi_delta.

    c1 = |int dx exp(i m w x^2/2hbar) psi*(x)|^2
    c2 = |int dx' exp(-i m w x'^2/2hbar) K_static(0, 1/(2w) | x', 0) psi(x')|^2
    """
    w = p.omega
    a = 0.5 * p.m * w / p.hbar
    cut = 40.0 / p.kappa
    f1 = lambda x: np.exp(1j * a * x * x) * np.conj(psi_delta(p, x))
    i1, _ = integrate_line(f1, -cut, cut, cfg, breakpoints=(0.0,))
    tt = 1.0 / (2.0 * w)
    f2 = lambda x: np.exp(-1j * a * x * x) * k_delta_static(p, 0.0, tt, x) * psi_delta(p, x)
    i2, _ = integrate_line(f2, -cut, cut, cfg, breakpoints=(0.0,))
    return abs(i1) ** 2, abs(i2) ** 2


def asymptotic_decay_check(curve, p, window=None):
    """Late-time slope of ln P and the two constants of the asymptotic law.

    Default window is [t_max/2, t_max]; the curve must reach w t >= 5.
    """
    if curve.case_label is not CaseLabel.DECAYING_DELTA_ISHO:
        raise ValueError("asymptotic check applies to the decaying-delta curve")
    t_max = curve.t[-1]
    if p.omega * t_max < 5.0:
        raise InsufficientRangeError("curve must extend to omega t >= 5")
    if window is None:
        window = (0.5 * t_max, t_max)
    slope, _ = fit_log_slope(curve.t, curve.P, window)
    return slope, asymptotic_constants(p)


# ---------------------------------------------------------------------------
# cosh-well atom laser


@dataclass(frozen=True)
class Fig3LabParams:
    alpha: float = 1.0 / 450.0
    mu_per_m: float = 2e6
    omega_hz: float = 2 * math.pi * 50.0   # angular frequency in rad/s
    mass_amu: float = 87.0

    def __post_init__(self):
        for name in ("alpha", "mu_per_m", "omega_hz", "mass_amu"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def units(self):
        return UnitSystem(UnitMode.ATOMIC, self.mass_amu * AMU, 1.0 / self.mu_per_m)

    def dimensionless(self):
        """(PhysicalParams, CoshParams) with m = hbar = mu = 1."""
        w = self.omega_hz * self.units.si_factor("time")
        return PhysicalParams(m=1.0, hbar=1.0, omega=w, v0=0.0), CoshParams(alpha=self.alpha, mu=1.0)


@dataclass(frozen=True)
class Fig3Config:
    omega_times: tuple = (0.0, 0.5, 1.0, 1.5)
    x_min: float = -40.0
    x_max: float = 80.0
    n_out: int = 1200
    oracle_x: tuple = (-60.0, 100.0)
    oracle_n: int = 8192
    oracle_dt: float = 2e-3
    quad: QuadratureConfig = field(default_factory=lambda: QuadratureConfig(abs_tol=1e-9, rel_tol=1e-8))


@dataclass
class Fig3Snapshot:
    t: float                 # dimensionless
    omega_t: float
    psi: WaveFunction
    psi_free: WaveFunction
    potential: np.ndarray    # dimensionless energy


def cosh_td_potential_values(p, cp, x, t):
    """-m w^2 x^2/2 + V_ch(x/C)/C^2, C = exp(w t)."""
    c = math.exp(p.omega * t)
    return -0.5 * p.m * p.omega**2 * np.asarray(x) ** 2 + v_cosh(p, cp, np.asarray(x) / c) / (c * c)


class _MappedCosh:
    """Kernel callable for evolve_state: the cosh kernel carried through the exponential map."""

    def __init__(self, p, cp):
        self.p = p
        self.prof = exponential_profile(p)
        self.base = PropagatorHandle(Family.COSH_WELL, p, cp)

    def __call__(self, x, t, xp):
        return mapped_kernel(self.prof, self.base, self.p, x, t, xp)


def _cosh_support(cp, cut=40.0):
    centre = -math.log(cp.alpha) / (2.0 * cp.mu)
    return (centre - cut / cp.mu, centre + cut / cp.mu), centre


def run_fig3(p, cp, cfg=Fig3Config()):
    """Snapshots of psi_ch evolved under the time-dependent cosh well (mapped kernel) and freely."""
    grid = Grid1D(cfg.x_min, cfg.x_max, cfg.n_out)
    f0 = lambda xx: psi_ch(cp, xx)
    psi0 = WaveFunction(grid, f0(grid.x), func=f0)
    support, centre = _cosh_support(cp)
    mapped = _MappedCosh(p, cp)
    free = PropagatorHandle(Family.FREE, p)
    out = []
    for wt in cfg.omega_times:
        t = wt / p.omega
        if t == 0:
            psi, psi_f = psi0, psi0
        else:
            psi = evolve_state(mapped, psi0, t, grid, cfg.quad, breakpoints=(centre,), support=support)
            psi_f = evolve_state(free, psi0, t, grid, cfg.quad, breakpoints=(centre,), support=support)
        out.append(Fig3Snapshot(t, wt, psi, psi_f, cosh_td_potential_values(p, cp, grid.x, t)))
    return out


def fig3_oracle(p, cp, cfg=Fig3Config()):
    """CN evolution of psi_ch under the time-dependent cosh well at the same snapshot times."""
    grid = Grid1D(cfg.oracle_x[0], cfg.oracle_x[1], cfg.oracle_n)
    psi0 = WaveFunction(grid, psi_ch(cp, grid.x))
    pot = oracle.cosh_td_potential(p, cp)
    times = [wt / p.omega for wt in cfg.omega_times if wt > 0]
    snaps = oracle.cn_evolve(pot, oracle.CapSpec(), psi0, times[-1], cfg.oracle_dt, p, snapshots=times)
    return [psi0] + snaps[:len(times)]


def second_moment_width(psi):
    x = psi.grid.x
    rho = np.abs(psi.amps) ** 2
    nrm = rho.sum()
    mean = (x * rho).sum() / nrm
    return math.sqrt(((x - mean) ** 2 * rho).sum() / nrm)


def cosh_late_slope(p, cp, times, grid=None, cfg=QuadratureConfig(abs_tol=1e-11, rel_tol=1e-9)):
    """Survival of psi_ch under the mapped cosh kernel, and the fitted slope of ln P over ``times``."""
    support, centre = _cosh_support(cp)
    if grid is None:
        grid = Grid1D(support[0], support[1], 4096)
    f0 = lambda xx: psi_ch(cp, xx)
    psi0 = WaveFunction(grid, f0(grid.x), func=f0)
    weight = np.abs(psi0.amps) / np.abs(psi0.amps).max()
    mapped = _MappedCosh(p, cp)
    P = np.array([survival(psi0, evolve_state(mapped, psi0, float(t), grid, cfg, breakpoints=(centre,),
                                              support=support, weight=weight)) for t in times])
    slope, _ = fit_log_slope(times, P, (times[0], times[-1]))
    return slope, P
