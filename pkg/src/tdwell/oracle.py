"""Crank-Nicolson reference solver for i hbar psi_t = [-hbar^2/(2m) d_xx + V(x, t)] psi.

Delta wells are replaced by unit-area Gaussians of width sigma; a complex
absorbing layer at both grid edges removes outgoing flux.  The Laplacian is
the 5-point fourth-order stencil with psi = 0 beyond the grid, so every step
is one banded (pentadiagonal) solve.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import lapack, solve_banded

from .numerics import Grid1D, WaveFunction
from .propagators import PhysicalParams

log = logging.getLogger(__name__)


class InstabilityError(ArithmeticError):
    pass


class NoBoundStateError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DeltaTerm:
    """-strength(t) * delta_sigma(x - center)."""

    strength: Callable[[float], float]
    center: float = 0.0
    sigma: float = 0.05

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class PotentialSpec:
    v: Callable = field(default=lambda x, t: np.zeros_like(x))
    delta_terms: Sequence[DeltaTerm] = ()

    static: bool = False

    def sampler(self, x):
        """Return t -> V(x, t) on the fixed grid x, delta terms included.

        Gaussian shapes are normalized to unit area on the grid itself so the
        discrete well strength is exact.
        """
        dx = x[1] - x[0]
        shapes = []
        for d in self.delta_terms:
            g = np.exp(-0.5 * ((x - d.center) / d.sigma) ** 2)
            shapes.append(g / (g.sum() * dx))
        cached = np.asarray(self.v(x, 0.0), dtype=float) if self.static else None

        def at(t):
            base = cached if cached is not None else np.asarray(self.v(x, t), dtype=float)
            out = base.copy()
            for d, g in zip(self.delta_terms, shapes):
                out -= d.strength(t) * g
            return out

        return at

    def sample(self, x, t):
        return self.sampler(x)(t)


@dataclass(frozen=True)
class CapSpec:
    """Absorbing layer -i strength (d/width)^power within width_fraction of each edge."""

    width_fraction: float = 0.15
    strength: float = 5.0
    power: int = 3

    def __post_init__(self):
        if not 0 < self.width_fraction < 0.3:
            raise ValueError("width_fraction must lie in (0, 0.3)")
        if self.power < 2:
            raise ValueError("power must be >= 2")

    def profile(self, x):
        x = np.asarray(x, float)
        lo, hi = x[0], x[-1]
        width = self.width_fraction * (hi - lo)
        d = np.maximum(0.0, np.maximum((lo + width) - x, x - (hi - width)))
        return self.strength * (d / width) ** self.power

    def inner_mask(self, x):
        return self.profile(x) == 0.0



def _kinetic_bands(n, dx, m, hbar):
    """Banded form (u = l = 2) of -hbar^2/(2m) d_xx with the 5-point stencil."""
    c = -hbar**2 / (2.0 * m) / (12.0 * dx * dx)
    ab = np.zeros((5, n), dtype=complex)
    ab[0, 2:] = c * -1.0
    ab[1, 1:] = c * 16.0
    ab[2, :] = c * -30.0
    ab[3, :-1] = c * 16.0
    ab[4, :-2] = c * -1.0
    return ab


def _band_matvec(ab, v):
    n = v.size
    out = ab[2] * v
    out[:-1] += ab[1, 1:] * v[1:]
    out[:-2] += ab[0, 2:] * v[2:]
    out[1:] += ab[3, :-1] * v[:-1]
    out[2:] += ab[4, :-2] * v[:-2]
    return out


def apply_hamiltonian(psi, x, pot_values, params=PhysicalParams()):
    dx = x[1] - x[0]
    kin = _kinetic_bands(x.size, dx, params.m, params.hbar)
    return _band_matvec(kin, psi) + pot_values * psi


def cn_evolve(pot, cap, psi0, t_final, dt, params=PhysicalParams(), t0=0.0, snapshots=()):
    """Advance psi0 from t0 to t0 + t_final with midpoint-time Crank-Nicolson.

    ``cap`` may be None.  Returns the final WaveFunction, or a list of
    WaveFunctions at the requested ``snapshots`` (absolute times, ascending)
    followed by the final state.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    grid = psi0.grid
    x = grid.x
    dx = grid.dx
    if dt > 10.0 * params.m * dx * dx / params.hbar:
        log.info("dt=%g is large for dx=%g; phase accuracy may suffer", dt, dx)
    nsteps = max(1, int(round(t_final / dt)))
    dt = t_final / nsteps
    kin = _kinetic_bands(x.size, dx, params.m, params.hbar)
    potential = pot.sampler(x)
    absorb = cap.profile(x) if cap is not None else np.zeros_like(x)
    a = 0.5j * dt / params.hbar
    psi = psi0.amps.astype(complex).copy()
    norm_prev = np.sum(np.abs(psi) ** 2) * dx
    pending = sorted(snapshots)
    shots = []
    # LU storage for zgbtrf: 2 fill rows above the 5 bands
    lu_store = np.zeros((7, x.size), dtype=complex)
    lu_store[2:] = a * kin
    diag_kin = lu_store[4].copy()
    vprev = None
    lu = piv = None
    for step in range(nsteps):
        t_mid = t0 + (step + 0.5) * dt
        vmid = potential(t_mid) - 1j * absorb
        rhs = psi - a * (_band_matvec(kin, psi) + vmid * psi)
        # static Hamiltonians factor once; time-dependent ones refactor each step
        if vprev is None or not np.array_equal(vmid, vprev):
            ab = lu_store.copy()
            ab[4] = diag_kin + 1.0 + a * vmid
            lu, piv, info = lapack.zgbtrf(ab, 2, 2)
            if info != 0:
                raise InstabilityError(f"singular Crank-Nicolson matrix (info={info})")
            vprev = vmid
        psi, info = lapack.zgbtrs(lu, 2, 2, rhs, piv)
        if cap is None:
            norm = np.sum(np.abs(psi) ** 2) * dx
            if norm > norm_prev * (1.0 + 1e-3):
                raise InstabilityError(f"norm grew from {norm_prev:.6g} to {norm:.6g} at step {step}")
            norm_prev = norm
        t_now = t0 + (step + 1) * dt
        while pending and t_now >= pending[0] - 0.5 * dt:
            shots.append(WaveFunction(grid, psi.copy(), pending.pop(0)))
    final = WaveFunction(grid, psi, t0 + t_final)
    if snapshots:
        return shots + [final]
    return final


def cap_reflection(cap, grid, k0, params=PhysicalParams(), width=None, dt=None):
    """Amplitude reflected back into the inner region by ``cap`` for a free Gaussian probe.

    The probe (momentum hbar k0 toward the right edge, spread k0/8) starts at
    the grid center and runs until its center reaches the far end of the
    absorbing layer.  The same probe is run without absorber on a grid
    padded so that nothing reaches its edge; the inner-region L2 difference
    between the two runs is the reflected amplitude per unit incident norm.
    """
    if width is None:
        width = 8.0 / k0
    x = grid.x
    x_c = 0.5 * (x[0] + x[-1])
    half = 0.5 * (x[-1] - x[0])
    v = params.hbar * k0 / params.m
    t_final = half / v
    if dt is None:
        dt = min(0.02 * params.m / (params.hbar * k0 * k0), t_final / 200.0)
    probe = lambda xx: np.exp(-0.5 * ((xx - x_c) / width) ** 2 + 1j * k0 * (xx - x_c))
    nrm = math.sqrt(np.sum(np.abs(probe(x)) ** 2) * grid.dx)
    out = cn_evolve(PotentialSpec(static=True), cap, WaveFunction(grid, probe(x) / nrm), t_final, dt, params)
    pad = int(math.ceil(2.0 * half / grid.dx))
    big = Grid1D(grid.x_min - pad * grid.dx, grid.x_max + pad * grid.dx, grid.n + 2 * pad)
    ref = cn_evolve(PotentialSpec(static=True), None, WaveFunction(big, probe(big.x) / nrm), t_final, dt, params)
    inner = cap.inner_mask(x)
    diff = out.amps[inner] - ref.amps[pad:pad + grid.n][inner]
    return math.sqrt(np.sum(np.abs(diff) ** 2) * grid.dx)


def tune_cap_strength(grid, k0, params=PhysicalParams(), candidates=(1.0, 2.0, 5.0, 10.0, 20.0, 50.0),
                      width_fraction=0.15, power=3):
    """Pick the CAP strength with the least reflection of a free probe at momentum k0."""
    best = None
    for s in candidates:
        cap = CapSpec(width_fraction, s, power)
        r = cap_reflection(cap, grid, k0, params)
        if best is None or r < best[1]:
            best = (cap, r)
    return best


def cn_ground_state(pot, psi_seed, tau, params=PhysicalParams(), max_steps=100_000, drift_tol=1e-10):
    """Lowest state by imaginary-time relaxation (implicit step of size tau).

    Each step solves (1 + tau H / hbar) psi_new = psi and renormalizes, so it
    is inverse iteration and converges to the lowest eigenvector of the
    discretized Hamiltonian.  Returns (WaveFunction, Rayleigh-quotient energy).
    """
    grid = psi_seed.grid
    x = grid.x
    dx = grid.dx
    v = pot.sample(x, 0.0)
    kin = _kinetic_bands(x.size, dx, params.m, params.hbar)
    lhs = (tau / params.hbar) * kin
    lhs[2] += 1.0 + (tau / params.hbar) * v
    psi = psi_seed.amps.astype(complex).copy()
    psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * dx)
    energy = np.inf
    for _ in range(max_steps):
        psi = solve_banded((2, 2), lhs, psi, check_finite=False)
        psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * dx)
        hpsi = _band_matvec(kin, psi) + v * psi
        e_new = float(np.real(np.vdot(psi, hpsi)) * dx)
        if abs(e_new - energy) < drift_tol:
            energy = e_new
            break
        energy = e_new
    else:
        raise ArithmeticError("imaginary-time relaxation did not converge")
    edge = min(v[0], v[-1])
    # a state at or above the boundary potential is a box mode, not a bound state
    if energy >= edge - 1e-6 * max(1.0, abs(edge)):
        raise NoBoundStateError(f"relaxed energy {energy:.6g} is not below the continuum edge {edge:.6g}")
    return WaveFunction(grid, psi), energy


def sigma_extrapolate(values: Sequence, sigmas: Sequence[float]):
    """Polynomial extrapolation of values(sigma) to sigma = 0 (Neville).

    Works elementwise on arrays (wavefunction amplitudes or survival curves).
    """
    if len(values) != len(sigmas):
        raise ValueError("one value per sigma required")
    table = [np.asarray(v) for v in values]
    s = list(sigmas)
    for k in range(1, len(table)):
        for i in range(len(table) - k):
            table[i] = (s[i + k] * table[i] - s[i] * table[i + 1]) / (s[i + k] - s[i])
    return table[0]


def delta_sigma(params):
    """Default regularization width: 5% of the bound-state length."""
    return 0.05 * params.hbar**2 / (params.m * params.v0)


def td_delta_isho_potential(params, sigma):
    """-m w^2 x^2 / 2 - V0 exp(-w t) delta_sigma(x)."""
    w = params.omega
    return PotentialSpec(
        v=lambda x, t: -0.5 * params.m * w * w * x * x,
        delta_terms=(DeltaTerm(lambda t: params.v0 * math.exp(-w * t), 0.0, sigma),),
        static=True,
    )


def static_delta_isho_potential(params, sigma):
    w = params.omega
    return PotentialSpec(
        v=lambda x, t: -0.5 * params.m * w * w * x * x,
        delta_terms=(DeltaTerm(lambda t: params.v0, 0.0, sigma),),
        static=True,
    )


def static_delta_potential(params, sigma):
    return PotentialSpec(delta_terms=(DeltaTerm(lambda t: params.v0, 0.0, sigma),), static=True)


def cosh_td_potential(params, cp):
    """-m w^2 x^2/2 + V_ch(x/C)/C^2 with C = exp(w t)."""
    from .propagators import v_cosh

    w = params.omega
    return PotentialSpec(
        v=lambda x, t: -0.5 * params.m * w * w * x * x
        + v_cosh(params, cp, x * math.exp(-w * t)) * math.exp(-2.0 * w * t))


def evolve_sigma_extrapolated(make_potential, sigmas, cap, psi0, t_final, dt, params, snapshots=()):
    """Run cn_evolve for each sigma and extrapolate the amplitudes to sigma -> 0."""
    runs = [cn_evolve(make_potential(params, s), cap, psi0, t_final, dt, params, snapshots=snapshots)
            for s in sigmas]
    if snapshots:
        out = []
        for i in range(len(runs[0])):
            amps = sigma_extrapolate([r[i].amps for r in runs], sigmas)
            out.append(WaveFunction(psi0.grid, amps, runs[0][i].t))
        return out
    amps = sigma_extrapolate([r.amps for r in runs], sigmas)
    return WaveFunction(psi0.grid, amps, runs[0].t)
