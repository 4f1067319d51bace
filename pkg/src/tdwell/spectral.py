"""Energy-domain objects for the delta well on the inverted oscillator.

Green functions of the inverted oscillator, the resolvent combination with a
delta potential, the resonance pole of 1 + V0 G0(0, 0; E) and the derived
lifetime hbar / E_i.  Square roots of 1/i are taken as exp(-i pi/4).
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .numerics import QuadratureConfig, adaptive_gk, integrate_line
from .propagators import EXP_MINUS_IPI4, PhysicalParams, k_isho
from .specfun import GammaPoleError, beta_c, gamma_c, pcf_d


class PoleSearchError(ArithmeticError):
    pass


class DegeneratePoleError(ValueError):
    pass


@dataclass(frozen=True)
class PoleResult:
    """E_pole = E_r - i E_i / 2.

    ``log_width`` is ln E_i from the extended-precision refinement; it stays
    finite when E_i itself underflows double precision (omega -> 0).
    """

    E_pole: complex
    newton_iters: int
    residual: float
    hbar: float = 1.0
    log_width: float = float("nan")

    @property
    def E_r(self):
        return self.E_pole.real

    @property
    def E_i(self):
        return -2.0 * self.E_pole.imag

    @property
    def lifetime(self):
        return lifetime_estimate(self)


def _eps(p, E):
    # E / (2 i hbar omega)
    return np.asarray(E, dtype=complex) / (2j * p.hbar * p.omega)


def g0_origin_isho(p, E):
    """G0(0, 0; E) = (1/(2 i hbar w)) sqrt(m w/(pi i hbar)) B(E/(2 i hbar w) + 1/4, 1/2)."""
    if p.omega <= 0:
        raise ValueError("g0_origin_isho requires omega > 0")
    pref = EXP_MINUS_IPI4 * math.sqrt(p.m * p.omega / (math.pi * p.hbar)) / (2j * p.hbar * p.omega)
    return pref * beta_c(_eps(p, E) + 0.25, 0.5)


def g0_offorigin_isho(p, x, E):
    """G0(x, 0; E) through the parabolic cylinder function D_nu; depends on |x| only."""
    if p.omega <= 0:
        raise ValueError("g0_offorigin_isho requires omega > 0")
    eps = _eps(p, E)
    nu = -0.5 - 2.0 * eps
    z = math.sqrt(2.0) * np.abs(np.asarray(x, float)) * EXP_MINUS_IPI4 * math.sqrt(p.m * p.omega / p.hbar)
    pref = (2.0 ** (-0.75 + eps) / (1j * p.hbar)
            * EXP_MINUS_IPI4 * math.sqrt(p.m / (math.pi * p.hbar * p.omega)))
    return pref * gamma_c(0.25 + eps) * pcf_d(nu, z)


def g_free(p, x, E):
    """Free-particle G(x, 0; E) = -i m/(hbar^2 k) exp(i k |x|), Im k > 0."""
    k = np.sqrt(2.0 * p.m * np.asarray(E, dtype=complex)) / p.hbar
    k = np.where(k.imag < 0, -k, k)
    return -1j * p.m / (p.hbar**2 * k) * np.exp(1j * k * np.abs(x))


def resolvent_delta(p, x, xp, E, g0=None):
    """G(x, x'; E) for H0 - V0 delta(x), given the source-at-origin column of G0.

    Only x = 0 or x' = 0 is supported (the full two-point G0 is not
    available); the general combination formula is applied with G0(x, x') set
    to the column value.  ``g0(x, E)`` defaults to the inverted oscillator.
    """
    if g0 is None:
        g0 = lambda xx, EE: g0_offorigin_isho(p, xx, EE)
    x = float(x)
    xp = float(xp)
    if x != 0.0 and xp != 0.0:
        raise NotImplementedError("G0(x, x') with both arguments nonzero is not available")
    g00 = g0(0.0, E)
    denom = 1.0 + p.v0 * g00
    if denom == 0:
        raise ZeroDivisionError("E is exactly at a resolvent pole")
    gx0 = g0(x, E)
    g0xp = g0(xp, E)
    gxxp = g0(x if xp == 0.0 else xp, E)
    return gxxp - p.v0 * gx0 * g0xp / denom


def pole_function(p, E):
    """f(E) = 1 + V0 G0(0, 0; E)."""
    return 1.0 + p.v0 * g0_origin_isho(p, E)


def _newton(p, seed, max_iter, tol):
    h = 1e-6 * p.hbar * p.omega
    E = complex(seed)
    for it in range(1, max_iter + 1):
        f = complex(pole_function(p, E))
        if abs(f) < tol:
            return E, it - 1, abs(f)
        df = complex(pole_function(p, E + h) - pole_function(p, E - h)) / (2.0 * h)
        if df == 0 or not np.isfinite(df):
            return None
        step = f / df
        # keep away from the Gamma ladder on the negative imaginary axis
        E_new = E - step
        if not np.isfinite(E_new):
            return None
        E = E_new
    f = abs(complex(pole_function(p, E)))
    if f < tol:
        return E, max_iter, f
    return None


def find_delta_pole(p, max_iter=100, tol=1e-12, ladder_start=0.1, ladder_steps=20, width_rel=1e-6):
    """Resonance pole of the delta well on the inverted oscillator.

    Complex Newton iteration on 1 + V0 G0(0, 0; E) from the seed
    -m V0^2/(2 hbar^2) - 0.05 i hbar w.  If that fails, continue in omega from
    ladder_start * omega up to the target, reusing each converged pole as the
    next seed.  When |Im E| < width_rel |E| the width is below what double
    precision resolves (it falls like exp(-const/w)), so the pole is polished
    by Newton in extended precision.
    """
    if p.omega <= 0 or p.v0 <= 0:
        raise ValueError("find_delta_pole requires omega > 0 and v0 > 0")
    seed = p.bound_energy - 0.05j * p.hbar * p.omega
    try:
        res = _newton(p, seed, max_iter, tol)
    except GammaPoleError:
        res = None
    if res is None or res[0].imag >= width_rel * abs(res[0]):
        res = _ladder(p, max_iter, tol, ladder_start, ladder_steps)
    E, iters, resid = res
    E = complex(E)
    log_width = math.log(-2.0 * E.imag) if E.imag < 0 else float("nan")
    if abs(E.imag) < width_rel * abs(E):
        # the width scales like exp(-pi |E| / (hbar w)): size the precision to it
        dps0 = 40 + int(1.2 * math.pi * abs(E.real) / (p.hbar * p.omega * math.log(10.0)))
        E_mp = _polish_mp(p, E, dps=dps0)
        E = complex(E_mp)
        log_width = float(mpmath.log(-2 * E_mp.imag))
    return PoleResult(E, iters, float(resid), p.hbar, log_width)


def _polish_mp(p, E0, dps=40, max_dps=4000):
    """Newton in mpmath, raising precision until Im E is resolved."""
    while dps <= max_dps:
        with mpmath.workdps(dps):
            w = mpmath.mpf(p.omega)
            hb = mpmath.mpf(p.hbar)
            pref = mpmath.expjpi(mpmath.mpf(-0.25)) * mpmath.sqrt(p.m * w / (mpmath.pi * hb)) / (2j * hb * w)
            quarter, half = mpmath.mpf(1) / 4, mpmath.mpf(1) / 2
            f = lambda E: 1 + p.v0 * pref * mpmath.beta(E / (2j * hb * w) + quarter, half)
            E = mpmath.mpc(E0)
            for _ in range(60):
                step = f(E) / mpmath.diff(f, E)
                E -= step
                if abs(step) < mpmath.mpf(10) ** (-dps + 10) * abs(E):
                    break
            if E.imag < 0 and -E.imag > mpmath.mpf(10) ** (-dps + 20) * abs(E):
                return E
        dps *= 2
    raise PoleSearchError("resonance width not resolved at the maximum working precision")


def _ladder(p, max_iter, tol, start, steps):
    omegas = p.omega * np.geomspace(start, 1.0, steps)
    q = PhysicalParams(p.m, p.hbar, omegas[0], p.v0)
    seed = q.bound_energy - 0.05j * p.hbar * q.omega
    total = 0
    res = None
    for w in omegas:
        q = PhysicalParams(p.m, p.hbar, float(w), p.v0)
        res = _newton(q, seed, max_iter, tol)
        if res is None:
            raise PoleSearchError(f"Newton failed during omega continuation at omega={w:.4g}")
        seed = res[0]
        total += res[1]
    return res[0], total, res[2]


def gamma_pole_ladder(p, count):
    """E_k = -i hbar w (k + 1/2) for k = 0, 2, 4, ... (first ``count`` entries)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    k = 2 * np.arange(count)
    return -1j * p.hbar * p.omega * (k + 0.5)


def lifetime_estimate(pole):
    """T = hbar / E_i with E_i = -2 Im E_pole (inf if E_i underflows)."""
    e_i = -2.0 * pole.E_pole.imag
    if e_i > 0:
        return pole.hbar / e_i
    if np.isfinite(pole.log_width):
        return pole.hbar * math.exp(min(-pole.log_width, 709.0)) if pole.log_width > -709 else math.inf
    raise DegeneratePoleError("pole is not below the real axis; no decay")


def laplace_oracle(p, x, E, etas=None, cfg=QuadratureConfig(abs_tol=1e-13, rel_tol=1e-12)):
    """(i hbar)^-1 int_0^inf dt exp(i E t/hbar - eta t) K_inv(x, t | 0, 0), extrapolated to eta -> 0.

    Independent check of the Green-function formulas.  The kernel's
    exp(-w t/2) decay is folded into the exponent so nothing overflows at
    late times.  For x = 0 the substitution t = s^2 removes the t^(-1/2)
    endpoint singularity; for x != 0 the early-time chirp exp(i x^2/2t) is
    mapped by u = 1/t onto an oscillatory tail.  The default ladder is
    eta = 0.2 w / 2^j, j = 0..5.
    """
    if etas is None:
        etas = p.omega * 0.2 / 2.0 ** np.arange(6)
    x = float(x)
    c = EXP_MINUS_IPI4 * math.sqrt(p.m * p.omega / (math.pi * p.hbar))
    t0 = 1.0 / p.omega

    def h(tt, eta):
        wt = p.omega * tt
        em = -np.expm1(-2.0 * wt)
        coth = (2.0 - em) / em
        kern = c / np.sqrt(em) * np.exp(0.5j * p.m * p.omega / p.hbar * x * x * coth)
        return np.exp((1j * E / p.hbar - eta - 0.5 * p.omega) * tt) * kern

    vals = []
    for eta in etas:
        if x == 0.0:
            def f(s, eta=eta):
                out = np.zeros_like(s, dtype=complex)
                pos = s > 0
                out[pos] = 2.0 * s[pos] * h(s[pos] ** 2, eta)
                return out
            est, _, _ = adaptive_gk(f, 0.0, math.inf, cfg)
        else:
            late, _, _ = adaptive_gk(lambda t, eta=eta: h(t, eta), t0, math.inf, cfg)
            kx = 0.5 * p.m * x * x / p.hbar
            early, _ = integrate_line(lambda u, eta=eta: h(1.0 / u, eta) / (u * u), 1.0 / t0, math.inf,
                                      cfg, oscillatory_tail=True, eta0=0.05 * kx * kx,
                                      center=1.0 / t0)
            est = late + early
        vals.append(complex(est) / (1j * p.hbar))
    table = list(vals)
    s = list(etas)
    for k in range(1, len(table)):
        for i in range(len(table) - k):
            table[i] = (s[i + k] * table[i] - s[i] * table[i + 1]) / (s[i + k] - s[i])
    return table[0]


def contour_scan(p, re_range=(-1.5, 0.5), im_range=(-1.5, 0.0), n=400, refine=6, zoom=8):
    """Locate the zero of 1 + V0 G0(0,0;E) by dense |f| scanning plus zoomed rescans.

    Returns up to five local minima of the coarse scan as (E, |f(E)|) pairs,
    sorted by |f|, each refined by repeated zooming.  The scan never
    differentiates f, so it is independent of the Newton pole finder.
    """
    re = np.linspace(*re_range, n)
    im = np.linspace(*im_range, n)
    E = re[None, :] + 1j * im[:, None]
    ladder = -1j * p.hbar * p.omega * (2 * np.arange(50) + 0.5)
    with np.errstate(all="ignore"):
        mask = np.min(np.abs(E.ravel()[:, None] - ladder[None, :]), axis=1).reshape(E.shape) < 1e-9
        Es = np.where(mask, E + 1e-7, E)
        F = np.abs(pole_function(p, Es.ravel())).reshape(E.shape)
    F = np.where(np.isfinite(F), F, np.inf)
    inner = F[1:-1, 1:-1]
    is_min = np.ones_like(inner, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= inner <= F[1 + di:n - 1 + di, 1 + dj:n - 1 + dj]
    ii, jj = np.nonzero(is_min)
    order = np.argsort(inner[ii, jj], kind="stable")
    minima = [(inner[ii[k], jj[k]], E[ii[k] + 1, jj[k] + 1]) for k in order]
    dre = re[1] - re[0]
    dim = im[1] - im[0]
    out = []
    for _, e0 in minima[:5]:
        center, hr, hi = e0, dre, dim
        for _ in range(refine):
            rr = center.real + np.linspace(-hr, hr, 41)
            ii = center.imag + np.linspace(-hi, hi, 41)
            EE = rr[None, :] + 1j * ii[:, None]
            FF = np.abs(pole_function(p, EE.ravel())).reshape(EE.shape)
            k = np.unravel_index(np.argmin(FF), FF.shape)
            center = EE[k]
            hr /= zoom / 2.0
            hi /= zoom / 2.0
        out.append((center, float(np.abs(pole_function(p, center)))))
    out.sort(key=lambda t: t[1])
    return out
