"""Adaptive Gauss-Kronrod quadrature, sampled wavefunctions and overlaps."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class QuadratureError(ArithmeticError):
    """Tolerance not met; carries the best estimate and its error bound."""

    def __init__(self, msg, estimate=None, err_est=None):
        super().__init__(msg)
        self.estimate = estimate
        self.err_est = err_est


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_depth: int = 50
    envelope_cutoff: float = 1e-14
    max_panels: int = 200_000

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")


# 15-point Kronrod extension of 7-point Gauss
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
# Gauss nodes are xgk[1], xgk[3], xgk[5], xgk[7] and their mirrors
for _i, _w in zip((1, 3, 5), _WG[:3]):
    _WG15[_i] = _w
    _WG15[14 - _i] = _w
_WG15[7] = _WG[3]


def _make_map(a, b):
    """Return (s_lo, s_hi, phi, jac) mapping a finite s-interval onto (a, b)."""
    if math.isinf(a) and math.isinf(b):
        return -1.0, 1.0, (lambda s: s / (1.0 - s * s)), (lambda s: (1.0 + s * s) / (1.0 - s * s) ** 2)
    if math.isinf(b):
        return 0.0, 1.0, (lambda s: a + s / (1.0 - s)), (lambda s: 1.0 / (1.0 - s) ** 2)
    if math.isinf(a):
        return -1.0, 0.0, (lambda s: b + s / (1.0 + s)), (lambda s: 1.0 / (1.0 + s) ** 2)
    return a, b, (lambda s: s), (lambda s: np.ones_like(s))


def _inverse_map(a, b, x):
    if math.isinf(a) and math.isinf(b):
        return 0.0 if x == 0 else (-1.0 + math.sqrt(1.0 + 4.0 * x * x)) / (2.0 * x)
    if math.isinf(b):
        return (x - a) / (1.0 + x - a)
    if math.isinf(a):
        return (x - b) / (1.0 + b - x)
    return x


def adaptive_gk(f, a, b, cfg=QuadratureConfig(), breakpoints=(), min_panels=4, tol_scale=None):
    """Core adaptive GK15 driver for scalar- or vector-valued integrands.

    ``f`` takes a 1-D array of abscissae and returns an array whose last axis
    runs over them (leading axes are integrand components).  Panels are
    bisected while their Kronrod-Gauss difference exceeds their share of the
    tolerance.  Panels on which the integrand (and both neighbours) stays
    below ``envelope_cutoff`` times the running peak are frozen; their
    width times peak value is added to the error bound.

    ``tol_scale`` optionally divides the per-component tolerance (weights for
    components whose accuracy matters less).

    Returns (estimate, err_est, ok) with ``ok`` a per-component boolean array.
    """
    s_lo, s_hi, phi, jac = _make_map(a, b)
    cuts = sorted({_inverse_map(a, b, float(c)) for c in breakpoints if a < c < b})
    edges = [s_lo] + [c for c in cuts if s_lo < c < s_hi] + [s_hi]
    lefts, rights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        e = np.linspace(lo, hi, min_panels + 1)
        lefts.extend(e[:-1])
        rights.extend(e[1:])
    lefts = np.array(lefts)
    rights = np.array(rights)
    depth = np.zeros(lefts.size, dtype=int)

    def evaluate(lo, hi):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        s = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
        vals = np.asarray(f(phi(s)), dtype=complex) * jac(s)
        vals = vals.reshape(vals.shape[:-1] + (lo.size, 15))
        ik = (vals @ _WK) * half
        ig = (vals @ _WG15) * half
        # QUADPACK error scaling
        resasc = np.abs(vals - (ik / (2.0 * half))[..., None]) @ _WK * half
        raw = np.abs(ik - ig)
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = resasc * np.minimum(1.0, (200.0 * raw / resasc) ** 1.5)
        err = np.where(resasc > 0, scaled, raw)
        err = np.maximum(err, 50.0 * np.finfo(float).eps * np.abs(ik))
        fmax = np.max(np.abs(vals), axis=-1)
        return ik, err, fmax

    est, err, fmax = evaluate(lefts, rights)
    width_total = s_hi - s_lo
    frozen = np.zeros(lefts.size, dtype=bool)
    while True:
        peak = np.max(fmax, axis=-1, keepdims=True)
        quiet = np.all(fmax < cfg.envelope_cutoff * peak, axis=tuple(range(fmax.ndim - 1)))
        qn = quiet.copy()
        qn[1:] &= quiet[:-1]
        qn[:-1] &= quiet[1:]
        frozen = frozen | qn
        width = rights - lefts
        total = est.sum(axis=-1)
        tol = np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(total))
        if tol_scale is not None:
            tol = tol * tol_scale
        live_err = np.where(frozen, 0.0, err)
        tail = np.where(frozen, width * fmax, 0.0)
        err_total = live_err.sum(axis=-1) + tail.sum(axis=-1)
        ok = err_total <= tol
        if np.all(ok):
            break
        share = tol[..., None] * (width / width_total)
        need = np.any((live_err > share) & ~ok[..., None], axis=tuple(range(err.ndim - 1)))
        need &= depth < cfg.max_depth
        if not np.any(need) or lefts.size + need.sum() > cfg.max_panels:
            break
        keep = ~need
        mids = 0.5 * (lefts[need] + rights[need])
        new_l = np.concatenate([lefts[need], mids])
        new_r = np.concatenate([mids, rights[need]])
        new_d = np.concatenate([depth[need], depth[need]]) + 1
        e2, r2, m2 = evaluate(new_l, new_r)
        lefts = np.concatenate([lefts[keep], new_l])
        rights = np.concatenate([rights[keep], new_r])
        depth = np.concatenate([depth[keep], new_d])
        frozen = np.concatenate([frozen[keep], np.zeros(new_l.size, dtype=bool)])
        est = np.concatenate([est[..., keep], e2], axis=-1)
        err = np.concatenate([err[..., keep], r2], axis=-1)
        fmax = np.concatenate([fmax[..., keep], m2], axis=-1)
        order = np.argsort(lefts, kind="stable")
        lefts, rights, depth, frozen = lefts[order], rights[order], depth[order], frozen[order]
        est, err, fmax = est[..., order], err[..., order], fmax[..., order]
    return total, err_total, ok


def _damped(f, a, b, cfg, breakpoints, eta0, center, levels=10):
    """Abel-type limit: integrate f exp(-eta (x-c)^2) for eta = eta0 / 2^j, extrapolate to eta = 0."""
    etas, vals, errs = [], [], []
    best = None
    for j in range(levels):
        eta = eta0 / 2.0**j
        def g(x, eta=eta):
            damp = np.exp(-eta * (x - center) ** 2)
            with np.errstate(over="ignore", invalid="ignore"):
                v = f(x) * damp
            return np.where(damp == 0.0, 0.0, v)

        est, err, ok = adaptive_gk(g, a, b, cfg, breakpoints)
        if not np.all(ok):
            raise QuadratureError(f"damped integral failed at eta={eta:.3g}", est, err)
        etas.append(eta)
        vals.append(est)
        errs.append(err)
        # Neville's scheme evaluated at eta = 0
        table = list(vals)
        for k in range(1, len(table)):
            for i in range(len(table) - k):
                table[i] = (etas[i + k] * table[i] - etas[i] * table[i + 1]) / (etas[i + k] - etas[i])
        extrap = table[0]
        if best is not None:
            change = np.abs(extrap - best)
            tol = np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(extrap))
            if np.all(change <= tol):
                return extrap, change + err
        best = extrap
    raise QuadratureError("damping extrapolation did not settle", best, None)


def integrate_line(f, a, b, cfg=QuadratureConfig(), breakpoints=(), oscillatory_tail=False,
                   eta0=0.25, center=0.0):
    """Integrate ``f`` over (a, b); infinite endpoints allowed.

    Decaying tails are handled by the rational map plus envelope truncation.
    Tails that only oscillate (Fresnel-type chirps, plane waves) need
    ``oscillatory_tail=True``: the integral is then taken as the limit of
    Gaussian-damped integrals, extrapolated in the damping strength.

    Raises QuadratureError (with the best estimate attached) if the
    tolerance is not met.
    """
    a, b = float(a), float(b)
    if oscillatory_tail and (math.isinf(a) or math.isinf(b)):
        est, err = _damped(f, a, b, cfg, breakpoints, eta0, center)
        ok = True
    else:
        est, err, ok = adaptive_gk(f, a, b, cfg, breakpoints)
    if not np.all(ok):
        raise QuadratureError(f"tolerance not met on ({a}, {b}): err={np.max(err):.3g}", est, err)
    if np.ndim(est) == 0:
        return complex(est), float(err)
    return est, err


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid x_i = x_min + i dx, i < n, with n dx = x_max - x_min."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")
        if self.n < 16:
            raise ValueError("grid needs at least 16 points")

    @classmethod
    def symmetric(cls, half_width, n):
        return cls(-half_width, half_width, n)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self):
        return self.x_min + self.dx * np.arange(self.n)


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitudes sampled on a Grid1D at time t.

    ``func`` optionally keeps the analytic form so that quadrature-based
    evolution can sample between grid points.
    """

    grid: Grid1D
    amps: np.ndarray
    t: float = 0.0
    func: Optional[Callable] = field(default=None, compare=False, repr=False)
    failed_points: int = 0

    def __post_init__(self):
        if len(self.amps) != self.grid.n:
            raise ValueError("amplitude count does not match grid")
        if not np.all(np.isfinite(self.amps)):
            raise ValueError("non-finite amplitudes")

    @classmethod
    def from_function(cls, grid, f, t=0.0):
        return cls(grid, np.asarray(f(grid.x), dtype=complex), t, func=f)

    def norm(self):
        return float(np.sum(np.abs(self.amps) ** 2) * self.grid.dx)

    def __call__(self, x):
        if self.func is not None:
            return self.func(x)
        xs = self.grid.x
        return np.interp(x, xs, self.amps.real, 0.0, 0.0) + 1j * np.interp(x, xs, self.amps.imag, 0.0, 0.0)


def support_interval(psi, cutoff):
    """Smallest [lo, hi] outside which |psi| stays below cutoff * peak on its grid."""
    mag = np.abs(psi.amps)
    idx = np.nonzero(mag >= cutoff * mag.max())[0]
    xs = psi.grid.x
    dx = psi.grid.dx
    return xs[idx[0]] - dx, xs[idx[-1]] + dx


def evolve_state(kernel, psi0, t, out_grid, cfg=QuadratureConfig(), breakpoints=(0.0,), chunk=64,
                 support=None, even=False, weight=None, weight_floor=1e-6):
    """psi(x, t) = integral dx' K(x, t | x', 0) psi0(x') on every out_grid point.

    Output points are processed in chunks sharing one adaptive panel set.
    Points whose tolerance is not met are counted; more than 1% of them is an
    error.

    even: the result is known to be even in x; only |x| values are computed.
    weight: per-point importance in [0, 1]; the tolerance at a point is
        relaxed by 1/max(weight, weight_floor).  Used when the state only
        enters through an overlap with a localized partner.
    """
    if t <= 0:
        raise ValueError("evolve_state requires t > 0")
    if support is None:
        support = support_interval(psi0, cfg.envelope_cutoff)
    lo, hi = support
    xs = out_grid.x
    if even:
        targets, back = np.unique(np.abs(xs), return_inverse=True)
    else:
        targets, back = xs, np.arange(xs.size)
    scale = None
    if weight is not None:
        w = np.asarray(weight, float)
        if even:
            w_t = np.zeros(targets.size)
            np.maximum.at(w_t, back, w)
        else:
            w_t = w
        scale = 1.0 / np.maximum(w_t, weight_floor)
    vals = np.empty(targets.size, dtype=complex)
    failed = 0
    for start in range(0, targets.size, chunk):
        xo = targets[start:start + chunk]

        def integrand(xp, xo=xo):
            return kernel(xo[:, None], t, xp[None, :]) * psi0(xp)[None, :]

        ts = None if scale is None else scale[start:start + chunk]
        est, err, ok = adaptive_gk(integrand, lo, hi, cfg, breakpoints, tol_scale=ts)
        vals[start:start + chunk] = est
        failed += int(np.count_nonzero(~ok))
    if failed > 0.01 * targets.size:
        raise QuadratureError(f"{failed} of {targets.size} output points missed tolerance")
    return WaveFunction(out_grid, vals[back], t, failed_points=failed)


def overlap(psi0, psit):
    """<psi0|psit> by grid sums with one Richardson step (spacings h and 2h)."""
    if psi0.grid != psit.grid:
        raise GridMismatchError("overlap needs both states on the same grid")
    prod = np.conj(psi0.amps) * psit.amps
    dx = psi0.grid.dx
    ih = prod.sum() * dx
    i2h = prod[::2].sum() * 2.0 * dx
    return (4.0 * ih - i2h) / 3.0


def survival(psi0, psit):
    """|<psi0|psit>|^2."""
    return float(abs(overlap(psi0, psit)) ** 2)


def l2_distance(a, b):
    if a.grid != b.grid:
        raise GridMismatchError("l2_distance needs matching grids")
    return float(math.sqrt(np.sum(np.abs(a.amps - b.amps) ** 2) * a.grid.dx))
