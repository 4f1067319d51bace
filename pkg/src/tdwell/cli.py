"""Command-line front end: tdwell {fig1, fig2, fig3, poles, moshinsky-table, selftest}.

Parameters come from defaults, then an optional key=value config file, then
command-line flags.  Exit status: 0 success, 1 usage, 2 numerical failure,
3 I/O failure.
"""

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


# name -> (type, default, must_be_positive)
_COMMON = {
    "abs_tol": (float, 1e-10, True),
    "rel_tol": (float, 1e-8, True),
}

SCHEMAS = {
    "fig1": {
        "v0_lower": (float, 2400.0, True),
        "v0_upper": (float, 2286.0, True),
        "w0": (float, 27.0, True),
        "F": (float, 103.0, True),
        "x_min": (float, -60.0, False),
        "x_max": (float, 120.0, False),
        "n": (int, 721, True),
    },
    "fig2": {
        "omega": (float, 1.0, True),
        "v0": (float, 1.0, True),
        "t_max": (float, 8.0, True),
        "n_samples": (int, 200, True),
        "half_width": (float, 20.0, True),
        "n_grid": (int, 2048, True),
        "oracle_n": (int, 8192, True),
        "oracle_dt": (float, 1e-3, True),
        "cap_strength": (float, 200.0, True),
        **_COMMON,
    },
    "fig3": {
        "alpha": (float, 1.0 / 450.0, True),
        "mu": (float, 2e6, True),
        "omega": (float, 2 * math.pi * 50.0, True),
        "mass_amu": (float, 87.0, True),
        "omega_times": (str, "0,0.5,1,1.5", False),
        "x_min_um": (float, -20.0, False),
        "x_max_um": (float, 40.0, False),
        "n_out": (int, 1200, True),
        "abs_tol": (float, 1e-9, True),
        "rel_tol": (float, 1e-8, True),
    },
    "poles": {
        "v0": (float, 1.0, True),
        "omegas": (str, "0.1,0.2,0.5,1,2", False),
        "m": (float, 1.0, True),
        "hbar": (float, 1.0, True),
    },
    "moshinsky-table": {
        "x_min": (float, -5.0, False),
        "x_max": (float, 5.0, False),
        "n": (int, 101, True),
        "k_re": (float, 0.0, False),
        "k_im": (float, -1.0, False),
        "t": (float, 1.0, True),
    },
    "selftest": {},
}

DEFAULT_OUTPUT = {
    "fig1": "fig1.csv",
    "fig2": "fig2.csv",
    "fig3": "fig3",
    "poles": "poles.csv",
    "moshinsky-table": "moshinsky.csv",
}


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    output_path: str = ""


def _convert(name, typ, raw):
    try:
        return typ(raw)
    except ValueError:
        raise UsageError(f"{name}: cannot parse {raw!r} as {typ.__name__}") from None


def read_config_file(path):
    """key=value lines; '#' starts a comment."""
    pairs = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        k, v = line.split("=", 1)
        pairs[k.strip().replace("-", "_")] = v.strip()
    return pairs


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="tdwell", description="Tunneling out of a time-dependent well: kernels, poles, figures.")
    parser.add_argument("--version", action="version", version=f"tdwell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for cmd, schema in SCHEMAS.items():
        sp = sub.add_parser(cmd)
        if cmd != "selftest":
            sp.add_argument("--config", help="key=value parameter file")
            sp.add_argument("--output", "-o", help="output path (a directory for fig3)")
        for name, (typ, default, _) in schema.items():
            sp.add_argument("--" + name.replace("_", "-"), dest=name, type=str, default=None,
                            help=f"default {default}")
    return parser


def parse_config(argv):
    """Defaults, overridden by the config file, overridden by flags."""
    ns = build_parser().parse_args(argv)
    schema = SCHEMAS[ns.command]
    values = {k: v[1] for k, v in schema.items()}
    if getattr(ns, "config", None):
        for k, raw in read_config_file(ns.config).items():
            if k not in schema:
                raise UsageError(f"unknown key {k!r} for {ns.command}")
            values[k] = _convert(k, schema[k][0], raw)
    for k, (typ, _, _) in schema.items():
        raw = getattr(ns, k)
        if raw is not None:
            values[k] = _convert(k, typ, raw)
    for k, (typ, _, positive) in schema.items():
        if positive and not values[k] > 0:
            raise UsageError(f"{k} must be positive (got {values[k]})")
    if ns.command == "fig2" and values["n_grid"] < 16:
        raise UsageError("n_grid must be at least 16")
    out = getattr(ns, "output", None) or DEFAULT_OUTPUT.get(ns.command, "")
    return RunConfig(ns.command, values, out)


# ---------------------------------------------------------------------------
# output


def _fmt(v):
    return f"{v:.14e}"


def _header(cfg, extra=()):
    items = [f"tdwell {__version__}", f"command={cfg.command}"]
    items += [f"{k}={cfg.params[k]!r}" if isinstance(cfg.params[k], str) else f"{k}={cfg.params[k]:.17g}"
              for k in sorted(cfg.params)]
    items += list(extra)
    return "# " + " ".join(items) + "\n"


def write_atomic(path, text):
    """Write through a temp file in the target directory, then rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_csv(path, header, columns, rows):
    lines = [header, ",".join(columns) + "\n"]
    for row in rows:
        lines.append(",".join(_fmt(float(v)) for v in row) + "\n")
    write_atomic(path, "".join(lines))


# ---------------------------------------------------------------------------
# commands


def _floats(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"cannot parse list {text!r}") from None


def cmd_fig1(cfg):
    from .scenarios import OpticalTrapParams, has_metastable_well, optical_potential_cut

    p = cfg.params
    x = np.linspace(p["x_min"], p["x_max"], p["n"])
    lo = OpticalTrapParams(V0=p["v0_lower"], w0=p["w0"], F=p["F"])
    up = OpticalTrapParams(V0=p["v0_upper"], w0=p["w0"], F=p["F"])
    extra = (f"well_lower={has_metastable_well(lo)}", f"well_upper={has_metastable_well(up)}",
             "units=nK,um")
    rows = zip(x, optical_potential_cut(lo, x), optical_potential_cut(up, x))
    emit_csv(cfg.output_path, _header(cfg, extra), ["x", "V_lower", "V_upper"], rows)


def cmd_fig2(cfg):
    from .numerics import QuadratureConfig
    from .propagators import PhysicalParams
    from .scenarios import Fig2Config, run_fig2

    p = cfg.params
    phys = PhysicalParams(m=1.0, hbar=1.0, omega=p["omega"], v0=p["v0"])
    f2 = Fig2Config(t_max=p["t_max"], n_samples=p["n_samples"], half_width=p["half_width"], n_grid=p["n_grid"],
                    oracle_n=p["oracle_n"], oracle_dt=p["oracle_dt"], cap_strength=p["cap_strength"],
                    quad=QuadratureConfig(abs_tol=p["abs_tol"], rel_tol=p["rel_tol"]))
    curves = run_fig2(phys, f2)
    rows = zip(curves[0].t, *[c.P for c in curves])
    emit_csv(cfg.output_path, _header(cfg, ("units=atomic",)), ["t", "P_a", "P_b", "P_c", "P_d"], rows)


def cmd_fig3(cfg):
    from .numerics import QuadratureConfig
    from .scenarios import Fig3Config, Fig3LabParams, run_fig3

    p = cfg.params
    lab = Fig3LabParams(alpha=p["alpha"], mu_per_m=p["mu"], omega_hz=p["omega"], mass_amu=p["mass_amu"])
    phys, cp = lab.dimensionless()
    us = lab.units
    to_um = us.si_factor("length") / 1e-6
    wts = tuple(_floats(p["omega_times"]))
    if not wts or any(w < 0 for w in wts):
        raise UsageError("omega_times must be a non-empty list of non-negative numbers")
    f3 = Fig3Config(omega_times=wts, x_min=p["x_min_um"] / to_um, x_max=p["x_max_um"] / to_um, n_out=p["n_out"],
                    quad=QuadratureConfig(abs_tol=p["abs_tol"], rel_tol=p["rel_tol"]))
    snaps = run_fig3(phys, cp, f3)
    out_dir = Path(cfg.output_path)
    e_nk = us.si_factor("energy") / 1.380649e-32
    amp = 1.0 / math.sqrt(to_um)
    for s in snaps:
        x_um = s.psi.grid.x * to_um
        psi = s.psi.amps * amp
        free = s.psi_free.amps * amp
        t_ms = s.t * us.si_factor("time") * 1e3
        extra = (f"omega_t={s.omega_t:.17g}", f"t_ms={t_ms:.17g}", "units=um,nK,um^-1")
        rows = zip(x_um, psi.real, psi.imag, np.abs(psi) ** 2, np.abs(free) ** 2, s.potential * e_nk)
        emit_csv(out_dir / f"fig3_wt{s.omega_t:.3f}.csv", _header(cfg, extra),
                 ["x", "re_psi", "im_psi", "abs2_psi", "abs2_free", "V"], rows)


def cmd_poles(cfg):
    from .propagators import PhysicalParams
    from .spectral import find_delta_pole

    p = cfg.params
    rows = []
    for w in _floats(p["omegas"]):
        if not w > 0:
            raise UsageError("omegas must be positive")
        r = find_delta_pole(PhysicalParams(m=p["m"], hbar=p["hbar"], omega=w, v0=p["v0"]))
        rows.append((w, p["v0"], r.E_pole.real, r.E_pole.imag, r.lifetime, r.residual))
    emit_csv(cfg.output_path, _header(cfg), ["omega", "V0", "re_E", "im_E", "lifetime", "residual"], rows)


def cmd_moshinsky(cfg):
    from .specfun import moshinsky

    p = cfg.params
    x = np.linspace(p["x_min"], p["x_max"], p["n"])
    k = complex(p["k_re"], p["k_im"])
    m = moshinsky(x, k, p["t"])
    rows = zip(x, np.full_like(x, k.real), np.full_like(x, k.imag), np.full_like(x, p["t"]), m.real, m.imag)
    emit_csv(cfg.output_path, _header(cfg), ["x", "k_re", "k_im", "t", "re_M", "im_M"], rows)


def cmd_selftest(cfg):
    from .selftest import run_selftest

    ok = run_selftest(stream=sys.stdout)
    return EXIT_OK if ok else EXIT_NUMERIC


COMMANDS = {
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "poles": cmd_poles,
    "moshinsky-table": cmd_moshinsky,
    "selftest": cmd_selftest,
}


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    try:
        cfg = parse_config(argv)
        status = COMMANDS[cfg.command](cfg)
        return EXIT_OK if status is None else status
    except UsageError as e:
        print(f"tdwell: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"tdwell: I/O error: {e.filename or ''}: {e.strerror or e}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, ValueError) as e:
        print(f"tdwell: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
