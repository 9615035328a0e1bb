"""Command-line front end: spectra, scattering tables, extension sweeps and
the verification suite.

    singular-sae spectrum --model coulomb --extension -I --count 3
    singular-sae scatter  --model coulomb --extension sx --kmin 0.1 --kmax 5 --ksteps 25
    singular-sae sweep    --model oscinv --a 0.75 --theta-plus-range 0:6.28 \
                          --theta-minus-range 0:6.28 --steps 9 --count 4
    singular-sae verify   --checks all --seed 7

Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 solver error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import coulomb as _coulomb
from . import generic as _generic
from . import oscillator as _oscillator
from . import serialize, verify
from .errors import ConfigError, SingularSAEError
from .u2ext import ExtensionSpec, decompose, matrix_from_json, named_extension

_TWO_PI = 2.0 * math.pi


def _add_model_args(p: argparse.ArgumentParser):
    p.add_argument("--model", required=True,
                   help="coulomb | oscinv | custom:<json-file>")
    p.add_argument("--e2", type=float, default=1.0, help="Coulomb coupling")
    p.add_argument("--omega", type=float, default=1.0, help="oscillator frequency")
    p.add_argument("--g", type=float, default=None, help="inverse-square coupling")
    p.add_argument("--a", type=float, default=None,
                   help="oscillator exponent parameter in (1/2, 1), alternative to --g")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--atomic-units", action="store_true",
                   help="use hbar = m = e^2 = omega = 1 (the default)")


def _add_extension_args(p: argparse.ArgumentParser):
    p.add_argument("--extension", default=None,
                   help="named extension: I, -I, sx, diag:a,b")
    p.add_argument("--theta", default=None,
                   help="angle quadruple theta_plus,theta_minus,mu,nu")
    p.add_argument("--matrix", default=None,
                   help="raw unitary, 8 reals re,im,re,im,... row-major")
    p.add_argument("--L0", type=float, default=1.0, help="length unit of the condition")


def _add_output_args(p: argparse.ArgumentParser):
    p.add_argument("--output", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _build_model(args):
    name = args.model
    if name == "coulomb":
        return _coulomb.CoulombModel(e2=args.e2, hbar=args.hbar, m=args.m)
    if name == "oscinv":
        if args.a is not None and args.g is not None:
            raise ConfigError("give either --a or --g, not both")
        if args.a is not None:
            return _oscillator.OscillatorModel.from_a(
                args.a, omega=args.omega, hbar=args.hbar, m=args.m)
        g = args.g if args.g is not None else 0.15625
        return _oscillator.OscillatorModel(omega=args.omega, g=g,
                                           hbar=args.hbar, m=args.m)
    if name.startswith("custom:"):
        return _generic.load_custom_potential(name[len("custom:"):])
    raise ConfigError(f"unknown model {name!r}")


def _build_extension(args) -> ExtensionSpec:
    forms = [f for f in (args.extension, args.theta, args.matrix) if f is not None]
    if len(forms) != 1:
        raise ConfigError(
            "give exactly one of --extension / --theta / --matrix")
    if args.L0 <= 0.0:
        raise ConfigError("--L0 must be positive")
    if args.extension is not None:
        try:
            return named_extension(args.extension, args.L0)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if args.theta is not None:
        parts = args.theta.split(",")
        if len(parts) != 4:
            raise ConfigError("--theta needs four comma-separated angles")
        tp, tm, mu, nu = (float(v) for v in parts)
        tp, tm, nu = tp % _TWO_PI, tm % _TWO_PI, nu % _TWO_PI
        try:
            return ExtensionSpec(tp, tm, mu, nu, args.L0)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    vals = [float(v) for v in args.matrix.split(",")]
    if len(vals) != 8:
        raise ConfigError("--matrix needs 8 reals (re,im pairs, row-major)")
    u = matrix_from_json([[vals[2 * i], vals[2 * i + 1]] for i in range(4)])
    try:
        return decompose(u, args.L0)
    except SingularSAEError as exc:
        raise ConfigError(str(exc)) from exc


def _model_echo(model) -> dict:
    return model.to_json()


def cmd_spectrum(args) -> int:
    model = _build_model(args)
    spec = _build_extension(args)
    if args.count < 1:
        raise ConfigError("--count must be >= 1")
    window = None
    if args.window:
        lo, hi = (float(v) for v in args.window.split(","))
        window = (lo, hi)
    if isinstance(model, _coulomb.CoulombModel):
        ref = args.ref_energy if args.ref_energy is not None \
            else -2.0 * model.energy_scale
        res = _coulomb.bound_spectrum(model, spec, ref, args.count, window)
    elif isinstance(model, _oscillator.OscillatorModel):
        res = _oscillator.bound_spectrum(model, spec, args.count)
    else:
        pot = model
        ref = args.ref_energy
        if ref is None:
            ref = pot.default_ref_energy
        if window is None:
            window = pot.default_window
        if window is None:
            raise ConfigError("custom models need --window lo,hi")
        modes = _generic.ReferenceModes.build(pot, E_ref=ref)
        res = _generic.spectrum(pot, spec, modes, args.count, window)
    config = {"command": "spectrum", "model": res.model,
              "extension": res.extension, "count": args.count}
    if args.format == "csv":
        text = serialize.render_csv(serialize.SPECTRUM_HEADER,
                                    serialize.spectrum_rows(res))
    else:
        text = serialize.render_json("spectrum", config,
                                     serialize.spectrum_json_rows(res))
    serialize.write_output(text, args.output)
    return 0


def cmd_scatter(args) -> int:
    model = _build_model(args)
    if not isinstance(model, _coulomb.CoulombModel):
        raise ConfigError("scattering is implemented for --model coulomb")
    spec = _build_extension(args)
    if args.ksteps < 1 or args.kmin <= 0.0 or args.kmax < args.kmin:
        raise ConfigError("need 0 < kmin <= kmax and ksteps >= 1")
    ks = np.linspace(args.kmin, args.kmax, args.ksteps)
    results = []
    for k in ks:
        e_k = (model.hbar * float(k)) ** 2 / (2.0 * model.m)
        results.append(_coulomb.scattering(model, spec, e_k, args.ref_energy))
    config = {"command": "scatter", "model": _model_echo(model),
              "extension": spec.to_json(),
              "kmin": args.kmin, "kmax": args.kmax, "ksteps": args.ksteps,
              "ref_energy": args.ref_energy}
    if args.format == "csv":
        text = serialize.render_csv(serialize.SCATTER_HEADER,
                                    serialize.scatter_rows(results))
    else:
        text = serialize.render_json("scatter", config,
                                     serialize.scatter_json_rows(results))
    serialize.write_output(text, args.output)
    return 0


def _parse_range(text: str) -> tuple[float, float]:
    lo, hi = (float(v) for v in text.split(":"))
    if not (0.0 <= lo <= hi < _TWO_PI + 1e-9):
        raise ConfigError(f"range {text!r} outside [0, 2*pi)")
    return lo, hi


def cmd_sweep(args) -> int:
    model = _build_model(args)
    if args.steps < 2:
        raise ConfigError("--steps must be >= 2")
    lo_p, hi_p = _parse_range(args.theta_plus_range)
    lo_m, hi_m = _parse_range(args.theta_minus_range)
    tps = np.linspace(lo_p, hi_p, args.steps)
    tms = np.linspace(lo_m, hi_m, args.steps)
    nodes = [(float(tp), float(tm)) for tp in tps for tm in tms]

    if not isinstance(model, (_coulomb.CoulombModel, _oscillator.OscillatorModel)):
        raise ConfigError("sweep supports the closed-form models only")

    def solve(node):
        tp, tm = node
        spec = ExtensionSpec(tp, tm, args.mu, args.nu, args.L0)
        if isinstance(model, _coulomb.CoulombModel):
            ref = args.ref_energy if args.ref_energy is not None \
                else -2.0 * model.energy_scale
            res = _coulomb.bound_spectrum(model, spec, ref, args.count)
        else:
            res = _oscillator.bound_spectrum(model, spec, args.count)
        return [(tp, tm, n, lv.E) for n, lv in enumerate(res.levels)]

    workers = int(os.environ.get("SINGULAR_SAE_THREADS", "0")) or None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        per_node = list(pool.map(solve, nodes))
    rows = [row for chunk in per_node for row in chunk]

    config = {"command": "sweep", "model": _model_echo(model),
              "theta_plus_range": [lo_p, hi_p], "theta_minus_range": [lo_m, hi_m],
              "steps": args.steps, "mu": args.mu, "nu": args.nu, "L0": args.L0,
              "count": args.count,
              "note": "spectra are invariant under swapping (theta_plus, theta_minus); "
                      "the grid double-covers that Mobius identification"}
    if args.format == "csv":
        text = serialize.render_csv(serialize.SWEEP_HEADER,
                                    [list(r) for r in rows])
    else:
        json_rows = [{"theta_plus": r[0], "theta_minus": r[1], "n": r[2],
                      "E": r[3]} for r in rows]
        text = serialize.render_json("sweep", config, json_rows)
    serialize.write_output(text, args.output)
    if args.plot:
        _emit_sweep_plot(rows, args.count, args.plot)
    return 0


def _emit_sweep_plot(rows, count: int, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    nodes = sorted({(r[0], r[1]) for r in rows})
    xs = {node: i for i, node in enumerate(nodes)}
    for n in range(count):
        pts = [(xs[(r[0], r[1])], r[3]) for r in rows if r[2] == n]
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], ".-", ms=3,
                label=f"n={n}")
    ax.set_xlabel("grid node index (theta_plus major)")
    ax.set_ylabel("E")
    ax.set_title("spectral flow over the extension grid")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def cmd_verify(args) -> int:
    names = None
    if args.checks and args.checks != "all":
        names = [c.strip() for c in args.checks.split(",") if c.strip()]
    custom_pot = None
    if args.model and args.model.startswith("custom:"):
        custom_pot = _generic.load_custom_potential(args.model[len("custom:"):])
    results = verify.run_checks(names, seed=args.seed, trials=args.trials,
                                custom_pot=custom_pot)
    config = {"command": "verify", "seed": args.seed, "trials": args.trials,
              "checks": names or sorted(verify.ALL_CHECKS)}
    rows = [r.row() for r in results]
    text = serialize.render_json("verify", config, rows)
    serialize.write_output(text, args.output)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: max deviation {r.max_deviation:.3e} "
              f"(tol {r.tolerance:.1e}, {r.runtime_s:.1f}s)", file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="singular-sae",
        description="Spectra and scattering for 1D Schrodinger operators with "
                    "a point singularity, over the U(2) family of connection "
                    "conditions.")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("spectrum", help="bound-state levels")
    _add_model_args(ps)
    _add_extension_args(ps)
    _add_output_args(ps)
    ps.add_argument("--count", type=int, default=5)
    ps.add_argument("--ref-energy", type=float, default=None,
                    help="reference-mode energy (Coulomb / custom models)")
    ps.add_argument("--window", default=None, help="energy window lo,hi")
    ps.set_defaults(fn=cmd_spectrum)

    pc = sub.add_parser("scatter", help="transmission/reflection table")
    _add_model_args(pc)
    _add_extension_args(pc)
    _add_output_args(pc)
    pc.add_argument("--kmin", type=float, default=0.1)
    pc.add_argument("--kmax", type=float, default=5.0)
    pc.add_argument("--ksteps", type=int, default=25)
    pc.add_argument("--ref-energy", type=float, default=None)
    pc.set_defaults(fn=cmd_scatter)

    pw = sub.add_parser("sweep", help="level grid over eigenphase pairs")
    _add_model_args(pw)
    _add_output_args(pw)
    pw.add_argument("--theta-plus-range", required=True, help="lo:hi")
    pw.add_argument("--theta-minus-range", required=True, help="lo:hi")
    pw.add_argument("--steps", type=int, default=9, help="steps per axis")
    pw.add_argument("--mu", type=float, default=0.0)
    pw.add_argument("--nu", type=float, default=0.0)
    pw.add_argument("--L0", type=float, default=1.0)
    pw.add_argument("--count", type=int, default=4)
    pw.add_argument("--ref-energy", type=float, default=None)
    pw.add_argument("--plot", default=None, help="write a spectral-flow image")
    pw.set_defaults(fn=cmd_sweep)

    pv = sub.add_parser("verify", help="run the numerical verification suite")
    pv.add_argument("--checks", default="all",
                    help="comma list: " + ",".join(sorted(verify.ALL_CHECKS)))
    pv.add_argument("--seed", type=int, default=20260811)
    pv.add_argument("--trials", type=int, default=None)
    pv.add_argument("--model", default=None,
                    help="custom:<file> model for the theorem check")
    pv.add_argument("--output", default=None)
    pv.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SingularSAEError as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
