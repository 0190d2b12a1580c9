"""Command-line interface: deterministic CSV/JSON emission over every module."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import __version__, classification, codim1, core, dynamics, marotto, resonance, tongue
from .core import ParamPoint, State3
from .errors import EcoMapError
from .fixed_points import fixed_points, get_fixed_point

FLOAT_FMT = "%.17g"


@dataclasses.dataclass
class RunConfig:
    command: str
    params: dict
    out: str
    fmt: str
    seed: int

    def header_lines(self) -> list[str]:
        items = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return [
            f"# ecomap3d {__version__}",
            f"# command: {self.command}",
            f"# config: {items}",
            f"# seed: {self.seed}",
        ]


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (float, np.floating)):
        return FLOAT_FMT % float(v)
    if isinstance(v, complex):
        return f"{FLOAT_FMT % v.real}{'+' if v.imag >= 0 else '-'}{FLOAT_FMT % abs(v.imag)}j"
    return str(v)


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


def emit(columns: list[str], rows: list[tuple], cfg: RunConfig) -> str:
    """Write the rows to cfg.out as CSV or JSON; return the path written."""
    if not rows:
        raise ValueError("no rows to emit")
    if cfg.fmt == "csv":
        lines = cfg.header_lines()
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        with open(cfg.out, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        doc = {
            "version": __version__,
            "command": cfg.command,
            "config": {k: _jsonable(v) for k, v in cfg.params.items()},
            "seed": cfg.seed,
            "columns": columns,
            "rows": [[_jsonable(v) for v in row] for row in rows],
        }
        with open(cfg.out, "w", newline="") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    return cfg.out


# ---------------------------------------------------------------------------
# Argument plumbing.
# ---------------------------------------------------------------------------


def _add_params(sub, state: bool = False):
    sub.add_argument("--lambda", dest="lam", type=float, default=None)
    sub.add_argument("--mu", type=float, default=None)
    sub.add_argument("--beta", type=float, default=None)
    sub.add_argument("--config", type=str, default=None, help="key=value file; flags override")
    sub.add_argument("--out", type=str, default=None, help="output file path")
    sub.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    sub.add_argument("--seed", type=int, default=0)
    if state:
        sub.add_argument("--x0", type=float, default=None)
        sub.add_argument("--y0", type=float, default=None)
        sub.add_argument("--z0", type=float, default=None)


def _load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            k, v = (t.strip() for t in line.split("=", 1))
            out[k] = v
    return out


_CONFIG_KEYS = {
    "lambda": ("lam", float),
    "mu": ("mu", float),
    "beta": ("beta", float),
    "x0": ("x0", float),
    "y0": ("y0", float),
    "z0": ("z0", float),
    "seed": ("seed", int),
    "out": ("out", str),
    "format": ("fmt", str),
    "n": ("n", int),
    "transient": ("transient", int),
}


def _merge_config(args, parser):
    """Apply config-file values for any flag the user did not pass."""
    if getattr(args, "config", None) is None:
        return
    try:
        file_vals = _load_config(args.config)
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
        return
    for key, raw in file_vals.items():
        if key not in _CONFIG_KEYS:
            continue
        dest, conv = _CONFIG_KEYS[key]
        if getattr(args, dest, None) is None:
            try:
                setattr(args, dest, conv(raw))
            except ValueError:
                parser.error(f"bad value for {key} in config file: {raw!r}")


def _param_point(args, parser) -> ParamPoint:
    missing = [n for n, v in (("--lambda", args.lam), ("--mu", args.mu), ("--beta", args.beta)) if v is None]
    if missing:
        parser.error(f"missing required parameters: {', '.join(missing)}")
    return ParamPoint(args.lam, args.mu, args.beta)


def _state(args, defaults=(0.3, 0.3, 0.01)) -> State3:
    return State3(
        args.x0 if args.x0 is not None else defaults[0],
        args.y0 if args.y0 is not None else defaults[1],
        args.z0 if args.z0 is not None else defaults[2],
    )


def _runcfg(args, command: str, default_out: str) -> RunConfig:
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "config", "out") and v is not None and not callable(v)
    }
    out = args.out or default_out
    return RunConfig(command, params, out, args.fmt, args.seed)


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------


def _cmd_fixed_points(args, parser) -> int:
    p = _param_point(args, parser)
    cfg = _runcfg(args, "fixed-points", "fixed_points.csv")
    rows = []
    for rec in fixed_points(p):
        rows.append((rec.id, rec.exists, rec.coords.x, rec.coords.y, rec.coords.z, rec.existence_margin))
        print(f"{rec.id}: exists={rec.exists} at ({rec.coords.x:.12g}, {rec.coords.y:.12g}, {rec.coords.z:.12g})")
    path = emit(["name", "exists", "x", "y", "z", "margin"], rows, cfg)
    print(f"wrote {path}")
    return 0


def _cmd_classify(args, parser) -> int:
    p = _param_point(args, parser)
    cfg = _runcfg(args, "classify", "classify.csv")
    rows = []
    classifiers = {
        "O": classification.classify_O,
        "E1": classification.classify_E1,
        "E2": classification.classify_E2,
    }
    for name, fn in classifiers.items():
        try:
            rep = fn(p)
        except EcoMapError as exc:
            print(f"{name}: {exc}")
            continue
        trip = get_fixed_point(p, name).eigen
        moduli = np.sort(trip.moduli()) if trip is not None else np.full(3, np.nan)
        rows.append((name, rep.kind, rep.table_case, moduli[0], moduli[1], moduli[2]))
        print(f"{name}: {rep.kind} ({rep.table_case}), eigen-moduli "
              f"{moduli[0]:.6f}, {moduli[1]:.6f}, {moduli[2]:.6f}")
    try:
        e3 = classification.classify_E3_sink(p)
        kind = "sink" if e3.sink else "not-sink"
        rows.append(("E3", kind, "Jury", e3.D1, e3.D2, e3.D3))
        print(f"E3: {kind} (D1={e3.D1:.6g}, D2={e3.D2:.6g}, D3={e3.D3:.6g})")
    except EcoMapError as exc:
        print(f"E3: {exc}")
    path = emit(["point", "type", "case", "q1", "q2", "q3"], rows, cfg)
    print(f"wrote {path}")
    return 0


def _cmd_codim1(args, parser) -> int:
    p = _param_point(args, parser)
    cfg = _runcfg(args, "codim1", "codim1.csv")
    rows = []
    if args.kind == "transcritical":
        diag = codim1.transcritical_diagnostic(args.point, p)
        rows.append((args.kind, args.point, diag.coeffs["quadratic"], diag.coeffs["cross"],
                     diag.criticality or "n/a"))
    elif args.kind == "flip":
        diag = codim1.flip_diagnostic(args.point, p)
        rows.append((args.kind, args.point, diag.coeffs["flip_lyapunov"],
                     diag.coeffs["transversality"], diag.criticality))
    else:
        value, crit = codim1.ns_first_lyapunov(p, formula=args.formula)
        rows.append((args.kind, "E2", value, codim1.ns_transversality(p.beta), crit))
    for r in rows:
        print(f"{r[0]} at {r[1]}: coefficient={r[2]:.12g}, transversality={r[3]:.12g}, {r[4]}")
    path = emit(["kind", "point", "coefficient", "transversality", "criticality"], rows, cfg)
    print(f"wrote {path}")
    return 0


def _cmd_resonance(args, parser) -> int:
    p = _param_point(args, parser)
    cfg = _runcfg(args, "resonance", "resonance.csv")
    rep = resonance.detect_strong_resonance(p, tol=args.tol)
    if rep is None:
        print("no strong resonance within tolerance")
        return 1
    rows = [("kind", rep.kind), ("mu_star", rep.critical[0]), ("beta_star", rep.critical[1]),
            ("transversality_det", rep.transversality_det)]
    for k, v in sorted(rep.constants.items()):
        rows.append((k, v))
    print(f"{rep.kind} at (mu, beta) = {rep.critical}, transversality det = {rep.transversality_det:.12g}")
    path = emit(["quantity", "value"], rows, cfg)
    print(f"wrote {path}")
    return 0


def _cmd_tongue(args, parser) -> int:
    cfg = _runcfg(args, "tongue", "tongue.csv")
    spec = tongue.tongue_coeffs(args.n, args.m)
    mu_s, beta_s = spec.critical
    rows = [("n", args.n), ("m", args.m), ("beta_star", beta_s), ("mu_star", mu_s),
            ("rho3_0", spec.rho3_0), ("rho2_0", spec.rho2_0), ("sigma0_abs", spec.sigma0_abs)]
    print(f"A_{args.n}/{args.m}: beta* = {beta_s:.10f}, mu* = {mu_s:.10f}")
    print(f"rho3(0) = {spec.rho3_0:.10f}, rho2(0) = {spec.rho2_0:.10f}, |sigma(0)| = {spec.sigma0_abs:.10f}")
    print(f"T(+/-) = {spec.rho2_0/spec.rho3_0:.10f}*chi1 -/+ {spec.sigma0_abs/abs(spec.rho3_0)**((args.m-2)/2):.10f}*chi1^{(args.m-2)/2:g}")
    if args.mu is not None and args.beta is not None:
        chi1, chi2, tm, tp, inside = tongue.tongue_membership(args.mu, args.beta, args.n, args.m, spec)
        rows += [("chi1", chi1), ("chi2", chi2), ("T_minus", tm), ("T_plus", tp), ("inside", inside)]
        print(f"membership at (mu, beta)=({args.mu}, {args.beta}): inside={inside}")
    path = emit(["quantity", "value"], rows, cfg)
    print(f"wrote {path}")
    return 0


def _cmd_marotto(args, parser) -> int:
    p = _param_point(args, parser)
    args.fmt = "json"
    cfg = _runcfg(args, "marotto", "marotto.json")
    rw = marotto.region_W(p)
    print(f"region W: in_region={rw.in_region}, margins={rw.margins}")
    from .fixed_points import get_fixed_point

    e2 = get_fixed_point(p, "E2").coords
    rep = marotto.expanding_at(e2, p)
    print(f"E2=({e2.x:.10g}, {e2.y:.10g}, {e2.z:.10g}) expanding={rep.expanding}, moduli={rep.moduli}")
    cert = marotto.snapback_search(p, cfg={"allow_outside_box": args.allow_outside_box})
    ep = cert.preimage_chain[0]
    rows = [
        ("E2_x", e2.x), ("E2_y", e2.y), ("E2_z", e2.z),
        ("expanding", rep.expanding), ("in_region_W", rw.in_region),
        ("E_prime_x", ep.x), ("E_prime_y", ep.y), ("E_prime_z", ep.z),
        ("residual", cert.residual), ("det_DF2", cert.det_DF2), ("valid", cert.valid),
        ("box_lo_x", cert.expanding_box.lo[0]), ("box_lo_y", cert.expanding_box.lo[1]),
        ("box_lo_z", cert.expanding_box.lo[2]),
        ("box_hi_x", cert.expanding_box.hi[0]), ("box_hi_y", cert.expanding_box.hi[1]),
        ("box_hi_z", cert.expanding_box.hi[2]),
    ]
    print(f"snap-back E'=({ep.x:.10g}, {ep.y:.10g}, {ep.z:.10g}), residual={cert.residual:.3g}, "
          f"det DF^2={cert.det_DF2:.10g}, valid={cert.valid}")
    path = emit(["quantity", "value"], rows, cfg)
    print(f"wrote {path}")
    return 0


def _cmd_orbit(args, parser) -> int:
    p = _param_point(args, parser)
    cfg = _runcfg(args, "orbit", "orbit.csv")
    n = args.n if args.n is not None else 1000
    transient = args.transient if args.transient is not None else 0
    orb = core.iterate(_state(args), p, n, transient=transient)
    rows = [(i, s[0], s[1], s[2]) for i, s in enumerate(orb.states)]
    print(f"recorded {len(rows)} states (diverged={orb.diverged})")
    path = emit(["n", "x", "y", "z"], rows, cfg)
    print(f"wrote {path}")
    return 0 if not orb.diverged else 1


def _cmd_lyapunov(args, parser) -> int:
    p = _param_point(args, parser)
    cfg = _runcfg(args, "lyapunov", "lyapunov.csv")
    n = args.n if args.n is not None else 100_000
    transient = args.transient if args.transient is not None else 1000
    spec = dynamics.lyapunov_spectrum(p, _state(args), n, transient=transient)
    rows = [(spec.exponents[0], spec.exponents[1], spec.exponents[2],
             spec.n_iterations, spec.converged, spec.floored)]
    print(f"exponents: {spec.exponents[0]:.8f}, {spec.exponents[1]:.8f}, {spec.exponents[2]:.8f} "
          f"(converged={spec.converged}, floored={spec.floored})")
    path = emit(["lyap1", "lyap2", "lyap3", "n", "converged", "floored"], rows, cfg)
    print(f"wrote {path}")
    return 0


def _cmd_sweep(args, parser) -> int:
    p = _param_point(args, parser)
    cfg = _runcfg(args, "sweep", "sweep.csv")
    rows_out = []
    k = args.samples
    sweep = dynamics.bifurcation_sweep(
        p, args.axis, (args.start, args.stop), args.grid, _state(args),
        samples_k=k, transient=args.transient, warm_start=args.warm_start,
    )
    for row in sweep:
        xs = list(row.samples[:, 0]) + [float("nan")] * (k - row.samples.shape[0])
        ys = list(row.samples[:, 1]) + [float("nan")] * (k - row.samples.shape[0])
        zs = list(row.samples[:, 2]) + [float("nan")] * (k - row.samples.shape[0])
        rows_out.append((row.param, *xs, *ys, *zs, row.lyap_max))
    cols = (
        ["param"]
        + [f"x{i+1}" for i in range(k)]
        + [f"y{i+1}" for i in range(k)]
        + [f"z{i+1}" for i in range(k)]
        + ["lyap_max"]
    )
    print(f"swept {args.axis} over [{args.start}, {args.stop}] with {args.grid} points")
    path = emit(cols, rows_out, cfg)
    print(f"wrote {path}")
    return 0


def _cmd_normal_form_ode(args, parser) -> int:
    cfg = _runcfg(args, "normal-form-ode", "normal_form_ode.csv")
    params = {}
    for kv in args.param or []:
        k, v = kv.split("=", 1)
        params[k] = float(v)
    traj = resonance.integrate_normal_form(
        args.system, params, (args.u0, args.v0), args.t_end, dt=args.dt
    )
    rows = [(t, u[0], u[1]) for t, u in zip(traj.times, traj.samples)]
    print(f"{args.system}: {len(rows)} samples, diverged={traj.diverged}")
    path = emit(["t", "u1", "u2"], rows, cfg)
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecomap3d",
        description=(
            "Bifurcation and chaos analysis of the 3D discrete ecological map "
            "(x,y,z) -> (mu x (1-x-y-z), beta y (x-z), lambda y z). "
            "Environment: ECOMAP3D_DISABLE_NUMBA=1 selects the pure-NumPy kernels; "
            "ECOMAP3D_THREADS=<n> overrides the numba thread count."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("fixed-points", help="existence and coordinates of O, E1, E2, E3")
    _add_params(s)
    s.set_defaults(func=_cmd_fixed_points)

    s = subs.add_parser("classify", help="topological classification of the fixed points")
    _add_params(s)
    s.set_defaults(func=_cmd_classify)

    s = subs.add_parser("codim1", help="codimension-1 bifurcation coefficients")
    _add_params(s)
    s.add_argument("--kind", choices=("transcritical", "flip", "ns"), required=True)
    s.add_argument("--point", choices=("O", "E1", "E2"), default="E2")
    s.add_argument("--formula", choices=("published", "corrected"), default="published")
    s.set_defaults(func=_cmd_codim1)

    s = subs.add_parser("resonance", help="strong 1:2 / 1:3 / 1:4 resonance report")
    _add_params(s)
    s.add_argument("--tol", type=float, default=1.0e-6)
    s.set_defaults(func=_cmd_resonance)

    s = subs.add_parser("tongue", help="Arnold tongue A_{n/m} constants and membership")
    _add_params(s)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=_cmd_tongue)

    s = subs.add_parser("marotto", help="Marotto snap-back chaos certificate")
    _add_params(s)
    s.add_argument("--allow-outside-box", action="store_true")
    s.set_defaults(func=_cmd_marotto)

    s = subs.add_parser("orbit", help="iterate the map and record the orbit tail")
    _add_params(s, state=True)
    s.add_argument("--n", type=int, default=None, help="states to record (default 1000)")
    s.add_argument("--transient", type=int, default=None, help="steps to skip (default 0)")
    s.set_defaults(func=_cmd_orbit)

    s = subs.add_parser("lyapunov", help="Lyapunov spectrum along an orbit")
    _add_params(s, state=True)
    s.add_argument("--n", type=int, default=None, help="iterations (default 100000)")
    s.add_argument("--transient", type=int, default=None, help="steps to skip (default 1000)")
    s.set_defaults(func=_cmd_lyapunov)

    s = subs.add_parser("sweep", help="bifurcation-diagram parameter sweep")
    _add_params(s, state=True)
    s.add_argument("--axis", choices=("lambda", "mu", "beta"), required=True)
    s.add_argument("--from", dest="start", type=float, required=True)
    s.add_argument("--to", dest="stop", type=float, required=True)
    s.add_argument("--grid", type=int, required=True)
    s.add_argument("--samples", type=int, default=64)
    s.add_argument("--transient", type=int, default=2000)
    s.add_argument("--warm-start", action="store_true")
    s.set_defaults(func=_cmd_sweep)

    s = subs.add_parser("normal-form-ode", help="RK4 integration of the planar normal-form flows")
    _add_params(s)
    s.add_argument("--system", choices=("Eq129", "Eq1310", "Eq1413"), required=True)
    s.add_argument("--param", action="append", help="key=value (repeatable)")
    s.add_argument("--u0", type=float, default=0.01)
    s.add_argument("--v0", type=float, default=0.0)
    s.add_argument("--t-end", type=float, default=10.0)
    s.add_argument("--dt", type=float, default=1.0e-3)
    s.set_defaults(func=_cmd_normal_form_ode)

    return parser


def _apply_thread_override() -> None:
    val = os.environ.get("ECOMAP3D_THREADS")
    if not val:
        return
    try:
        n = int(val)
    except ValueError:
        return
    try:
        import numba

        numba.set_num_threads(max(1, n))
    except ImportError:
        pass


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_thread_override()
    _merge_config(args, parser)
    try:
        return args.func(args, parser)
    except EcoMapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
