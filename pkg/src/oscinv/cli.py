"""Command-line front end: simulate, fit, invariant, verify, grid."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import fjet, grid, invariants1d as inv1, invariantsnd as invn, verify
from .core import OscParams, Regime, derived_frequency
from .errors import OscinvError, RegimeError
from .trajectory import (build_delta_dataset, config_from_dict, load_config, read_csv,
                         simulate, write_csv)

INVARIANT_KINDS = ("under1d", "over1d", "crit1d", "ralt", "cr", "ci", "ca", "cb",
                   "comm", "gam", "wedge")


class CLIError(Exception):
    pass


def _float_list(text):
    return [float(x) for x in text.replace(",", " ").split()]


def _int_list(text):
    return [int(x) for x in text.replace(",", " ").split()]


def _params_from_args(args, required=True) -> OscParams | None:
    if getattr(args, "config", None):
        return load_config(args.config).params
    if args.omega0 is not None:
        return OscParams(_float_list(args.omega0), args.gamma)
    if required:
        raise CLIError("oscillator parameters needed: pass --config or --omega0/--gamma")
    return None


def _add_param_flags(p):
    p.add_argument("--config", help="simulation config JSON supplying omega0 and gamma")
    p.add_argument("--omega0", help="natural frequencies, comma separated")
    p.add_argument("--gamma", type=float, default=0.0, help="damping coefficient")


def cmd_simulate(args) -> int:
    raw = _raw_config(args.config)
    if args.seed is not None:
        raw["seed"] = args.seed
    cfg = config_from_dict(raw)
    traj = simulate(cfg)
    write_csv(traj, args.out)
    for k, reg in enumerate(cfg.params.regimes()):
        print(f"axis {k + 1}: {reg.value}")
    return 0


def _raw_config(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_fit(args) -> int:
    strides = _int_list(args.strides)
    if len(set(strides)) < max(3, args.degree + 1):
        raise CLIError(f"at least {max(3, args.degree + 1)} distinct strides required, got {strides}")
    traj = read_csv(args.traj)
    fs = fjet.FeatureSet.linear() if args.features == "linear" else fjet.FeatureSet.default()
    models = [fjet.fit_feature_regression(build_delta_dataset(traj, s), fs) for s in strides]
    est = fjet.extrapolate_to_zero(models, degree=args.degree)
    text = fjet.dumps_report(fjet.fit_report(models, est))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    for k in range(traj.dim):
        print(f"axis {k + 1}: omega0^2 = {est.omega0_sq_hat[k]:.10g}, "
              f"2*gamma = {est.two_gamma_hat[k]:.10g}")
    for flag in est.flags:
        print(f"warning: {flag}", file=sys.stderr)
    return 0


def invariant_series(kind: str, params: OscParams, traj, axis: int = 0,
                     ab=(1, 2), omega_bar=None):
    """Invariant values along a trajectory: (column names, values[T, ncol])."""
    u, v = traj.u, traj.v
    if kind in ("under1d", "over1d", "crit1d", "ralt"):
        ua, va = u[:, axis], v[:, axis]
        if kind == "under1d":
            vals = inv1.r_underdamped_along(params, ua, va, axis, dt=traj.dt)
        elif kind == "over1d":
            vals = inv1.r_overdamped(params, ua, va, axis)
        elif kind == "crit1d":
            vals = inv1.r_critical(params, ua, va, axis)
        else:
            vals = inv1.r_alternative(params, ua, va, traj.t, axis)
        return ["value"], np.asarray(vals)[:, None]
    if params.dim < 2:
        raise RegimeError(f"kind {kind} needs at least 2 axes, parameters have {params.dim}")
    modes = invn.track_modes(params, u, v, dt=traj.dt)
    if kind == "wedge":
        wc = invn.wedge_constants(modes)
        iu = np.triu_indices(params.dim, k=1)
        names = [f"C{i + 1}{j + 1}" for i, j in zip(*iu)]
        return names, wc.independent()
    if kind == "cr":
        vals = invn.c_r_undamped(modes)
    elif kind == "ci":
        vals = invn.c_i_undamped(modes)
    elif kind == "ca":
        vals = invn.c_a_damped(modes)
    elif kind == "cb":
        vals = invn.c_b_damped(modes)
    elif kind == "gam":
        vals = invn.generalized_angular_momentum(modes)
    else:
        a, b = ab
        wb = modes.omega[0] / a if omega_bar is None else omega_bar
        res = invn.commensurate_invariant(modes, a, b, wb)
        if res.poly is not None:
            return ["phase", "poly"], np.column_stack([res.phase, res.poly])
        vals = res.phase
    return ["value"], np.asarray(vals)[:, None]


def cmd_invariant(args) -> int:
    params = _params_from_args(args)
    traj = read_csv(args.traj, params)
    if args.kind in ("under1d", "over1d", "crit1d"):
        want = {"under1d": Regime.UNDERDAMPED, "over1d": Regime.OVERDAMPED,
                "crit1d": Regime.CRITICAL}[args.kind]
        got = derived_frequency(params, args.axis).regime
        if got is not want:
            raise RegimeError(f"kind {args.kind} requires {want.value} data, "
                              f"parameters are {got.value}")
    names, vals = invariant_series(args.kind, params, traj, args.axis,
                                   tuple(args.ab), args.omega_bar)
    if args.out:
        lines = [",".join(["t"] + names)]
        for i in range(len(traj)):
            lines.append(",".join(repr(float(x)) for x in [traj.t[i], *vals[i]]))
        with open(args.out, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    summary = {name: verify.constancy(vals[:, c]).to_dict() for c, name in enumerate(names)}
    print(json.dumps({"kind": args.kind, "constancy": summary}))
    return 0


def verify_config(cfg) -> dict:
    """Run the applicable constancy and budget checks for one configuration."""
    params = cfg.params
    traj = simulate(cfg)
    out = {"regimes": [r.value for r in params.regimes()], "checks": {}}
    checks = out["checks"]
    budget = verify.energy_budget(traj)
    checks["energy_budget_residual"] = budget.max_residual
    checks["energy_plus_work"] = verify.constancy(budget.total).to_dict()
    for k in range(params.dim):
        reg = derived_frequency(params, k).regime
        kind = {Regime.UNDERDAMPED: "under1d", Regime.OVERDAMPED: "over1d",
                Regime.CRITICAL: "crit1d"}[reg]
        for name in (kind, "ralt"):
            try:
                _, vals = invariant_series(name, params, traj, axis=k)
            except OscinvError as exc:
                checks[f"axis{k + 1}:{name}"] = {"error": str(exc)}
                continue
            checks[f"axis{k + 1}:{name}"] = verify.constancy(vals[:, 0]).to_dict()
    if params.dim >= 2 and all(r is Regime.UNDERDAMPED for r in params.regimes()):
        kinds = ["cr", "ci", "gam"] if params.gamma == 0 else ["ca", "cb"]
        for name in kinds + ["wedge"]:
            try:
                cols, vals = invariant_series(name, params, traj)
            except OscinvError as exc:
                checks[name] = {"error": str(exc)}
                continue
            for c, col in enumerate(cols):
                key = name if len(cols) == 1 else f"{name}:{col}"
                checks[key] = verify.constancy(vals[:, c]).to_dict()
        if params.gamma == 0:
            h = verify.hamiltonian(params)
            modes = invn.track_modes(params, traj.u, traj.v)

            def cr(uu, vv):
                m = invn.mode_quantities(params, uu, vv, modes.phases())
                return float(invn.c_r_undamped(m))
            checks["poisson_cr_h"] = abs(verify.poisson_bracket(cr, h, traj.u[-1], traj.v[-1]))
    return out


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    report = verify_config(cfg)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def cmd_grid(args) -> int:
    params = _params_from_args(args)
    window = _float_list(args.window) if args.window else [-5.0, 5.0, -5.0, 5.0]
    res = _int_list(args.res) if args.res else [500, 500]
    if len(window) != 4:
        raise CLIError("--window takes u_min,u_max,v_min,v_max")
    if len(res) == 1:
        res = res * 2
    if len(res) != 2:
        raise CLIError("--res takes nu[,nv]")
    spec = grid.GridSpec(*window, nu=res[0], nv=res[1], clamp_threshold=args.clamp,
                         sheet=args.sheet, transform=args.transform)
    values = grid.evaluate_grid(args.kind, params, spec, args.axis)
    grid.write_grid_csv(args.out, spec, values)
    print(f"wrote {spec.nu}x{spec.nv} grid to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscinv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample the exact solution to a trajectory CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, help="overrides the config's noise seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="FJet feature regression and eps -> 0 extrapolation")
    p.add_argument("--traj", required=True)
    p.add_argument("--strides", required=True, help="e.g. 1,2,3,4,5,6,7,8,9,10")
    p.add_argument("--features", choices=("default", "linear"), default="default")
    p.add_argument("--degree", type=int, default=2,
                   help="polynomial degree in eps of the c(eps)/eps extrapolation (default 2)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("invariant", help="evaluate an invariant along a trajectory")
    p.add_argument("--traj", required=True)
    p.add_argument("--kind", required=True, choices=INVARIANT_KINDS)
    _add_param_flags(p)
    p.add_argument("--axis", type=int, default=0, help="axis index for 1D kinds")
    p.add_argument("--ab", type=int, nargs=2, default=(1, 2), metavar=("A", "B"))
    p.add_argument("--omega-bar", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("verify", help="run constancy and budget checks for a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("grid", help="emit a u,v,value grid of a 1D invariant")
    p.add_argument("--kind", required=True, choices=grid.GRID_KINDS)
    _add_param_flags(p)
    p.add_argument("--axis", type=int, default=0)
    p.add_argument("--window", help="u_min,u_max,v_min,v_max (default -5,5,-5,5)")
    p.add_argument("--res", help="nu[,nv] (default 500,500)")
    p.add_argument("--sheet", type=int)
    p.add_argument("--clamp", type=float)
    p.add_argument("--transform", choices=("identity", "exp"), default="identity")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CLIError, ValueError, OSError, json.JSONDecodeError) as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
