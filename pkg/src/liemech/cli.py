"""Command-line front end.

Exit codes: 0 success, 1 domain or I/O error (one line on stderr), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import io as lio
from .algebra import check_membership
from .builders import get_algebra, heavy_top3, so3
from .cohomology import h1_dim, h1_witnesses, h2_dim, h2_witnesses
from .dynamics import (
    IntegratorConfig,
    RigidBodyParams,
    bifurcation_values,
    casimir,
    energy_scan,
    heavy_top_hamiltonian,
    rigid_body_hamiltonian,
    simulate_lie_poisson,
)
from .errors import LieMechError
from .geodesic import geodesic_check
from .moment import (
    CotangentPoint,
    act_lambda,
    act_rho,
    cm3_point,
    equivariance_residual,
    moment_left,
    moment_right,
    orbit_dimension,
    poincare_point,
)
from .reconstruction import reconstruct_collective
from .roots import build_root_system, dynkin, root_system_to_dict

METHODS = {"rk4": "rk4", "midpoint": "implicit_midpoint", "implicit_midpoint": "implicit_midpoint"}
DEFAULT_PARAMS = '{"I": [3, 2, 1]}'


class UsageError(Exception):
    pass


def _inertia(params) -> RigidBodyParams:
    if not isinstance(params, dict) or "I" not in params:
        raise ValueError('params must be a JSON object with key "I"')
    return RigidBodyParams.of(params["I"])


def _canonical(w) -> list:
    """Round, fix the SVD sign ambiguity (first nonzero entry positive), drop signed zeros."""
    w = np.round(np.asarray(w, dtype=float), 12)
    nz = np.flatnonzero(w)
    if nz.size and w.flat[nz[0]] < 0:
        w = -w
    return (w + 0.0).tolist()


def _vector(value, n, what):
    v = np.asarray(value, dtype=float)
    if v.shape != (n,):
        raise ValueError(f"{what} must be a list of {n} numbers")
    return v


# -- subcommands ---------------------------------------------------------------

def cmd_roots(args) -> int:
    rs = build_root_system(args.family, args.rank)
    if args.format == "json":
        lio.emit_json(root_system_to_dict(rs))
    elif args.format == "dot":
        sys.stdout.write(dynkin(rs).to_dot() + "\n")
    else:
        d = root_system_to_dict(rs)
        lines = [
            f"family {rs.family} rank {rs.rank}",
            f"roots {len(rs.roots)} positive {len(rs.positive)} simple {len(rs.simple)}",
            "cartan matrix:",
            *(" ".join(f"{x:3d}" for x in row) for row in d["cartan_matrix"]),
            dynkin(rs).to_text(),
        ]
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_cohomology(args) -> int:
    g = get_algebra(args.algebra)
    out = {"algebra": g.name, "dim": g.dim}
    degrees = [args.degree] if args.degree else [1, 2]
    for deg in degrees:
        out[f"h{deg}"] = h1_dim(g) if deg == 1 else h2_dim(g)
        if args.witness:
            if deg == 1:
                out["h1_witnesses"] = [_canonical(w) for w in h1_witnesses(g)]
            else:
                out["h2_witnesses"] = [_canonical(w.matrix) for w in h2_witnesses(g)]
    lio.emit_json(out)
    return 0


def cmd_simulate(args) -> int:
    params = lio.parse_json_arg(args.params)
    inertia = _inertia(params)
    cfg = IntegratorConfig(METHODS[args.method], args.dt)
    if args.model == "rigid-body":
        g, h = so3(), rigid_body_hamiltonian(inertia)
        mu0 = _vector(lio.parse_json_arg(args.mu0), 3, "mu0")
        labels, cas_labels = ["mu1", "mu2", "mu3"], ["casimir"]
    else:
        g = heavy_top3()
        h = heavy_top_hamiltonian(inertia, params.get("x", [0.0, 0.0, 1.0]))
        mu0 = _vector(lio.parse_json_arg(args.mu0), 6, "mu0 (mu1..3, K1..3)")
        labels, cas_labels = ["mu1", "mu2", "mu3", "K1", "K2", "K3"], ["casimir_KK", "casimir_muK"]
    traj = simulate_lie_poisson(g, h, mu0, args.T, cfg)
    cas = np.asarray(traj.casimir).reshape(len(traj.states), -1)
    rows = [[t, *s, e, *c] for t, s, e, c in zip(traj.times, traj.states, traj.energy, cas)]
    lio.emit_csv(["t", *labels, "energy", *cas_labels], rows, args.out)
    return 0


def cmd_reconstruct(args) -> int:
    inertia = _inertia(lio.parse_json_arg(args.params))
    g = so3()
    a0 = np.asarray(lio.parse_json_arg(args.a0), dtype=float)
    check_membership(g, a0)
    mu0 = _vector(lio.parse_json_arg(args.mu0), 3, "mu0")
    cfg = IntegratorConfig(METHODS[args.method], args.dt)
    traj, _ = reconstruct_collective(g, rigid_body_hamiltonian(inertia), CotangentPoint(a0, mu0), args.T, cfg)
    header = ["t", *(f"a{i}{j}" for i in range(1, 4) for j in range(1, 4)), "mu1", "mu2", "mu3", "momentum_residual", "energy"]
    rows = [[t, *s, r, e] for t, s, r, e in zip(traj.times, traj.states, traj.momentum_residual, traj.energy)]
    lio.emit_csv(header, rows, args.out)
    return 0


def _orbit_point(g, spec):
    if isinstance(spec, dict):
        if g.name == "cm3":
            return cm3_point(float(spec["alpha"]), float(spec["beta"]))
        if g.name == "poincare":
            return poincare_point(
                float(spec["p0"]), spec.get("p", [0, 0, 0]), spec.get("kappa", [0, 0, 0]), spec.get("s", [0, 0, 0])
            )
        raise ValueError(f"named point coordinates are only defined for cm3 and poincare, not {g.name!r}")
    return _vector(spec, g.dim, f"point for {g.name}")


def cmd_orbit_dim(args) -> int:
    g = get_algebra(args.algebra)
    point = _orbit_point(g, lio.parse_json_arg(args.point))
    sys.stdout.write(f"{orbit_dimension(g, point)}\n")
    return 0


def _scan_one(job):
    inertia, r, energy, n_theta = job
    return energy_scan(inertia, r, [energy], n_theta=n_theta, n_phi=2 * n_theta)[0]


def cmd_scan(args) -> int:
    inertia = _inertia(lio.parse_json_arg(args.params))
    if not args.r > 0:
        raise ValueError("--r must be positive")
    values = bifurcation_values(inertia, args.r)
    energies = {v + s * args.eps for v in values for s in (-1.0, 1.0)}
    lo, hi = 0.5 * values[0], 1.5 * values[-1]
    energies |= {lo + (hi - lo) * k / max(1, args.samples - 1) for k in range(args.samples)}
    jobs = [(inertia.inertia.tolist(), args.r, e, args.grid) for e in sorted(energies)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_one, jobs))
    else:
        rows = [_scan_one(j) for j in jobs]
    rows.sort(key=lambda row: row[0])
    lio.emit_json({"r": args.r, "inertia": inertia.inertia.tolist(), "bifurcation_values": values})
    if args.out:
        lio.emit_csv(["E", "level_curves", "sublevel_components", "superlevel_components"], rows, args.out)
    return 0


def cmd_geodesic(args) -> int:
    inertia = lio.parse_json_arg(args.inertia)
    if isinstance(inertia, dict):
        inertia = inertia["I"]
    omega0 = _vector(lio.parse_json_arg(args.omega0), 3, "omega0")
    kwargs = {} if args.q0 is None else {"q0": _vector(lio.parse_json_arg(args.q0), 3, "q0")}
    lio.emit_json(geodesic_check(inertia, omega0, args.T, args.dt, **kwargs))
    return 0


def cmd_moment(args) -> int:
    if args.action != "check":
        raise UsageError(f"unknown moment action {args.action!r}; expected 'check'")
    g = get_algebra(args.group)
    g.require_rep()
    out = {
        "group": g.name,
        "samples": args.samples,
        "seed": args.seed,
        "left": equivariance_residual(g, act_lambda, moment_left, args.samples, args.seed),
        "right": equivariance_residual(g, act_rho, moment_right, args.samples, args.seed),
    }
    lio.emit_json(out)
    return 0


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liemech", description="Lie algebras, momentum maps and rigid-body dynamics.")
    sub = p.add_subparsers(dest="command", metavar="command")

    s = sub.add_parser("roots", help="root system, Cartan matrix and Dynkin diagram")
    s.add_argument("--family", required=True, choices=["A", "B", "C", "D"])
    s.add_argument("--rank", required=True, type=int)
    s.add_argument("--format", default="text", choices=["text", "json", "dot"])
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("cohomology", help="dimensions of H^1 and H^2")
    s.add_argument("--algebra", required=True, help="builder name or JSON file")
    s.add_argument("--degree", type=int, choices=[1, 2])
    s.add_argument("--witness", action="store_true", help="include representative cocycles")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("simulate", help="Lie-Poisson simulation with diagnostics")
    s.add_argument("--model", default="rigid-body", choices=["rigid-body", "heavy-top"])
    s.add_argument("--params", default=DEFAULT_PARAMS)
    s.add_argument("--mu0", required=True)
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--method", default="midpoint", choices=sorted(METHODS))
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("reconstruct", help="collective reconstruction on T*SO(3)")
    s.add_argument("--model", default="rigid-body", choices=["rigid-body"])
    s.add_argument("--params", default=DEFAULT_PARAMS)
    s.add_argument("--a0", default="[[1,0,0],[0,1,0],[0,0,1]]")
    s.add_argument("--mu0", required=True)
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--method", default="midpoint", choices=sorted(METHODS))
    s.add_argument("--out")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("orbit-dim", help="coadjoint orbit dimension")
    s.add_argument("--algebra", required=True)
    s.add_argument("--point", required=True, help="coordinate list or named point JSON")
    s.set_defaults(func=cmd_orbit_dim)

    s = sub.add_parser("scan", help="bifurcation values and level-set component counts")
    s.add_argument("--model", default="rigid-body", choices=["rigid-body"])
    s.add_argument("--params", default=DEFAULT_PARAMS)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--samples", type=int, default=9)
    s.add_argument("--grid", type=int, default=400, help="latitude cells of the sphere grid")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("geodesic-check", help="Euler form versus chart geodesic")
    s.add_argument("--inertia", required=True)
    s.add_argument("--omega0", required=True)
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--q0")
    s.set_defaults(func=cmd_geodesic)

    s = sub.add_parser("moment", help="momentum-map equivariance check")
    s.add_argument("action", choices=["check"])
    s.add_argument("--group", required=True)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_moment)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except (LieMechError, ValueError, KeyError, OSError, ArithmeticError, json.JSONDecodeError) as exc:
        msg = str(exc).replace("\n", " ")
        sys.stderr.write(f"error: {type(exc).__name__}: {msg}\n")
        return 1


def main() -> None:
    sys.exit(dispatch())
