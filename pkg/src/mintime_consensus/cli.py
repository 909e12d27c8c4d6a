"""Command-line front end: solve a fleet config, plot geometry, verify vs brute force.

Config files are YAML::

    b: 1.0
    beta: 0.7
    agents:
      - {id: a1, x1: 0.04, x2: 0.1}
      - {id: a2, x1: 0.39, x2: 1.05}
    tolerances: {root_tol: 1e-10, feas_tol: 1e-9, membership_eps: 1e-6}  # optional
    oracle: {grid: 200, tol: 1e-4, t_margin: 1.0}                        # optional

Reports are JSON with sorted keys, so re-running a command on the same config
produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .boundary import sample_boundary
from .bruteforce import intersect_all, oracle_min_time, sample_attainable
from .consensus import (Feasibility, Fleet, feasibility, min_time_consensus,
                        region_of_consensus)
from .dynamics import Params, simulate
from .exceptions import MinTimeConsensusError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_MISMATCH = 3


class ConfigError(ValueError):
    pass


def load_fleet(path) -> tuple:
    """Parse a YAML fleet config into (Fleet, oracle_options)."""
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML in {path}: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    for key in ("b", "beta", "agents"):
        if key not in raw:
            raise ConfigError(f"missing required config field '{key}'")
    tol = raw.get("tolerances") or {}
    unknown = set(tol) - {"root_tol", "feas_tol", "membership_eps"}
    if unknown:
        raise ConfigError(f"unknown tolerance fields: {sorted(unknown)}")
    try:
        params = Params(b=float(raw["b"]), beta=float(raw["beta"]),
                        **{k: float(v) for k, v in tol.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad parameters: {exc}")
    agents, ids = [], []
    if not isinstance(raw["agents"], list) or not raw["agents"]:
        raise ConfigError("'agents' must be a non-empty list")
    for idx, entry in enumerate(raw["agents"]):
        if not isinstance(entry, dict) or "x1" not in entry or "x2" not in entry:
            raise ConfigError(f"agent #{idx + 1} needs fields x1 and x2")
        ids.append(str(entry.get("id", f"a{idx + 1}")))
        try:
            agents.append([float(entry["x1"]), float(entry["x2"])])
        except (TypeError, ValueError):
            raise ConfigError(f"agent '{ids[-1]}': x1/x2 must be numbers")
    try:
        fleet = Fleet(np.array(agents), params, ids=tuple(ids))
    except ValueError as exc:
        raise ConfigError(str(exc))
    oracle_opts = raw.get("oracle") or {}
    return fleet, oracle_opts


def _round(x, nd=10):
    return round(float(x), nd)


def _feasibility_payload(fleet: Fleet) -> dict:
    gap = fleet.x1_max - fleet.x1_min
    limit = 2.0 * fleet.params.beta / fleet.params.b
    return {"verdict": feasibility(fleet).value,
            "x1_gap": _round(gap), "gap_limit": _round(limit)}


def solve_payload(fleet: Fleet) -> dict:
    """Assemble the machine-readable report for a solved fleet."""
    payload = {
        "tool": {"name": "mintime-consensus", "version": __version__},
        "params": {"b": _round(fleet.params.b), "beta": _round(fleet.params.beta),
                   "root_tol": fleet.params.root_tol,
                   "feas_tol": fleet.params.feas_tol,
                   "membership_eps": fleet.params.membership_eps},
        "feasibility": _feasibility_payload(fleet),
        "agents": [{"id": aid, "x1": _round(x[0]), "x2": _round(x[1])}
                   for aid, x in zip(fleet.ids, fleet.agents)],
    }
    if payload["feasibility"]["verdict"] != Feasibility.FINITE_TIME.value:
        payload["solution"] = None
        return payload
    outcome = min_time_consensus(fleet)
    region = region_of_consensus(fleet, n=256)
    payload["solution"] = {
        "t_consensus": _round(outcome.t_bar_f),
        "consensus_point": [_round(outcome.x_bar.x1), _round(outcome.x_bar.x2)],
        "critical_triplet": (list(outcome.critical_triplet)
                             if outcome.critical_triplet is not None else None),
        "critical_triplet_ids": ([fleet.ids[i] for i in outcome.critical_triplet]
                                 if outcome.critical_triplet is not None else None),
        "per_agent": [
            {"id": plan.id,
             "sequence": [plan.schedule.gamma1, 0, plan.schedule.gamma2],
             "t1": _round(plan.schedule.t1), "t2": _round(plan.schedule.t2),
             "fuel_used": _round(plan.fuel_used)}
            for plan in outcome.plans
        ],
        "region_of_consensus": [[_round(v[0]), _round(v[1])] for v in region.hull],
    }
    return payload


def _write_json(payload: dict, out_path: Path):
    out_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_solve(args) -> int:
    try:
        fleet, _ = load_fleet(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        payload = solve_payload(fleet)
    except MinTimeConsensusError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out = Path(args.out) if args.out else Path(args.config).with_suffix(".report.json")
    _write_json(payload, out)
    verdict = payload["feasibility"]["verdict"]
    if payload["solution"] is None:
        print(f"{verdict}: x1 gap {payload['feasibility']['x1_gap']} vs "
              f"limit {payload['feasibility']['gap_limit']} (report: {out})")
        return EXIT_INFEASIBLE
    sol = payload["solution"]
    print(f"t_consensus = {sol['t_consensus']:.6f} at "
          f"({sol['consensus_point'][0]:.6f}, {sol['consensus_point'][1]:.6f}); "
          f"critical triplet {sol['critical_triplet_ids']} (report: {out})")
    return EXIT_OK


def _csv_rows(path: Path, rows):
    with path.open("w") as fh:
        fh.write("agent_id,t,x1,x2,u\n")
        for agent_id, t, x1, x2, u in rows:
            fh.write(f"{agent_id},{t},{x1},{x2},{u}\n")


def cmd_plot(args) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    try:
        fleet, _ = load_fleet(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    outdir = Path(args.out_dir) if args.out_dir else Path(args.config).parent
    outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.config).stem
    p = fleet.params
    rows = []
    fig, ax = plt.subplots(figsize=(6, 5))

    if args.which in ("sets", "phase"):
        outcome = min_time_consensus(fleet)

    if args.which == "sets":
        t = args.time if args.time is not None else outcome.t_bar_f
        for aid, x0 in zip(fleet.ids, fleet.agents):
            poly = sample_boundary(x0, p.beta, p.b, t, n=1024)
            closed = np.vstack([poly, poly[:1]])
            ax.plot(closed[:, 0], closed[:, 1], label=aid)
            rows += [(aid, t, v[0], v[1], "") for v in poly]
        ax.plot(*outcome.x_bar, "k*", markersize=10, label="consensus")
        ax.set_title(f"attainable sets at t = {t:.4f}")
    elif args.which == "region":
        region = region_of_consensus(fleet, n=512)
        if len(region.hull) >= 3:
            closed = np.vstack([region.hull, region.hull[:1]])
            ax.fill(closed[:, 0], closed[:, 1], alpha=0.25, label="region of consensus")
        ax.plot(region.upper_arc[:, 0], region.upper_arc[:, 1], "C0")
        ax.plot(region.lower_arc[:, 0], region.lower_arc[:, 1], "C1")
        rows += [("region", "", v[0], v[1], "") for v in region.hull]
        ax.plot(fleet.agents[:, 0], fleet.agents[:, 1], "ko", label="agents")
        ax.set_title("region of consensus")
    elif args.which == "phase":
        for aid, x0, plan in zip(fleet.ids, fleet.agents, outcome.plans):
            times, states, _ = simulate(x0, plan.schedule, p, samples=400)
            ax.plot(states[:, 0], states[:, 1], label=aid)
            ax.plot(x0[0], x0[1], "o", color=ax.lines[-1].get_color(), markersize=4)
            rows += [(aid, t, s[0], s[1], plan.schedule.u_at(t))
                     for t, s in zip(times, states)]
        ax.plot(*outcome.x_bar, "k*", markersize=10, label="consensus")
        ax.set_title(f"phase trajectories to t = {outcome.t_bar_f:.4f}")
    else:
        print(f"error: unknown plot kind '{args.which}'", file=sys.stderr)
        return EXIT_ERROR

    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.legend(fontsize=8)
    svg = outdir / f"{stem}_{args.which}.svg"
    csv = outdir / f"{stem}_{args.which}.csv"
    fig.savefig(svg)
    plt.close(fig)
    _csv_rows(csv, rows)
    print(f"wrote {svg} and {csv}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        fleet, oracle_opts = load_fleet(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if feasibility(fleet) is not Feasibility.FINITE_TIME:
        payload = {"feasibility": _feasibility_payload(fleet), "match": None}
        out = Path(args.out) if args.out else Path(args.config).with_suffix(".verify.json")
        _write_json(payload, out)
        print(f"{payload['feasibility']['verdict']}; nothing to verify (report: {out})")
        return EXIT_INFEASIBLE

    grid = int(oracle_opts.get("grid", 200))
    tol = float(oracle_opts.get("tol", 1e-4))
    margin = float(oracle_opts.get("t_margin", 1.0))
    outcome = min_time_consensus(fleet)
    p = fleet.params
    t_oracle, witness = oracle_min_time(list(fleet.agents), p,
                                        t_hi=outcome.t_bar_f + margin,
                                        tol=tol, grid=(grid, grid))
    dt = abs(outcome.t_bar_f - t_oracle)
    inter = intersect_all([sample_attainable(a, p.beta, p.b, t_oracle, grid=(grid, grid))
                           for a in fleet.agents])
    point_ok = (not inter.is_empty) and inter.contains(
        np.array(outcome.x_bar), eps=1e-2)

    rng = np.random.default_rng(args.seed)
    probes, probe_pass = 20, 0
    for _ in range(probes):
        lam = rng.dirichlet(np.ones(len(inter.vertices))) if not inter.is_empty else None
        if lam is None:
            break
        pt = lam @ inter.vertices
        sims = []
        from .boundary import min_fuel_profile
        ok = True
        for x0 in fleet.agents:
            try:
                min_fuel_profile(x0, pt, t_oracle, p.b, p.beta)
            except MinTimeConsensusError:
                ok = False
                break
        probe_pass += ok

    payload = {
        "feasibility": _feasibility_payload(fleet),
        "seed": args.seed,
        "analytic": {"t": _round(outcome.t_bar_f),
                     "point": [_round(outcome.x_bar.x1), _round(outcome.x_bar.x2)]},
        "oracle": {"t": _round(t_oracle), "grid": grid, "tol": tol,
                   "witness": [_round(witness.x1), _round(witness.x2)]},
        "abs_dt": _round(dt),
        "checks": {
            "dt_within_5e-3": bool(dt <= 5e-3),
            "analytic_point_in_dilated_oracle_polygon": bool(point_ok),
            "interior_probes_reachable": f"{probe_pass}/{probes}",
        },
        "match": bool(dt <= 5e-3 and point_ok),
    }
    out = Path(args.out) if args.out else Path(args.config).with_suffix(".verify.json")
    _write_json(payload, out)
    status = "MATCH" if payload["match"] else "MISMATCH"
    print(f"{status}: |dt| = {dt:.2e} (analytic {outcome.t_bar_f:.6f}, "
          f"oracle {t_oracle:.6f}); report: {out}")
    return EXIT_OK if payload["match"] else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mintime-consensus",
        description="Minimum-time consensus planner for damped second-order agents",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve a fleet config and write a JSON report")
    sp.add_argument("config")
    sp.add_argument("--out", help="report path (default: <config>.report.json)")
    sp.set_defaults(func=cmd_solve)

    pp = sub.add_parser("plot", help="emit SVG plot plus CSV table")
    pp.add_argument("config")
    pp.add_argument("--which", required=True, choices=["sets", "region", "phase"])
    pp.add_argument("--time", type=float, help="horizon for --which sets")
    pp.add_argument("--out-dir", help="output directory (default: beside config)")
    pp.set_defaults(func=cmd_plot)

    vp = sub.add_parser("verify", help="cross-check the solver against brute force")
    vp.add_argument("config")
    vp.add_argument("--seed", type=int, default=0, help="seed for interior probes")
    vp.add_argument("--out", help="report path (default: <config>.verify.json)")
    vp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MinTimeConsensusError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
