"""Command-line reproduction harness.

    qtraj <fig1|fig2|fig3|fig4|table|search> [--out DIR] [--metric M]
          [--p-grid a:b:step] [--count N] [--seed S] [--dep local|global]
          [--config FILE]

Every command writes CSV/JSON data, a matplotlib script that plots it, and a
``manifest_<command>.json`` recording the resolved configuration. Passing
that manifest back through ``--config`` reruns the command with the same
settings. ``QTRAJ_THREADS`` sets the worker count for the sample sweep in
``fig4``.

Exit status: 0 on success, 2 on a configuration error, 1 on a numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .channels import FLIP_KINDS, ChannelKind, evolve
from .distances import Metric, parse_metric
from .entanglement import entanglement, linear_entropy
from .errors import BadParameter, ConfigError, QTrajError
from .geometry import (
    coincidence_check,
    curves,
    final_state_geometry,
    mixedness_curve_spread,
    p_grid,
    parse_grid,
    sudden_death,
    trajectory,
)
from .qlinalg import ghz_state, hs_state, ket_to_dm, to_json, w_state
from .search import AnnealConfig, anneal_robust_state, dominance_report, lu_orbit

STATES = {"HS": hs_state, "GHZ": ghz_state, "W": w_state}


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.10g}"
    return str(x)


def write_csv(path: Path, header, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def write_json(path: Path, obj) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


_PLOT_TEMPLATE = '''"""Plot {name} outputs; run from the output directory."""
import csv
import matplotlib.pyplot as plt

for fname, x, ys in {series!r}:
    with open(fname) as fh:
        rows = list(csv.DictReader(fh))
    fig, ax = plt.subplots()
    for y in ys:
        ax.plot([float(r[x]) for r in rows], [float(r[y]) for r in rows], label=y)
    ax.set_xlabel(x)
    ax.legend()
    ax.set_title(fname)
    fig.savefig(fname.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def write_plot_script(out_dir: Path, name: str, series) -> Path:
    path = out_dir / f"plot_{name}.py"
    path.write_text(_PLOT_TEMPLATE.format(name=name, series=list(series)))
    return path


def _grid(grid):
    return p_grid() if grid is None else np.asarray(grid, dtype=float)


def cmd_fig1(out_dir, grid=None) -> dict:
    """E(p) of HS, GHZ and W under bit flip."""
    out_dir = Path(out_dir)
    grid = _grid(grid)
    cols = {}
    for name, make in STATES.items():
        rho0 = ket_to_dm(make())
        cols[name] = np.array([entanglement(evolve(rho0, "bf", p)) for p in grid])
    header = ["p"] + [f"E_{n}" for n in STATES]
    rows = zip(grid, *(cols[n] for n in STATES))
    files = [write_csv(out_dir / "fig1.csv", header, rows)]
    files.append(write_plot_script(out_dir, "fig1", [("fig1.csv", "p", header[1:])]))
    return {"grid": grid, "E": cols, "files": files}


def cmd_fig2(out_dir, grid=None) -> dict:
    """E against S_L for each named state and flip channel."""
    out_dir = Path(out_dir)
    grid = _grid(grid)
    files, series, data = [], [], {}
    for name, make in STATES.items():
        rho0 = ket_to_dm(make())
        for kind in FLIP_KINDS:
            c = curves(trajectory(rho0, kind, grid))
            data[(name, kind.value)] = c
            fname = f"fig2_{name}_{kind.value}.csv"
            rows = zip(c["p"], c["linear_entropy"], c["entanglement"])
            files.append(write_csv(out_dir / fname, ["p", "S_L", "E"], rows))
            series.append((fname, "S_L", ["E"]))
    report = {}
    for name, make in STATES.items():
        rho0 = ket_to_dm(make())
        for label, kinds in [("bf-pf-bpf", FLIP_KINDS), ("bf-bpf", ("bf", "bpf")), ("bf-pf", ("bf", "pf"))]:
            report[f"{name}:{label}"] = {
                "curve_spreads": coincidence_check(rho0, kinds, grid),
                "E_vs_S_L_spread": mixedness_curve_spread(rho0, kinds, grid),
            }
    files.append(write_json(out_dir / "fig2_coincidence.json", report))
    files.append(write_plot_script(out_dir, "fig2", series))
    return {"curves": data, "coincidence": report, "files": files}


def cmd_fig3(out_dir, metric=Metric.QJSD, grid=None) -> dict:
    """Distances from the evolving HS state to its reference states."""
    out_dir = Path(out_dir)
    metric = parse_metric(metric)
    grid = _grid(grid)
    rho0 = ket_to_dm(hs_state())
    files, series, data = [], [], {}
    header = ["p", "E", "S_L", "d_init", "d_final", "d_mm"]
    for kind in FLIP_KINDS:
        c = curves(trajectory(rho0, kind, grid, metric))
        data[kind.value] = c
        fname = f"fig3_{kind.value}.csv"
        rows = zip(c["p"], c["entanglement"], c["linear_entropy"],
                   c["dist_to_initial"], c["dist_to_final"], c["dist_to_mm"])
        files.append(write_csv(out_dir / fname, header, rows))
        series.append((fname, "p", ["d_init", "d_final", "d_mm"]))
    spread = coincidence_check(rho0, FLIP_KINDS, grid, metric)
    files.append(write_json(out_dir / "fig3_coincidence.json", {"metric": metric.value, "spreads": spread}))
    files.append(write_plot_script(out_dir, "fig3", series))
    return {"curves": data, "spreads": spread, "files": files}


def cmd_table(out_dir) -> dict:
    """Final-state distance table for HS; also printed to stdout."""
    out_dir = Path(out_dir)
    summary = final_state_geometry(ket_to_dm(hs_state()))
    text = summary.render()
    print(text)
    files = [
        write_json(out_dir / "table.json", {**summary.to_dict(), "spreads": summary.spreads()}),
    ]
    (out_dir / "table.txt").write_text(text + "\n")
    files.append(out_dir / "table.txt")
    return {"summary": summary, "text": text, "files": files}


def _threads() -> int:
    raw = os.environ.get("QTRAJ_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"QTRAJ_THREADS={raw!r} is not an integer") from None
    return max(1, n)


def cmd_fig4(out_dir, count: int = 100, seed: int = 0, variant: str = "local", grid=None) -> dict:
    """LU orbit of HS under depolarizing noise: E, S_L and sudden death per sample."""
    out_dir = Path(out_dir)
    kind = {"local": ChannelKind.DEPOLARIZING_LOCAL, "global": ChannelKind.DEPOLARIZING_GLOBAL}.get(variant)
    if kind is None:
        raise ConfigError(f"--dep must be local or global, not {variant!r}")
    grid = _grid(grid)
    states = lu_orbit(hs_state(), count, seed)

    def one(psi):
        rho0 = ket_to_dm(psi)
        evolved = [evolve(rho0, kind, p) for p in grid]
        e = np.array([entanglement(r) for r in evolved])
        s = np.array([linear_entropy(r) for r in evolved])
        return e, s, sudden_death(rho0, kind, grid=grid)

    with ThreadPoolExecutor(_threads()) as pool:
        results = list(pool.map(one, states))
    e_all = np.stack([r[0] for r in results])
    s_all = np.stack([r[1] for r in results])
    deaths = [r[2] for r in results]
    rows = (
        (i, p, e_all[i, j], s_all[i, j]) for i in range(count) for j, p in enumerate(grid)
    )
    files = [write_csv(out_dir / "fig4_samples.csv", ["sample", "p", "E", "S_L"], rows)]
    files.append(write_csv(
        out_dir / "fig4_sudden_death.csv", ["sample", "p_star", "S_L_at_death"],
        ((i, d.p_star, d.s_l_at_death) for i, d in enumerate(deaths)),
    ))
    p_star = np.array([d.p_star for d in deaths])
    s_death = np.array([d.s_l_at_death for d in deaths])
    stats = {
        "variant": variant,
        "count": count,
        "E_spread_max": float(np.max(np.ptp(e_all, axis=0))),
        "S_L_spread_max": float(np.max(np.ptp(s_all, axis=0))),
        "p_star_mean": float(p_star.mean()),
        "p_star_spread": float(np.ptp(p_star)),
        "S_L_at_death_mean": float(s_death.mean()),
        "S_L_at_death_spread": float(np.ptp(s_death)),
    }
    files.append(write_json(out_dir / "fig4_summary.json", stats))
    # mean curves are enough to see the coincidence
    files.append(write_csv(
        out_dir / "fig4_mean.csv", ["p", "E", "S_L"],
        zip(grid, e_all.mean(axis=0), s_all.mean(axis=0)),
    ))
    files.append(write_plot_script(out_dir, "fig4", [("fig4_mean.csv", "p", ["E", "S_L"])]))
    return {"E": e_all, "S_L": s_all, "deaths": deaths, "stats": stats, "files": files}


def cmd_search(out_dir, cfg: AnnealConfig | None = None) -> dict:
    """Anneal for a robust state and compare it with the named states."""
    out_dir = Path(out_dir)
    cfg = AnnealConfig() if cfg is None else cfg
    psi, score = anneal_robust_state(cfg)
    refs = {name: make() for name, make in STATES.items()}
    if cfg.n_qubits != 4:
        refs = {"GHZ": ghz_state(cfg.n_qubits), "W": w_state(cfg.n_qubits)}
    dom = dominance_report(psi, refs, cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    state_path = out_dir / "found_state.json"
    state_path.write_text(to_json(psi) + "\n")
    files = [
        state_path,
        write_json(out_dir / "score.json", {**score.to_dict(), "config": cfg.to_dict()}),
        write_json(out_dir / "dominance.json", dom),
    ]
    return {"psi": psi, "score": score, "dominance": dom, "files": files}


COMMANDS = ("fig1", "fig2", "fig3", "fig4", "table", "search")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtraj", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--metric", default=None, choices=[m.value for m in Metric])
    ap.add_argument("--p-grid", dest="p_grid", default=None, help="start:stop:step")
    ap.add_argument("--count", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--dep", default=None, choices=["local", "global"])
    ap.add_argument("--config", type=Path, default=None,
                    help="JSON search config or a manifest from an earlier run")
    return ap


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge ``--config`` file contents with explicit flags (flags win)."""
    base: dict = {}
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        base = dict(loaded.get("config", loaded)) if isinstance(loaded, dict) else {}
    flags = {"metric": args.metric, "p_grid": args.p_grid, "count": args.count,
             "seed": args.seed, "dep": args.dep}
    for k, v in flags.items():
        if v is not None:
            base[k] = v
    return base


def run(command: str, out_dir: Path, conf: dict) -> dict:
    conf = dict(conf)
    grid_spec = conf.pop("p_grid", None)
    if command == "search":
        search_conf = {k: v for k, v in conf.items() if k not in ("metric", "count", "dep")}
        if grid_spec is not None:
            search_conf["p_grid_objective"] = list(parse_grid(grid_spec)) if isinstance(grid_spec, str) else grid_spec
        try:
            cfg = AnnealConfig.from_dict(search_conf)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        result = cmd_search(out_dir, cfg)
        result["config"] = cfg.to_dict()
        return result
    resolved = {"p_grid": grid_spec or "0:1:0.01"}
    grid = parse_grid(resolved["p_grid"])
    if command == "fig1":
        result = cmd_fig1(out_dir, grid)
    elif command == "fig2":
        result = cmd_fig2(out_dir, grid)
    elif command == "fig3":
        resolved["metric"] = conf.get("metric", "qjsd")
        result = cmd_fig3(out_dir, resolved["metric"], grid)
    elif command == "fig4":
        resolved.update(count=int(conf.get("count", 100)), seed=int(conf.get("seed", 0)),
                        dep=conf.get("dep", "local"))
        result = cmd_fig4(out_dir, resolved["count"], resolved["seed"], resolved["dep"], grid)
    else:
        resolved = {}
        result = cmd_table(out_dir)
    result["config"] = resolved
    return result


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        conf = resolve_config(args)
        result = run(args.command, args.out, conf)
    except (ConfigError, BadParameter) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (QTrajError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    manifest = {
        "command": args.command,
        "config": result["config"],
        "seed": result["config"].get("seed"),
        "outputs": sorted(str(p) for p in result["files"]),
        "duration_s": time.perf_counter() - t0,
        "version": __version__,
    }
    write_json(args.out / f"manifest_{args.command}.json", manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
