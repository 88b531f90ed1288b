"""Command-line surface: dataset ingestion, experiment drivers, exports.

Subcommands: check, surfaces, sweep, smto, figure. Every output file is
accompanied by a JSON manifest echoing the effective configuration, the
package version and the seed, so runs can be reproduced byte-for-byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from ._svg import write_scatter_svg
from .conditions import ConditionReport, check_c1, check_c2
from .data import TaskDataset, load_dataset, read_numeric_csv
from .errors import LinMTLError
from .explorer import run_randomized_sweep, run_sweep
from .predictors import compute_optimal_predictors, irreducible_losses
from .smto import Variant, run_mgda
from .surfaces import SurfaceKind, classify_point, sample_feasible_region

FLOAT_FMT = "%.17g"


@dataclass
class ExperimentConfig:
    """Effective settings of one CLI invocation."""

    dataset: str
    feature_columns: list[int]
    task_columns: list[int]
    standardize: bool = True
    add_bias: bool = False
    q: int = 1
    seed: int = 0
    count: int = 100_000
    tolerance: float = 1e-8

    def __post_init__(self):
        if set(self.feature_columns) & set(self.task_columns):
            raise ValueError("feature and task columns must be disjoint")
        if self.count < 1:
            raise ValueError("count must be >= 1")

    def load(self) -> TaskDataset:
        return load_dataset(
            self.dataset,
            feature_columns=self.feature_columns,
            task_columns=self.task_columns,
            standardize=self.standardize,
            add_bias=self.add_bias,
        )


def _fmt(x: float) -> str:
    return FLOAT_FMT % x


def version_string() -> str:
    base = f"linmtl-{__version__}"
    try:
        describe = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5,
        )
        if describe.returncode == 0:
            return f"{base}-{describe.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return base


def write_manifest(output: Path, config: ExperimentConfig, command: str, extra: dict | None = None):
    manifest = {
        "command": command,
        "version": version_string(),
        "seed": config.seed,
        "config": {
            "dataset": config.dataset,
            "feature_columns": config.feature_columns,
            "task_columns": config.task_columns,
            "standardize": config.standardize,
            "add_bias": config.add_bias,
            "q": config.q,
            "count": config.count,
            "tolerance": config.tolerance,
        },
    }
    if extra:
        manifest.update(extra)
    path = output.parent / (output.stem + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) if isinstance(x, float) else x for x in row])


def _parse_int_list(text: str) -> list[int]:
    """Accept '1,2,3' and '0..9' range syntax."""
    if ".." in text:
        lo, hi = text.split("..", maxsplit=1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok]


def _project_2d(points: np.ndarray, projection: str) -> np.ndarray:
    """2-D coordinates for plotting; 'simplex' projects onto sum v = const."""
    if projection == "xy" or points.shape[1] == 2:
        return points[:, :2]
    u1 = np.array([1.0, -1.0, 0.0]) / np.sqrt(2.0)
    u2 = np.array([1.0, 1.0, -2.0]) / np.sqrt(6.0)
    if points.shape[1] != 3:
        # Fall back to the first two coordinates beyond k=3.
        return points[:, :2]
    return np.column_stack([points @ u1, points @ u2])


def _format_report(name: str, report: ConditionReport) -> str:
    if report.holds:
        signs = "".join("+" if s > 0 else "-" for s in report.certificate.signs)
        return f"{name}: holds (certificate {signs})"
    cycle = "-".join(str(i + 1) for i in report.witness)
    return f"{name}: fails (conflict cycle {cycle})"


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(config: ExperimentConfig, args) -> int:
    preds = compute_optimal_predictors(config.load())
    r1 = check_c1(preds)
    r2 = check_c2(preds)
    print(_format_report("C1", r1))
    print(_format_report("C2", r2))
    return 0 if (r1.holds and r2.holds) else 1


def cmd_surfaces(config: ExperimentConfig, args) -> int:
    data = config.load()
    preds = compute_optimal_predictors(data)
    k = preds.k
    rank = 1 if args.rank == "1" else k - 1
    kind = SurfaceKind.E if rank == 1 else SurfaceKind.I
    points = sample_feasible_region(preds, q=rank, count=config.count, seed=config.seed)
    out = Path(args.out)
    header = [f"v{i + 1}" for i in range(k)] + ["n_surfaces", "surfaces"]
    rows = []
    cloud = np.vstack([pt.v for pt in points])
    for pt in points:
        on = sorted(sid.label() for sid in classify_point(preds, kind, pt.v, tol=config.tolerance))
        rows.append([float(x) for x in pt.v] + [len(on), "|".join(on)])
    write_csv(out, header, rows)
    xy = _project_2d(cloud, args.projection)
    write_scatter_svg(
        out.with_suffix(".svg"),
        [("feasible", "steelblue", 1.5, xy)],
        xlabel="projection axis 1",
        ylabel="projection axis 2",
    )
    write_manifest(out, config, "surfaces", {"rank": rank})
    print(f"wrote {out} and {out.with_suffix('.svg')}")
    return 0


def cmd_sweep(config: ExperimentConfig, args) -> int:
    data = config.load()
    preds = compute_optimal_predictors(data)
    offsets = irreducible_losses(data, preds)
    runner = run_randomized_sweep if args.randomized else run_sweep
    result = runner(preds, offsets, config.q, config.count, config.seed)
    k = preds.k
    out = Path(args.out)
    header = (
        [f"lambda{i + 1}" for i in range(k)]
        + [f"mse{i + 1}" for i in range(k)]
        + [f"objective{i + 1}" for i in range(k)]
    )
    rows = [
        [float(x) for x in w.lam] + [float(x) for x in loss] + [float(x) for x in obj]
        for w, loss, obj in zip(result.weights, result.losses, result.objectives)
    ]
    write_csv(out, header, rows)
    write_manifest(
        out, config, "sweep",
        {"randomized": bool(args.randomized), "skipped": result.skipped},
    )
    print(f"wrote {out} ({len(rows)} rows, {result.skipped} skipped)")
    return 0


def cmd_smto(config: ExperimentConfig, args) -> int:
    data = config.load()
    seeds = _parse_int_list(args.seeds)
    variant = Variant(args.variant)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    k = data.k
    summary_rows = []
    for seed in seeds:
        trace = run_mgda(
            data, q=config.q, variant=variant,
            lr=args.lr, epochs=args.epochs, stop_tol=args.stop_tol, seed=seed,
        )
        trace_path = out.parent / f"{out.stem}_seed{seed}.csv"
        write_csv(
            trace_path,
            ["epoch"] + [f"mse{i + 1}" for i in range(k)] + ["min_norm"],
            [
                [epoch] + [float(x) for x in loss] + [float(mn)]
                for epoch, (loss, mn) in enumerate(
                    zip(trace.iterate_losses, trace.min_norms)
                )
            ],
        )
        summary_rows.append(
            [seed, variant.value, int(trace.converged), trace.epochs_run]
            + [float(x) for x in trace.iterate_losses[-1]]
        )
    write_csv(
        out,
        ["seed", "variant", "converged", "epochs"] + [f"mse{i + 1}" for i in range(k)],
        summary_rows,
    )
    write_manifest(
        out, config, "smto",
        {"variant": variant.value, "seeds": seeds, "lr": args.lr,
         "epochs": args.epochs, "stop_tol": args.stop_tol},
    )
    print(f"wrote {out} and {len(seeds)} trace files")
    return 0


def cmd_figure(config: ExperimentConfig, args) -> int:
    sweep_header, sweep_values = read_numeric_csv(args.sweep)
    mse_cols = [i for i, name in enumerate(sweep_header) if name.startswith("mse")]
    k = len(mse_cols)
    sweep_mse = sweep_values[:, mse_cols]

    groups = [("sweep", "steelblue", 1.5, None)]
    smto_points = {}
    colors = {"full": "magenta", "ub": "red"}
    for summary_path in args.smto or []:
        with open(summary_path, newline="") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                variant = row["variant"]
                mse = np.array([float(row[f"mse{i + 1}"]) for i in range(k)])
                if int(row["converged"]):
                    smto_points.setdefault(variant, []).append(mse)

    if args.filter_max_mse is not None:
        keep = sweep_mse.max(axis=1) <= args.filter_max_mse
        sweep_mse = sweep_mse[keep]
        smto_points = {
            v: [m for m in pts if m.max() <= args.filter_max_mse]
            for v, pts in smto_points.items()
        }
        if len(sweep_mse) == 0 and not any(smto_points.values()):
            raise ValueError(
                f"--filter-max-mse {args.filter_max_mse} removed every point"
            )

    out = Path(args.out)
    header = ["source"] + [f"mse{i + 1}" for i in range(k)]
    rows = [["sweep"] + [float(x) for x in row] for row in sweep_mse]
    for variant, pts in sorted(smto_points.items()):
        rows += [[f"mgda_{variant}"] + [float(x) for x in m] for m in pts]
    write_csv(out, header, rows)

    svg_groups = [("sweep", "steelblue", 1.5, _project_2d(sweep_mse, args.projection))]
    for variant, pts in sorted(smto_points.items()):
        if pts:
            svg_groups.append(
                (f"mgda_{variant}", colors.get(variant, "black"), 4.0,
                 _project_2d(np.vstack(pts), args.projection))
            )
    write_scatter_svg(out.with_suffix(".svg"), svg_groups,
                      xlabel="projection axis 1", ylabel="projection axis 2")
    write_manifest(out, config, "figure", {"filter_max_mse": args.filter_max_mse})
    print(f"wrote {out} and {out.with_suffix('.svg')}")
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linmtl",
        description="Feasible-region geometry and Pareto exploration for linear MTL",
    )
    parser.add_argument("--config", type=Path, help="JSON config file; flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--data", help="CSV dataset path")
        p.add_argument("--features", help="feature column indices, e.g. 0,1,2")
        p.add_argument("--tasks", help="task column indices, e.g. 3,4,5")
        p.add_argument("--standardize", action=argparse.BooleanOptionalAction, default=None)
        p.add_argument("--add-bias", action=argparse.BooleanOptionalAction, default=None)
        p.add_argument("--q", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--count", type=int, default=None)
        p.add_argument("--tolerance", type=float, default=None)

    p_check = sub.add_parser("check", help="decide C1/C2 and print certificates")
    add_common(p_check)

    p_surfaces = sub.add_parser("surfaces", help="sample and classify feasible points")
    add_common(p_surfaces)
    p_surfaces.add_argument("--rank", choices=["1", "km1"], default="1")
    p_surfaces.add_argument("--projection", choices=["simplex", "xy"], default="simplex")
    p_surfaces.add_argument("--out", required=True)

    p_sweep = sub.add_parser("sweep", help="scalarization weight sweep")
    add_common(p_sweep)
    p_sweep.add_argument("--randomized", action="store_true")
    p_sweep.add_argument("--out", required=True)

    p_smto = sub.add_parser("smto", help="gradient-balancing runs over a seed list")
    add_common(p_smto)
    p_smto.add_argument("--variant", choices=["full", "ub"], default="full")
    p_smto.add_argument("--seeds", default="0", help="e.g. 0..9 or 0,3,7")
    p_smto.add_argument("--lr", type=float, default=0.5)
    p_smto.add_argument("--epochs", type=int, default=100)
    p_smto.add_argument("--stop-tol", type=float, default=1e-3)
    p_smto.add_argument("--out", required=True)

    p_figure = sub.add_parser("figure", help="compose sweep + smto outputs into one plot")
    add_common(p_figure)
    p_figure.add_argument("--sweep", required=True, help="sweep CSV from the sweep command")
    p_figure.add_argument("--smto", action="append", help="smto summary CSV (repeatable)")
    p_figure.add_argument("--filter-max-mse", type=float, default=None)
    p_figure.add_argument("--projection", choices=["simplex", "xy"], default="simplex")
    p_figure.add_argument("--out", required=True)

    return parser


def resolve_config(args) -> ExperimentConfig:
    file_cfg = {}
    if args.config is not None:
        file_cfg = json.loads(Path(args.config).read_text())

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return file_cfg.get(key, default)

    dataset = pick(args.data, "dataset", None)
    features = pick(args.features, "feature_columns", None)
    tasks = pick(args.tasks, "task_columns", None)
    if args.command != "figure":
        if dataset is None or features is None or tasks is None:
            raise ValueError("--data, --features and --tasks are required (flag or config)")
    if isinstance(features, str):
        features = _parse_int_list(features)
    if isinstance(tasks, str):
        tasks = _parse_int_list(tasks)
    return ExperimentConfig(
        dataset=dataset or "",
        feature_columns=features or [],
        task_columns=tasks or [],
        standardize=pick(args.standardize, "standardize", True),
        add_bias=pick(args.add_bias, "add_bias", False),
        q=pick(args.q, "q", 1),
        seed=pick(args.seed, "seed", 0),
        count=pick(args.count, "count", 100_000),
        tolerance=pick(args.tolerance, "tolerance", 1e-8),
    )


COMMANDS = {
    "check": cmd_check,
    "surfaces": cmd_surfaces,
    "sweep": cmd_sweep,
    "smto": cmd_smto,
    "figure": cmd_figure,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        return COMMANDS[args.command](config, args)
    except (LinMTLError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
