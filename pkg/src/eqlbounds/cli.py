"""Command-line front end: gen, train, eval, plotdata.

Exit codes: 0 on success, 2 for usage or input problems, 3 for numerical
failures (divergent training, degenerate extraction, exhausted sampling).
Every command is deterministic: identical arguments and seeds write
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .datagen import (
    PAPER_PRESETS,
    RejectionBudgetExceededError,
    generate,
    load_region_spec,
    paper_dataset,
)
from .datamodel import (
    DatasetError,
    Dataset,
    LinearConstraint,
    _display_number,
    constraint_text,
    load_constraint,
    load_dataset,
    save_constraint,
    save_dataset,
)
from .extract import DegenerateConstraintError, violation_report
from .trainer import (
    DivergenceError,
    NonFiniteGradientError,
    configs_from_mapping,
    export_history_csv,
    train_multi,
)

_OVERRIDE_FLAGS = (
    ("alpha1", float),
    ("alpha2", float),
    ("alpha3", float),
    ("gamma", float),
    ("l1", float),
    ("l2", float),
    ("direction", str),
    ("epochs", int),
    ("learning_rate", float),
    ("mask_threshold", float),
    ("seed", int),
    ("runs", int),
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqlbounds",
        description="Learn linear inequality constraints that bound a dataset.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="sample a dataset from a region")
    source = gen.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=sorted(PAPER_PRESETS), help="named benchmark region")
    source.add_argument("--spec", metavar="REGION_JSON", help="custom region spec file")
    gen.add_argument("--n", type=int, help="point count (required with --spec)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, metavar="CSV")
    gen.set_defaults(func=_cmd_gen)

    train = sub.add_parser("train", help="fit constraints to a dataset")
    train.add_argument("--data", required=True, metavar="CSV")
    train.add_argument("--config", metavar="JSON", help="config file; flags override it")
    train.add_argument("--out-dir", required=True, metavar="DIR")
    for name, cast in _OVERRIDE_FLAGS:
        flag = "--" + name.replace("_", "-")
        if name == "direction":
            train.add_argument(flag, choices=["lower", "upper"])
        else:
            train.add_argument(flag, type=cast)
    train.add_argument(
        "--no-mask", action="store_true", help="disable magnitude masking during training"
    )
    train.set_defaults(func=_cmd_train)

    evaluate = sub.add_parser("eval", help="score a constraint against a dataset")
    evaluate.add_argument("--constraint", required=True, metavar="JSON")
    evaluate.add_argument("--data", required=True, metavar="CSV")
    evaluate.add_argument("--format", choices=["json", "text"], default="json")
    evaluate.set_defaults(func=_cmd_eval)

    plot = sub.add_parser("plotdata", help="emit plot-ready CSVs for a constraint")
    plot.add_argument("--constraint", required=True, metavar="JSON")
    plot.add_argument("--data", required=True, metavar="CSV")
    plot.add_argument("--out-dir", required=True, metavar="DIR")
    plot.set_defaults(func=_cmd_plotdata)

    return parser


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.preset is not None:
        if args.n is not None:
            raise ValueError("--n is fixed by the preset; omit it")
        dataset = paper_dataset(args.preset, args.seed)
    else:
        if args.n is None:
            raise ValueError("--n is required with --spec")
        spec = load_region_spec(args.spec)
        dataset = generate(spec, args.n, args.seed)
    out = Path(args.out)
    save_dataset(dataset, out)
    print(f"wrote {dataset.n_points} points x {dataset.n_features} features to {out}")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.data)
    payload: dict = {}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ValueError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValueError(f"{args.config}: invalid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
        payload.update(loaded)
    for name, _ in _OVERRIDE_FLAGS:
        value = getattr(args, name)
        if value is not None:
            payload[name] = value
    if args.no_mask:
        if args.mask_threshold is not None:
            raise ValueError("--no-mask conflicts with --mask-threshold")
        payload["mask_threshold"] = None
    loss_cfg, train_cfg = configs_from_mapping(payload)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = train_multi(dataset, loss_cfg, train_cfg)

    summary_rows = []
    for _, report in results:
        offset = report.seed - train_cfg.seed
        save_constraint(report.constraint, out_dir / f"run-{offset:02d}-constraint", dataset.feature_names)
        export_history_csv(report, out_dir / f"run-{offset:02d}-history.csv")
        summary_rows.append(
            {
                "run": offset,
                "seed": report.seed,
                "violation_percent": report.violation_rate,
                "expression": constraint_text(report.constraint, dataset.feature_names),
                "constraint": {
                    "coeffs": [float(v) for v in report.constraint.coeffs],
                    "bound": report.constraint.bound,
                    "relation": report.constraint.relation.value,
                },
            }
        )

    lines = [f"{'run':>4} {'seed':>12} {'violation%':>11}  constraint"]
    for row in summary_rows:
        lines.append(
            f"{row['run']:>4} {row['seed']:>12} {_display_number(row['violation_percent']):>11}  {row['expression']}"
        )
    table = "\n".join(lines) + "\n"
    (out_dir / "summary.txt").write_text(table, encoding="utf-8")
    (out_dir / "summary.json").write_text(
        json.dumps(summary_rows, indent=2) + "\n", encoding="utf-8"
    )
    sys.stdout.write(table)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    constraint = load_constraint(args.constraint)
    dataset = load_dataset(args.data)
    report = violation_report(constraint, dataset)
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(
            f"{report['violations']} of {report['n']} points violate "
            f"({_display_number(report['rate_percent'])}%): {report['expression']}"
        )
    return 0


def _boundary_samples(constraint: LinearConstraint, dataset: Dataset) -> np.ndarray | None:
    """Sample the boundary surface ``coeffs . x == bound`` over the data range.

    Two features: 200 points along the line.  Three features: a 20 x 20
    mesh of the plane.  One feature: the single boundary point.  Four or
    more: None (no plot-ready parametrization).
    """
    a, b = constraint.coeffs, constraint.bound
    f = constraint.n_features
    lo = dataset.points.min(axis=0)
    hi = dataset.points.max(axis=0)
    if f == 1:
        return np.array([[b / a[0]]])
    if f == 2:
        if abs(a[1]) >= abs(a[0]):
            x0 = np.linspace(lo[0], hi[0], 200)
            x1 = (b - a[0] * x0) / a[1]
        else:
            x1 = np.linspace(lo[1], hi[1], 200)
            x0 = (b - a[1] * x1) / a[0]
        return np.column_stack([x0, x1])
    if f == 3:
        dep = int(np.argmax(np.abs(a)))
        free = [i for i in range(3) if i != dep]
        g0 = np.linspace(lo[free[0]], hi[free[0]], 20)
        g1 = np.linspace(lo[free[1]], hi[free[1]], 20)
        mesh0, mesh1 = np.meshgrid(g0, g1, indexing="ij")
        grid = np.empty((400, 3))
        grid[:, free[0]] = mesh0.ravel()
        grid[:, free[1]] = mesh1.ravel()
        grid[:, dep] = (b - grid[:, free[0]] * a[free[0]] - grid[:, free[1]] * a[free[1]]) / a[dep]
        return grid
    return None


def _cmd_plotdata(args: argparse.Namespace) -> int:
    constraint = load_constraint(args.constraint)
    dataset = load_dataset(args.data)
    if dataset.n_features != constraint.n_features:
        raise ValueError(
            f"constraint has {constraint.n_features} coefficients but the dataset "
            f"has {dataset.n_features} features"
        )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_dataset(dataset, out_dir / "points.csv")
    boundary = _boundary_samples(constraint, dataset)
    if boundary is None:
        print(
            f"no boundary sampling for {dataset.n_features} features; wrote points.csv only"
        )
        return 0
    save_dataset(Dataset(boundary, feature_names=dataset.feature_names), out_dir / "boundary.csv")
    print(f"wrote points.csv and boundary.csv ({boundary.shape[0]} boundary samples) to {out_dir}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        DivergenceError,
        NonFiniteGradientError,
        DegenerateConstraintError,
        RejectionBudgetExceededError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DatasetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
