"""Command-line entry point.

Subcommands: ``fit``, ``predict``, ``learning-curve``, ``cv``, ``theory1d``.
Validation and data errors print to stderr and exit with status 2; a
theory1d run that finds violations exits with status 1. All report and model
files are written atomically.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import data as data_io
from . import reports
from .errors import DataError, InputError, ToolkitError
from .experiments import run_cv, run_learning_curve
from .selflearn import fit_self_learning
from .solver import fit_icls
from .supervised import (
    LinearModel,
    classify,
    decision_values,
    empirical_risk,
    fit_supervised,
)
from .theory1d import two_gaussian_population, verify_non_degradation

DEFAULT_U_SCHEDULE_TEXT = "2,4,8,...,1024"


def parse_u_schedule(text: str) -> tuple[int, ...]:
    """Parse '2,4,8,...,1024' style schedules; '...' continues the geometric
    progression of the two preceding entries up to the closing value."""
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    values: list[int] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "...":
            if len(values) < 2 or i + 1 >= len(tokens):
                raise InputError("'...' needs two entries before and one after")
            stop = int(tokens[i + 1])
            if values[-2] <= 0 or values[-1] % values[-2] != 0:
                raise InputError("'...' requires an integer ratio")
            ratio = values[-1] // values[-2]
            if ratio < 2:
                raise InputError("'...' requires a growing schedule")
            nxt = values[-1] * ratio
            while nxt < stop:
                values.append(nxt)
                nxt *= ratio
            values.append(stop)
            i += 2
        else:
            values.append(int(tok))
            i += 1
    if not values:
        raise InputError("empty u-schedule")
    return tuple(values)


def parse_synthetic(text: str) -> tuple[data_io.GaussianSpec, int, int]:
    """Parse 'dim=2,sep=2,n=2000[,scale=1][,seed=0]'."""
    fields = {"dim": 2, "sep": 2.0, "n": 2000, "scale": 1.0, "seed": 0}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise InputError(f"bad synthetic spec field {part!r}")
        key, _, raw = part.partition("=")
        key = key.strip()
        if key not in fields:
            raise InputError(f"unknown synthetic spec key {key!r}")
        fields[key] = float(raw) if key in ("sep", "scale") else int(raw)
    spec = data_io.GaussianSpec(
        dim=int(fields["dim"]),
        separation=float(fields["sep"]),
        scale=float(fields["scale"]),
    )
    return spec, int(fields["n"]), int(fields["seed"])


def _load_dataset(args) -> data_io.Dataset:
    if getattr(args, "synthetic", None):
        spec, n, seed = parse_synthetic(args.synthetic)
        dataset = data_io.gen_synthetic(spec, n, seed)
    elif getattr(args, "data", None):
        dataset = data_io.load_csv(args.data, args.label_col)
    else:
        raise InputError("either --data or --synthetic is required")
    if getattr(args, "registry_name", None):
        data_io.validate_against_registry(dataset, args.registry_name)
    return dataset


def _strip_intercept(design: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(design[:, 1:])


def cmd_fit(args) -> int:
    dataset = data_io.load_csv(args.data, args.label_col)
    design = dataset.design
    if args.no_intercept:
        design = _strip_intercept(design)

    if args.unlabeled:
        unlabeled = data_io.load_design_csv(args.unlabeled, dataset.schema)
        if args.no_intercept:
            unlabeled = _strip_intercept(unlabeled)
    else:
        unlabeled = np.empty((0, design.shape[1]))

    if args.method == "supervised":
        model = fit_supervised(design, dataset.labels)
        objective_value = empirical_risk(model, design, dataset.labels)
    elif args.method == "selflearn":
        model, _, _ = fit_self_learning(design, dataset.labels, unlabeled)
        objective_value = empirical_risk(model, design, dataset.labels)
    elif args.method == "icls":
        model, _, report = fit_icls(
            design, dataset.labels, unlabeled, tol=args.tol, max_iter=args.max_iter
        )
        objective_value = report.final_objective
    else:
        raise InputError(f"unknown method {args.method!r}")

    model = LinearModel(
        beta=model.beta,
        intercept_first=not args.no_intercept,
        class0=dataset.class_names[0],
        class1=dataset.class_names[1],
    )
    reports.atomic_write_text(args.out, model.to_json() + "\n")
    print(f"labeled objective: {objective_value}")
    return 0


def cmd_predict(args) -> int:
    model = LinearModel.from_json(Path(args.model).read_text(encoding="utf-8"))
    design = data_io.infer_feature_design(args.data, args.label_col)
    if not model.intercept_first:
        design = _strip_intercept(design)
    if design.shape[1] != model.n_coefficients:
        raise DataError(
            f"model expects {model.n_coefficients} design columns, file encodes "
            f"{design.shape[1]}"
        )
    scores = decision_values(model, design)
    labels = classify(model, design)
    lines = [["decision_value", "predicted_label", "predicted_class"]]
    for s, lab in zip(scores, labels):
        name = model.class1 if lab == 1.0 else model.class0
        lines.append([float(s), int(lab), name])
    reports.atomic_write_text(args.out, reports._csv_text(lines[0], lines[1:]))
    print(f"wrote {design.shape[0]} predictions to {args.out}")
    return 0


def cmd_learning_curve(args) -> int:
    dataset = _load_dataset(args)
    report = run_learning_curve(
        dataset,
        u_schedule=parse_u_schedule(args.u_schedule),
        repeats=args.repeats,
        seed=args.seed,
        standardize=args.standardize,
        workers=args.workers,
        labeled_size=args.labeled_size,
        labeled_rule=args.labeled_rule,
    )
    out = Path(args.out)
    reports.atomic_write_text(out, reports.learning_curve_summary_csv(report))
    detail = out.with_name(out.stem + ".detail.csv")
    reports.atomic_write_text(detail, reports.learning_curve_detail_csv(report))
    if args.json:
        reports.atomic_write_text(args.json, reports.learning_curve_json(report))
    final_u = report.u_values[-1]
    summary = ", ".join(
        f"{name}={report.mean_error(name)[-1]:.4f}" for name in report.classifiers
    )
    print(
        f"{report.dataset_name}: L={report.labeled_size}, U up to {final_u}, "
        f"{report.n_repeats} repeats; mean error at U={final_u}: {summary}"
    )
    if report.truncated_u:
        print(f"dropped U values too large for the dataset: {list(report.truncated_u)}")
    return 0


def cmd_cv(args) -> int:
    dataset = _load_dataset(args)
    report = run_cv(
        dataset,
        folds=args.folds,
        repeats=args.repeats,
        seed=args.seed,
        standardize=args.standardize,
        workers=args.workers,
        labeled_size=args.labeled_size,
        labeled_rule=args.labeled_rule,
    )
    reports.atomic_write_text(args.out, reports.cv_detail_csv(report))
    if args.json:
        reports.atomic_write_text(args.json, reports.cv_json(report))
    parts = [f"{name}={report.mean_error(name):.4f}" for name in report.classifiers]
    degr = report.degradation_counts
    print(
        f"{report.dataset_name}: {report.folds}-fold x {report.repeats} repeats, "
        f"L={report.labeled_size}; " + ", ".join(parts) +
        f"; degradations self_learning={degr['self_learning']} icls={degr['icls']}"
    )
    return 0


def cmd_theory1d(args) -> int:
    population = two_gaussian_population(size=args.population_size, seed=args.pop_seed)
    report = verify_non_degradation(
        population,
        labeled_draw_size=args.labeled_size,
        trials=args.trials,
        seed=args.seed,
    )
    if args.out:
        reports.atomic_write_text(args.out, report.to_json() + "\n")
    print(
        f"trials={report.trials} violations={report.violations} "
        f"mean_improvement={report.mean_improvement:.3e} "
        f"max_improvement={report.max_improvement:.3e}"
    )
    return 0 if report.violations == 0 else 1


def _add_dataset_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="labeled CSV file")
    p.add_argument("--synthetic", help="e.g. 'dim=2,sep=2,n=2000[,scale=1][,seed=0]'")
    p.add_argument("--label-col", default="label", help="label column name")
    p.add_argument("--registry-name", help="validate shape against this registry entry")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--standardize", action="store_true",
                   help="z-score features on labeled+unlabeled rows")
    p.add_argument("--workers", type=int, default=1, help="parallel repeats")
    p.add_argument("--labeled-size", type=int, default=None,
                   help="override the labeled-set size rule")
    p.add_argument("--labeled-rule", choices=("full-rank", "literal"),
                   default="full-rank",
                   help="labeled-size rule: features+1+5 or features+5 (both floored at 20)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icls",
        description="Semi-supervised least squares classification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a classifier and write model JSON")
    p_fit.add_argument("--data", required=True, help="labeled CSV file")
    p_fit.add_argument("--unlabeled", help="unlabeled CSV file (same columns)")
    p_fit.add_argument("--label-col", default="label")
    p_fit.add_argument("--method", choices=("supervised", "icls", "selflearn"),
                       default="icls")
    p_fit.add_argument("--out", required=True, help="model JSON path")
    p_fit.add_argument("--no-intercept", action="store_true",
                       help="fit without the intercept column")
    p_fit.add_argument("--tol", type=float, default=1e-8)
    p_fit.add_argument("--max-iter", type=int, default=5000)
    p_fit.set_defaults(func=cmd_fit)

    p_pred = sub.add_parser("predict", help="apply a model JSON to a feature CSV")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--data", required=True)
    p_pred.add_argument("--label-col", default="label",
                        help="column to ignore if present")
    p_pred.add_argument("--out", required=True, help="predictions CSV path")
    p_pred.set_defaults(func=cmd_predict)

    p_curve = sub.add_parser("learning-curve",
                             help="error curves over growing unlabeled pools")
    _add_dataset_options(p_curve)
    p_curve.add_argument("--u-schedule", default=DEFAULT_U_SCHEDULE_TEXT)
    p_curve.add_argument("--repeats", type=int, default=100)
    p_curve.add_argument("--out", required=True, help="summary CSV path")
    p_curve.add_argument("--json", help="JSON summary path")
    p_curve.set_defaults(func=cmd_learning_curve)

    p_cv = sub.add_parser("cv", help="repeated k-fold comparison")
    _add_dataset_options(p_cv)
    p_cv.add_argument("--folds", type=int, default=10)
    p_cv.add_argument("--repeats", type=int, default=20)
    p_cv.add_argument("--out", required=True, help="per-repeat CSV path")
    p_cv.add_argument("--json", help="JSON summary path")
    p_cv.set_defaults(func=cmd_cv)

    p_th = sub.add_parser("theory1d",
                          help="risk non-degradation check for the 1-D model")
    p_th.add_argument("--population-size", type=int, default=100_000)
    p_th.add_argument("--pop-seed", type=int, default=0)
    p_th.add_argument("--labeled-size", type=int, default=8)
    p_th.add_argument("--trials", type=int, default=1000)
    p_th.add_argument("--seed", type=int, default=1)
    p_th.add_argument("--out", help="JSON report path")
    p_th.set_defaults(func=cmd_theory1d)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ToolkitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
