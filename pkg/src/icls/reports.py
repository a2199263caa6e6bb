"""Serialization of experiment reports.

CSV rows are emitted in a fixed order with plain ``str`` float formatting,
so a rerun with the same seed produces byte-identical files. All writes go
through a temp file followed by an atomic rename; a crashed run never leaves
a half-written report behind.
"""
from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

from .experiments import CvReport, LearningCurveReport, standard_error


def atomic_write_text(path, text: str) -> None:
    p = Path(path)
    tmp = p.with_name(p.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, p)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def learning_curve_summary_csv(report: LearningCurveReport) -> str:
    rows = []
    for name in report.classifiers:
        means = report.mean_error(name)
        ses = report.standard_errors(name) if report.n_repeats > 1 else None
        for k, u in enumerate(report.u_values):
            rows.append(
                [
                    report.dataset_name,
                    name,
                    u,
                    report.labeled_size,
                    report.n_repeats,
                    float(means[k]),
                    float(ses[k]) if ses is not None else "",
                    float(report.test_sizes[:, k].mean()),
                ]
            )
    return _csv_text(
        [
            "dataset",
            "classifier",
            "U",
            "L",
            "n_repeats",
            "mean_error",
            "standard_error",
            "mean_test_size",
        ],
        rows,
    )


def learning_curve_detail_csv(report: LearningCurveReport) -> str:
    rows = []
    for c, name in enumerate(report.classifiers):
        for k, u in enumerate(report.u_values):
            for r in range(report.n_repeats):
                rows.append(
                    [
                        report.dataset_name,
                        name,
                        u,
                        report.labeled_size,
                        r,
                        float(report.errors[r, k, c]),
                        int(report.test_sizes[r, k]),
                    ]
                )
    return _csv_text(
        ["dataset", "classifier", "U", "L", "repeat", "error", "test_size"], rows
    )


def learning_curve_json(report: LearningCurveReport) -> str:
    payload = {
        "dataset": report.dataset_name,
        "L": report.labeled_size,
        "seed": report.seed,
        "n_repeats": report.n_repeats,
        "u_values": list(report.u_values),
        "truncated_u": list(report.truncated_u),
        "classifiers": {
            name: {
                "mean_error": [float(x) for x in report.mean_error(name)],
                "standard_error": [
                    float(x) for x in report.standard_errors(name)
                ]
                if report.n_repeats > 1
                else None,
            }
            for name in report.classifiers
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def cv_detail_csv(report: CvReport) -> str:
    rows = []
    for c, name in enumerate(report.classifiers):
        for r in range(report.repeats):
            rows.append(
                [
                    report.dataset_name,
                    name,
                    r,
                    report.labeled_size,
                    float(report.errors[r, c]),
                ]
            )
    return _csv_text(["dataset", "classifier", "repeat", "L", "error"], rows)


def cv_json(report: CvReport) -> str:
    payload = {
        "dataset": report.dataset_name,
        "folds": report.folds,
        "repeats": report.repeats,
        "L": report.labeled_size,
        "seed": report.seed,
        "mean_error": {
            name: report.mean_error(name) for name in report.classifiers
        },
        "standard_error": {
            name: standard_error(report.repeat_errors(name))
            for name in report.classifiers
        }
        if report.repeats > 1
        else None,
        "degradation_counts": report.degradation_counts,
        "significance": {
            key: {
                "statistic": res.statistic,
                "p_value": res.p_value,
                "significant": res.significant,
            }
            for key, res in report.significance.items()
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True)
