# Copyright (c) 2026, htm-sequence-predictor contributors
#
# See AUTHORS.txt
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
#
# SPDX-License-Identifier: MPL-2.0
#
# This file is part of the htm-sequence-predictor project.

from pathlib import Path
from typing import Any, Optional, cast

import polars as pl
import yaml

from src.models import ExperimentReport, PredictionRecord
from src.temporal_memory import SegmentStore
from src.utils import ComparisonFormat

PUBLISHED_PREFIX = "published"
_MISSING = ""


class ReportWriter:
    """Writes the artifacts of one experiment run; explicit paths override the default file names."""

    def __init__(self, output_dir: Path):
        self.output_dir = output_dir

    def _resolve(self, path: Optional[Path], default_name: str) -> Path:
        target = path if path is not None else self.output_dir / default_name
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def write_report(self, report: ExperimentReport, path: Optional[Path] = None) -> Path:
        target = self._resolve(path, "report.json")
        report.to_json(target)
        return target

    def write_curve(self, mape_curve: list[float], path: Optional[Path] = None) -> Path:
        target = self._resolve(path, "curve.csv")
        pl.DataFrame(
            {"iteration": list(range(len(mape_curve))), "mape": mape_curve},
            schema={"iteration": pl.Int64, "mape": pl.Float64},
        ).write_csv(target)
        return target

    def write_predictions(self, predictions: list[PredictionRecord], path: Optional[Path] = None) -> Path:
        target = self._resolve(path, "predictions.csv")
        pl.DataFrame(
            {
                "row_index": [p.row_index for p in predictions],
                "predicted": [p.predicted for p in predictions],
                "score": [p.score for p in predictions],
                "accepted": [p.accepted for p in predictions],
            },
            schema={"row_index": pl.Int64, "predicted": pl.Utf8, "score": pl.Int64, "accepted": pl.Boolean},
        ).write_csv(target)
        return target

    def write_checkpoint(self, segments: SegmentStore, path: Optional[Path] = None) -> Path:
        target = self._resolve(path, "segments.json")
        segments.to_json(target)
        return target


def load_published_results(path: Optional[Path] = None) -> dict[str, Any]:
    source = path or Path(__file__).resolve().parent.parent / "resources" / "published_results.yml"
    with source.open(encoding="utf-8") as f:
        return cast(dict[str, Any], yaml.safe_load(f) or {})


def comparison_frame(reports: list[ExperimentReport], published: dict[str, Any]) -> pl.DataFrame:
    """One row per report, measured RMSEs first, then the published reference columns for the dataset."""
    published_rmse: dict[str, dict[str, float]] = published.get("rmse", {})
    published_predictions: dict[str, dict[str, str]] = published.get("predictions", {})
    rmse_methods = sorted({method for values in published_rmse.values() for method in values})
    prediction_methods = sorted({method for values in published_predictions.values() for method in values})

    rows = []
    for report in sorted(reports, key=lambda r: (r.dataset, r.seed, r.config_hash)):
        row: dict[str, Any] = {
            "dataset": report.dataset,
            "seed": str(report.seed),
            "rmse_labels": _format_float(report.rmse_labels),
            "rmse_codes": _format_float(report.rmse_codes),
            "baseline": report.baseline_kind or _MISSING,
            "baseline_rmse": _format_float(report.baseline.rmse if report.baseline else None),
            "final_prediction": report.predictions[-1].predicted if report.predictions else _MISSING,
        }
        for method in rmse_methods:
            value = published_rmse.get(report.dataset, {}).get(method)
            row[f"{PUBLISHED_PREFIX} {method} rmse"] = _format_float(value)
        for method in prediction_methods:
            row[f"{PUBLISHED_PREFIX} {method} prediction"] = published_predictions.get(report.dataset, {}).get(
                method, _MISSING
            )
        rows.append(row)
    return pl.DataFrame(rows, schema={key: pl.Utf8 for key in rows[0]} if rows else None)


def _format_float(value: Optional[float]) -> str:
    return _MISSING if value is None else f"{value:.4f}"


def render_markdown(frame: pl.DataFrame) -> str:
    header = "| " + " | ".join(frame.columns) + " |"
    separator = "|" + "|".join(" --- " for _ in frame.columns) + "|"
    lines = [header, separator]
    for row in frame.iter_rows():
        lines.append("| " + " | ".join(str(value) for value in row) + " |")
    return "\n".join(lines) + "\n"


def write_comparison(frame: pl.DataFrame, output_path: Path, comparison_format: ComparisonFormat) -> None:
    output_path.parent.mkdir(parents=True, exist_ok=True)
    if comparison_format == "csv":
        frame.write_csv(output_path)
    else:
        output_path.write_text(render_markdown(frame), encoding="utf-8")
