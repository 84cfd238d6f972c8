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

import json
from pathlib import Path

import polars as pl
import pytest

from src.experiment import ExperimentRunner, emit_comparison
from src.models import ExperimentReport
from src.report_writer import ReportWriter, load_published_results, render_markdown, write_comparison
from tests.utils import small_config


@pytest.fixture(scope="module")
def times_report() -> ExperimentReport:
    return ExperimentRunner(small_config(data_name="times_trainv1", times_limit=4)).run().report


def test_published_results_cover_the_benchmark_datasets() -> None:
    published = load_published_results()
    assert published["rmse"]["pressure_data"]["htm"] == 0
    assert published["predictions"]["word3b"]["htm"] == "Foot"


def test_writer_default_paths(times_report: ExperimentReport, tmp_path: Path) -> None:
    writer = ReportWriter(tmp_path / "times")
    report_path = writer.write_report(times_report)
    curve_path = writer.write_curve(times_report.mape_curve)
    predictions_path = writer.write_predictions(times_report.predictions)
    assert report_path.name == "report.json"
    assert ExperimentReport.from_json(report_path) == times_report

    curve = pl.read_csv(curve_path)
    assert curve.columns == ["iteration", "mape"]
    assert curve.height == len(times_report.mape_curve)

    predictions = pl.read_csv(predictions_path)
    assert predictions.columns == ["row_index", "predicted", "score", "accepted"]
    assert predictions["predicted"].to_list()[-1] == "2 3 6"


def test_explicit_paths_win(times_report: ExperimentReport, tmp_path: Path) -> None:
    target = tmp_path / "elsewhere" / "mine.json"
    assert ReportWriter(tmp_path / "unused").write_report(times_report, target) == target
    assert json.loads(target.read_text())["dataset"] == "times_trainv1"


def test_comparison_table(times_report: ExperimentReport, tmp_path: Path) -> None:
    frame = emit_comparison([times_report])
    assert frame.height == 1
    assert frame["final_prediction"].to_list() == ["2 3 6"]
    assert frame["published htm prediction"].to_list() == ["2 3 6"]
    assert frame["published htm rmse"].to_list() == [""]

    markdown = render_markdown(frame)
    assert markdown.splitlines()[0].startswith("| dataset | seed |")
    path = tmp_path / "table.csv"
    write_comparison(frame, path, "csv")
    assert pl.read_csv(path, infer_schema_length=0).columns == frame.columns
