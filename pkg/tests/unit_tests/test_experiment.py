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

import logging

import numpy as np
import pytest

from src.data_io import generate_periodic_binary
from src.exceptions import DataError
from src.experiment import ExperimentRunner, run_baseline
from src.models import Dataset
from tests.utils import small_config

logger = logging.getLogger(__name__)


def test_baselines() -> None:
    dataset = Dataset("labels", "numeric", np.ones((4, 1), dtype=np.int64), np.array([1, 1, 0, 1]))
    majority = run_baseline(dataset, "majority_class")
    assert majority.accuracy == 75
    last_value = run_baseline(dataset, "last_value")
    assert last_value.rmse == pytest.approx(np.sqrt(2 / 4))


def test_baseline_needs_labels() -> None:
    with pytest.raises(DataError):
        run_baseline(Dataset("text", "text", np.array([[70, 0]])), "majority_class")


def test_times_table_run() -> None:
    artifacts = ExperimentRunner(small_config(data_name="times_trainv1"), logger).run()
    report = artifacts.report
    assert report.rows_used == 65
    assert report.predictions[-1].predicted == "2 3 6"
    assert len(report.mape_curve) == 5
    assert len(artifacts.sparsed_data) == 65
    assert len(artifacts.sparsed_data_t) == 65
    assert artifacts.sparsed_data_t[0].width == 32 * 2
    assert report.baseline_kind == "majority_class"


def test_window_truncates_and_notes_it() -> None:
    report = ExperimentRunner(small_config(data_name="times_trainv1", seq_size=10)).run().report
    assert report.rows_used == 10
    assert report.notes[0] == "Truncated to the first 10 of 65 rows"


def test_periodic_stream_is_recognised_exactly() -> None:
    dataset = generate_periodic_binary(12, 4)
    report = ExperimentRunner(small_config(data_name="pressure_data", temporal_passes=3)).run(dataset).report
    assert report.rmse_labels == 0
    assert report.metrics_labels is not None and report.metrics_labels.accuracy == 100


def test_text_run_skips_label_metrics() -> None:
    report = ExperimentRunner(small_config(data_name="word3b")).run().report
    assert report.rmse_labels is None
    assert report.baseline is None
    assert report.predictions[-1].predicted.startswith("Foot")
    assert any("No labels" in note for note in report.notes)


def test_online_evaluation_scores_every_row_after_the_first() -> None:
    report = ExperimentRunner(small_config(data_name="times_trainv1", evaluation="online")).run().report
    assert [p.row_index for p in report.predictions] == list(range(1, 65))
    assert report.predictions[-1].predicted == "2 3 6"


def test_runs_are_reproducible() -> None:
    config = small_config(data_name="word3a", seed=11)
    first = ExperimentRunner(config).run().report
    second = ExperimentRunner(config).run().report
    assert first.report_hash() == second.report_hash()
