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
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt
import polars as pl

from src.data_io import resolve_dataset
from src.exceptions import DataError, UndefinedMetricError
from src.metrics import accuracy, mape, metric_report
from src.models import Dataset, ExperimentConfig, ExperimentReport, MetricReport, PredictionRecord, TemporalSummary
from src.predictor import PredictionOutcome, RecognitionStore, RecognitionUnit, predict_all
from src.report_writer import ReportWriter, comparison_frame, load_published_results
from src.sdr import Sdr
from src.spatial_pooler import PoolingResult, ProximalPermanences, SpatialPooler
from src.temporal_memory import SegmentStore, TemporalMemory
from src.utils import format_row

BaselineKind = Literal["last_value", "majority_class"]


@dataclass
class ExperimentArtifacts:
    """In-memory outputs of a run that do not go into the report."""

    report: ExperimentReport
    sparsed_data: list[Sdr]
    # active cells per row during the inference pass, flattened over the cell space
    sparsed_data_t: list[Sdr]
    permanence: ProximalPermanences
    segments: SegmentStore


def run_baseline(dataset: Dataset, kind: BaselineKind) -> MetricReport:
    labels = dataset.targets()
    if labels is None:
        raise DataError(f"Dataset {dataset.name} has no labels for a {kind} baseline")
    if kind == "last_value":
        predicted = np.concatenate([labels[:1], labels[:-1]])
    else:
        values, counts = np.unique(labels, return_counts=True)
        predicted = np.full(labels.shape, values[np.argmax(counts)])
    return metric_report(labels, predicted)


def emit_comparison(reports: list[ExperimentReport], published_path: Optional[Path] = None) -> pl.DataFrame:
    if not reports:
        raise DataError("A comparison needs at least one report")
    return comparison_frame(reports, load_published_results(published_path))


class ExperimentRunner:
    """Encode, pool, train the temporal memory, predict and score one dataset."""

    def __init__(self, config: ExperimentConfig, logger: Optional[logging.Logger] = None):
        self.config = config
        self.logger = logger or logging.getLogger(__name__)

    def run(self, dataset: Optional[Dataset] = None) -> ExperimentArtifacts:
        self.logger.info("Experiment started")
        started = time.perf_counter()
        dataset = dataset if dataset is not None else resolve_dataset(self.config)
        notes = self._window_notes(len(dataset))
        dataset = dataset.head(self.config.seq_size)
        rows = dataset.records

        pooling = SpatialPooler(self.config, self.logger).evolve(rows, self.config.seed)
        if pooling.clamped_values:
            notes.append(f"{pooling.clamped_values} values were clamped into their encoder range")

        temporal, sparsed_data_t, memory = self._temporal(rows, pooling)

        self.logger.info("Greedy prediction started")
        evaluated, outcomes = self._predict(rows, pooling.sparsed_data)
        predictions = [
            PredictionRecord(
                row_index=r,
                predicted=format_row(outcome.predicted_row, dataset.kind),
                predicted_row=list(outcome.predicted_row),
                source_unit=outcome.source_unit,
                score=outcome.score,
                accepted=outcome.accepted,
            )
            for r, outcome in zip(evaluated, outcomes)
        ]
        predicted_rows = np.asarray([outcome.predicted_row for outcome in outcomes], dtype=np.int64)
        metrics_codes = metric_report(rows[evaluated], predicted_rows)

        metrics_labels = None
        baseline = None
        targets = dataset.targets()
        if targets is not None:
            predicted_labels = targets[[outcome.source_unit for outcome in outcomes]]
            metrics_labels = metric_report(targets[evaluated], predicted_labels)
            baseline = run_baseline(dataset, self.config.baseline)
        else:
            notes.append("No labels available: label metrics and baseline skipped")

        report = ExperimentReport(
            dataset=dataset.name,
            config=self.config.model_dump(mode="json"),
            config_hash=self.config.content_hash(),
            seed=self.config.seed,
            rows_used=len(dataset),
            notes=notes,
            mape_curve=pooling.trace.mapes,
            best_iteration=pooling.trace.best_iteration,
            clamped_values=pooling.clamped_values,
            min_val=pooling.min_val,
            predictions=predictions,
            metrics_codes=metrics_codes,
            metrics_labels=metrics_labels,
            rmse_codes=metrics_codes.rmse,
            rmse_labels=None if metrics_labels is None else metrics_labels.rmse,
            baseline_kind=None if baseline is None else self.config.baseline,
            baseline=baseline,
            temporal=temporal,
            wall_clock_seconds=round(time.perf_counter() - started, 6),
        )
        self.logger.info(f"Experiment completed: rmse_codes={report.rmse_codes:.4f} rmse_labels={report.rmse_labels}")
        return ExperimentArtifacts(
            report, pooling.sparsed_data, sparsed_data_t, pooling.trace.best_permanences, memory.segments
        )

    def _window_notes(self, available: int) -> list[str]:
        if self.config.seq_size >= available:
            if self.config.seq_size > available:
                self.logger.warning(f"seq_size {self.config.seq_size} exceeds the {available} available rows")
            return [f"seq_size {self.config.seq_size} is an upper bound: all {available} rows used, no truncation"]
        return [f"Truncated to the first {self.config.seq_size} of {available} rows"]

    def _temporal(
        self, rows: npt.NDArray[np.int64], pooling: PoolingResult
    ) -> tuple[TemporalSummary, list[Sdr], TemporalMemory]:
        self.logger.info("Temporal training started")
        memory = TemporalMemory.from_config(self.config, seed=self.config.seed, logger=self.logger)
        sequence = [frozenset(sdr.active) for sdr in pooling.sparsed_data]
        summary = memory.train(sequence, self.config.temporal_passes)

        # inference pass: the prediction made at row t is compared with row t + 1
        memory.reset()
        predicted_columns = []
        sparsed_data_t = []
        for columns in sequence:
            state = memory.step(columns, learn=False)
            predicted_columns.append(state.predicted_columns)
            sparsed_data_t.append(Sdr.from_dense(state.active.ravel(order="F")))

        prediction_mape, next_step_accuracy = self._next_step_metrics(rows, pooling.sparsed_data, predicted_columns)
        return (
            TemporalSummary(
                bursts_per_pass=summary.bursts_per_pass,
                segments=len(memory.segments),
                prediction_mape=prediction_mape,
                next_step_accuracy=next_step_accuracy,
            ),
            sparsed_data_t,
            memory,
        )

    def _next_step_metrics(
        self, rows: npt.NDArray[np.int64], sparsed_data: list[Sdr], predicted_columns: list[frozenset[int]]
    ) -> tuple[Optional[float], Optional[float]]:
        if len(rows) < 2:
            return None, None
        masks = np.stack([sdr.dense() for sdr in sparsed_data]).astype(np.int64)
        guesses = []
        for columns in predicted_columns[:-1]:
            if not columns:
                guesses.append(np.zeros(rows.shape[1], dtype=np.int64))
                continue
            query = np.zeros(masks.shape[1], dtype=np.int64)
            query[sorted(columns)] = 1
            # lowest-index exemplar best covering the predicted columns
            guesses.append(rows[int(np.argmax(masks @ query))])
        predicted = np.asarray(guesses, dtype=np.int64)
        truth = rows[1:]
        # a next-step guess counts only when the whole row matches
        next_step_accuracy = accuracy(np.all(truth == predicted, axis=1), np.ones(len(truth), dtype=bool))
        try:
            prediction_mape: Optional[float] = mape(truth, predicted)
        except UndefinedMetricError:
            prediction_mape = None
        return prediction_mape, next_step_accuracy

    def _predict(
        self, rows: npt.NDArray[np.int64], sdrs: list[Sdr]
    ) -> tuple[list[int], list[PredictionOutcome]]:
        units = [RecognitionUnit.from_row(r, row, sdrs[r]) for r, row in enumerate(rows)]
        store = RecognitionStore()
        if self.config.evaluation == "resubstitution":
            for unit in units:
                store.ingest(unit)
            outcomes = predict_all(rows, store, self.config.per_adjust, self.config.scoring, sdrs)
            return list(range(len(rows))), outcomes

        if len(rows) < 2:
            raise DataError("Online evaluation needs at least two rows")
        outcomes = []
        store.ingest(units[0])
        for r in range(1, len(rows)):
            outcomes.extend(
                predict_all(rows[r : r + 1], store, self.config.per_adjust, self.config.scoring, sdrs[r : r + 1])
            )
            store.ingest(units[r])
        return list(range(1, len(rows))), outcomes


def run_experiment(
    config: ExperimentConfig,
    output_dir: Path,
    report_path: Optional[Path] = None,
    curve_path: Optional[Path] = None,
    predictions_path: Optional[Path] = None,
    checkpoint_path: Optional[Path] = None,
    logger: Optional[logging.Logger] = None,
) -> ExperimentReport:
    artifacts = ExperimentRunner(config, logger).run()
    writer = ReportWriter(output_dir)
    writer.write_report(artifacts.report, report_path)
    writer.write_curve(artifacts.report.mape_curve, curve_path)
    writer.write_predictions(artifacts.report.predictions, predictions_path)
    if checkpoint_path is not None:
        writer.write_checkpoint(artifacts.segments, checkpoint_path)
    return artifacts.report
