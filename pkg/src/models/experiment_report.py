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
from typing import Any, List, Optional

from pydantic import Field

from .modified_base_model import ModifiedBaseModel

# Fields that legitimately differ between two otherwise identical runs
VOLATILE_FIELDS = {"wall_clock_seconds"}


class MetricReport(ModifiedBaseModel):
    rmse: float = Field(ge=0)
    mape: Optional[float] = Field(default=None, ge=0)
    accuracy: float = Field(ge=0, le=100)
    excluded_zero_terms: int = Field(default=0, ge=0)


class PredictionRecord(ModifiedBaseModel):
    row_index: int
    predicted: str
    predicted_row: List[int]
    source_unit: int
    score: int
    accepted: bool


class TemporalSummary(ModifiedBaseModel):
    bursts_per_pass: List[int]
    segments: int
    prediction_mape: Optional[float] = None
    next_step_accuracy: Optional[float] = None


class ExperimentReport(ModifiedBaseModel):
    dataset: str
    config: dict[str, Any]
    config_hash: str
    seed: int
    rows_used: int
    notes: List[str] = []
    mape_curve: List[float]
    best_iteration: int
    clamped_values: int = 0
    min_val: List[int] = []
    predictions: List[PredictionRecord]
    metrics_codes: MetricReport
    metrics_labels: Optional[MetricReport] = None
    rmse_codes: float
    rmse_labels: Optional[float] = None
    baseline_kind: Optional[str] = None
    baseline: Optional[MetricReport] = None
    temporal: TemporalSummary
    wall_clock_seconds: float = 0.0

    def report_hash(self) -> str:
        return self.content_hash(exclude=VOLATILE_FIELDS)

    @classmethod
    def from_json(cls, path: Path) -> "ExperimentReport":
        return cls.model_validate_json(path.read_text(encoding="utf-8"))
