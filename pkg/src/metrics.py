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

"""RMSE, MAPE and percentage accuracy between original and recognised integer representations."""

from __future__ import annotations

import logging
from typing import Any, Sequence

import numpy as np
import numpy.typing as npt

from src.exceptions import DataError, UndefinedMetricError
from src.models.experiment_report import MetricReport

logger = logging.getLogger(__name__)

Vector = Sequence[float] | npt.NDArray[Any]


def _as_pair(truth: Vector, pred: Vector) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    t = np.asarray(truth, dtype=np.float64).ravel()
    p = np.asarray(pred, dtype=np.float64).ravel()
    if t.size == 0 or t.size != p.size:
        raise DataError(f"Metric inputs need equal non-zero lengths, got {t.size} and {p.size}")
    return t, p


def rmse(truth: Vector, pred: Vector) -> float:
    t, p = _as_pair(truth, pred)
    return float(np.sqrt(np.mean((t - p) ** 2)))


def mape_with_exclusions(truth: Vector, pred: Vector) -> tuple[float, int]:
    """MAPE in percent over non-zero truth terms, and the number of excluded zero-truth terms."""
    t, p = _as_pair(truth, pred)
    kept = t != 0
    excluded = int(t.size - kept.sum())
    if not kept.any():
        raise UndefinedMetricError("MAPE is undefined: every truth term is zero")
    return float(100.0 * np.mean(np.abs(t[kept] - p[kept]) / np.abs(t[kept]))), excluded


def mape(truth: Vector, pred: Vector) -> float:
    return mape_with_exclusions(truth, pred)[0]


def accuracy(truth: Sequence[Any] | npt.NDArray[Any], pred: Sequence[Any] | npt.NDArray[Any]) -> float:
    t, p = np.asarray(truth).ravel(), np.asarray(pred).ravel()
    if t.size == 0 or t.size != p.size:
        raise DataError(f"Accuracy inputs need equal non-zero lengths, got {t.size} and {p.size}")
    return float(100.0 * np.mean(t == p))


def metric_report(truth: Vector, pred: Vector) -> MetricReport:
    try:
        mape_value: float | None
        mape_value, excluded = mape_with_exclusions(truth, pred)
    except UndefinedMetricError:
        logger.warning("MAPE undefined (all truth terms are zero), reported as null")
        mape_value, excluded = None, int(np.asarray(truth).size)
    return MetricReport(
        rmse=rmse(truth, pred),
        mape=mape_value,
        accuracy=accuracy(truth, pred),
        excluded_zero_terms=excluded,
    )
