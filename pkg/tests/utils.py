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
from typing import Any, Iterable

import numpy as np

from src.models import ExperimentConfig
from src.temporal_memory import SegmentStore

# Project root: tests/utils.py -> parents[1] = project root
PROJECT_ROOT = Path(__file__).resolve().parents[1]
CONFIGS_DIR = PROJECT_ROOT / "resources" / "configs"


def small_config(**values: Any) -> ExperimentConfig:
    """Cheap configuration for tests: few trials and a narrow column space."""
    defaults: dict[str, Any] = {"iters": 5, "columns": 32, "cells_per_column": 2}
    return ExperimentConfig.build({**defaults, **values})


def brute_overlap(width: int, a: Iterable[int], b: Iterable[int]) -> int:
    """Bit-by-bit intersection count."""
    a_bits, b_bits = set(a), set(b)
    return sum(1 for position in range(width) if position in a_bits and position in b_bits)


def brute_column_overlaps(matrix: np.ndarray, threshold: float, active: Iterable[int], min_overlap: int) -> list[int]:
    """Per column, the count of active bits whose permanence reaches the threshold, 0 below min_overlap."""
    active_bits = set(active)
    columns, width = matrix.shape
    scores = []
    for c in range(columns):
        score = 0
        for i in range(width):
            if i in active_bits and matrix[c][i] >= threshold:
                score += 1
        scores.append(score if score >= min_overlap else 0)
    return scores


def oracle_predictive(segments: SegmentStore, active: np.ndarray) -> np.ndarray:
    """Entrywise predictive state: some segment of the cell has more than theta connected active synapses."""
    m, n = segments.cells_per_column, segments.columns
    predictive = np.zeros((m, n), dtype=bool)
    permanences, owners = segments.permanences.tolist(), segments.owners.tolist()
    for s, (i, j) in enumerate(owners):
        total = 0
        for pi in range(m):
            for pj in range(n):
                if permanences[s][pi][pj] >= segments.connect_threshold and active[pi][pj]:
                    total += 1
        if total > segments.theta:
            predictive[i][j] = True
    return predictive


def oracle_active(winners: Iterable[int], prev_predictive: np.ndarray) -> np.ndarray:
    """Entrywise active state: predicted cells of a winning column, or the whole column when none was predicted."""
    m, n = prev_predictive.shape
    active = np.zeros((m, n), dtype=bool)
    winning = set(winners)
    for j in range(n):
        if j not in winning:
            continue
        predicted = sum(1 for i in range(m) if prev_predictive[i][j])
        for i in range(m):
            active[i][j] = bool(prev_predictive[i][j]) if predicted >= 1 else True
    return active


def oracle_learn(permanence: np.ndarray, prev_active: np.ndarray, p_plus: float, p_minus: float) -> np.ndarray:
    """Entrywise D + p_plus * D * A - p_minus * D, clipped to [0, 1]."""
    updated = np.zeros(permanence.shape, dtype=np.float64)
    for pi in range(permanence.shape[0]):
        for pj in range(permanence.shape[1]):
            d = float(permanence[pi][pj])
            a = 1.0 if prev_active[pi][pj] else 0.0
            updated[pi][pj] = min(1.0, max(0.0, d + p_plus * d * a - p_minus * d))
    return updated


def random_segment_store(
    rng: np.random.Generator,
    cells_per_column: int,
    columns: int,
    theta: int,
    segments_per_cell: int = 2,
    max_segments_per_cell: int = 32,
) -> SegmentStore:
    store = SegmentStore(cells_per_column, columns, 0.21, theta, max_segments_per_cell)
    for i in range(cells_per_column):
        for j in range(columns):
            for _ in range(int(rng.integers(0, segments_per_cell + 1))):
                perms = rng.random((cells_per_column, columns)) * (rng.random((cells_per_column, columns)) < 0.6)
                store.add((i, j), perms)
    return store
