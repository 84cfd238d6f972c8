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

"""
Temporal memory over an M x N cell space (M cells per column, N columns).

Cells are addressed as (i, j): cell i of column j. Every cell state is an (M, N) boolean matrix.
Distal segments are stored stacked, one (M, N) permanence matrix per segment, together with the
cell owning it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Literal, Optional

import numpy as np
import numpy.typing as npt

from src.exceptions import ConfigurationError, DataError, StructuralError
from src.models import ExperimentConfig
from src.spatial_pooler import InhibitionResult

CHECKPOINT_VERSION = 1

Cell = tuple[int, int]
CellMatrix = npt.NDArray[np.bool_]
LearningRule = Literal["multiplicative", "additive"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LearningParams:
    p_plus: float = 0.1
    p_minus: float = 0.02
    initial_permanence: float = 0.22
    learning_rule: LearningRule = "multiplicative"

    def __post_init__(self) -> None:
        if not 0 < self.p_plus <= 1:
            raise ConfigurationError(f"must lie in (0, 1], got {self.p_plus}", "p_plus")
        if not 0 <= self.p_minus <= 1:
            raise ConfigurationError(f"must lie in [0, 1], got {self.p_minus}", "p_minus")
        if not 0 < self.initial_permanence <= 1:
            raise ConfigurationError(f"must lie in (0, 1], got {self.initial_permanence}", "initial_permanence")

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> LearningParams:
        assert config.initial_permanence is not None
        return cls(config.p_plus, config.p_minus, config.initial_permanence, config.learning_rule)


@dataclass
class TemporalState:
    active: CellMatrix
    predictive: CellMatrix
    prev_active: CellMatrix
    prev_predictive: CellMatrix
    winner_cells: CellMatrix
    prev_winner_cells: CellMatrix
    bursting_columns: frozenset[int] = frozenset()

    @classmethod
    def empty(cls, cells_per_column: int, columns: int) -> TemporalState:
        def zeros() -> CellMatrix:
            return np.zeros((cells_per_column, columns), dtype=bool)

        return cls(zeros(), zeros(), zeros(), zeros(), zeros(), zeros())

    @property
    def predicted_columns(self) -> frozenset[int]:
        return frozenset(int(j) for j in np.flatnonzero(self.predictive.any(axis=0)))


class SegmentStore:
    """Distal segments of every cell, with a cached connected view at connect_threshold."""

    def __init__(
        self,
        cells_per_column: int,
        columns: int,
        connect_threshold: float = 0.21,
        theta: int = 1,
        max_segments_per_cell: int = 32,
    ):
        if cells_per_column < 1 or columns < 1:
            raise ConfigurationError(f"cell space must be non-empty, got {cells_per_column} x {columns}", "columns")
        if not 0 < connect_threshold < 1:
            raise ConfigurationError(f"must lie in (0, 1), got {connect_threshold}", "perms_th")
        if theta < 0:
            raise ConfigurationError(f"must be non-negative, got {theta}", "theta")
        self.cells_per_column = cells_per_column
        self.columns = columns
        self.connect_threshold = connect_threshold
        self.theta = theta
        self.max_segments_per_cell = max_segments_per_cell
        self._size = 0
        self._clock = 0
        self._permanences = np.zeros((0, cells_per_column, columns), dtype=np.float64)
        self._owners = np.zeros((0, 2), dtype=np.int64)
        self._created = np.zeros(0, dtype=np.int64)
        self._connected = np.zeros((0, cells_per_column, columns), dtype=bool)

    def __len__(self) -> int:
        return self._size

    @property
    def permanences(self) -> npt.NDArray[np.float64]:
        return self._permanences[: self._size]

    @property
    def owners(self) -> npt.NDArray[np.int64]:
        return self._owners[: self._size]

    @property
    def connected(self) -> npt.NDArray[np.bool_]:
        return self._connected[: self._size]

    def segments_of(self, cell: Cell) -> npt.NDArray[np.intp]:
        owners = self.owners
        return np.flatnonzero((owners[:, 0] == cell[0]) & (owners[:, 1] == cell[1]))

    def segment_counts(self) -> npt.NDArray[np.int64]:
        counts = np.zeros((self.cells_per_column, self.columns), dtype=np.int64)
        np.add.at(counts, (self.owners[:, 0], self.owners[:, 1]), 1)
        return counts

    def overlaps(self, active: CellMatrix) -> npt.NDArray[np.int64]:
        """Connected-active overlap of every segment."""
        return (self.connected & active).sum(axis=(1, 2)).astype(np.int64)

    def potential_overlaps(self, active: CellMatrix) -> npt.NDArray[np.int64]:
        """Overlap counting every existing synapse, connected or not."""
        return ((self.permanences > 0) & active).sum(axis=(1, 2)).astype(np.int64)

    def refresh(self, indices: Optional[npt.NDArray[np.intp]] = None) -> None:
        if indices is None:
            self._connected[: self._size] = self.permanences >= self.connect_threshold
        else:
            self._connected[indices] = self._permanences[indices] >= self.connect_threshold

    def _ensure_capacity(self) -> None:
        capacity = self._permanences.shape[0]
        if self._size < capacity:
            return
        extra = max(16, capacity)
        self._permanences = np.concatenate(
            [self._permanences, np.zeros((extra, self.cells_per_column, self.columns), dtype=np.float64)]
        )
        self._connected = np.concatenate(
            [self._connected, np.zeros((extra, self.cells_per_column, self.columns), dtype=bool)]
        )
        self._owners = np.concatenate([self._owners, np.zeros((extra, 2), dtype=np.int64)])
        self._created = np.concatenate([self._created, np.zeros(extra, dtype=np.int64)])

    def add(self, cell: Cell, permanence: npt.NDArray[np.float64]) -> int:
        """Store a segment for cell, replacing the cell's oldest one when its budget is exhausted."""
        i, j = cell
        if not (0 <= i < self.cells_per_column and 0 <= j < self.columns):
            raise StructuralError(f"Cell {cell} outside the {self.cells_per_column} x {self.columns} cell space")
        if permanence.shape != (self.cells_per_column, self.columns):
            raise StructuralError(f"Segment permanences must have shape {(self.cells_per_column, self.columns)}")
        if permanence.size and (permanence.min() < 0 or permanence.max() > 1):
            raise StructuralError("Segment permanences must lie in [0, 1]")

        existing = self.segments_of(cell)
        if len(existing) >= self.max_segments_per_cell:
            index = int(existing[np.argmin(self._created[existing])])
            logger.warning(
                f"Segment budget of {self.max_segments_per_cell} exhausted for cell {cell}, "
                "replacing its oldest segment"
            )
        else:
            self._ensure_capacity()
            index = self._size
            self._size += 1
        self._permanences[index] = permanence
        self._owners[index] = (i, j)
        self._created[index] = self._clock
        self._clock += 1
        self.refresh(np.asarray([index]))
        return index

    def copy(self) -> SegmentStore:
        clone = SegmentStore(
            self.cells_per_column, self.columns, self.connect_threshold, self.theta, self.max_segments_per_cell
        )
        clone._size, clone._clock = self._size, self._clock
        clone._permanences = self._permanences.copy()
        clone._owners = self._owners.copy()
        clone._created = self._created.copy()
        clone._connected = self._connected.copy()
        return clone

    def to_dict(self) -> dict[str, Any]:
        order = np.argsort(self._created[: self._size], kind="stable")
        segments = []
        for index in order:
            perms = self._permanences[index]
            synapses = [[int(pi), int(pj), float(perms[pi, pj])] for pi, pj in np.argwhere(perms > 0)]
            segments.append({"cell": [int(v) for v in self._owners[index]], "synapses": synapses})
        return {
            "version": CHECKPOINT_VERSION,
            "cells_per_column": self.cells_per_column,
            "columns": self.columns,
            "connect_threshold": self.connect_threshold,
            "theta": self.theta,
            "segments": segments,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any], max_segments_per_cell: int = 32) -> SegmentStore:
        if data.get("version") != CHECKPOINT_VERSION:
            raise DataError(f"Unsupported segment checkpoint version {data.get('version')}")
        try:
            store = cls(
                int(data["cells_per_column"]),
                int(data["columns"]),
                float(data["connect_threshold"]),
                int(data["theta"]),
                max_segments_per_cell,
            )
            for segment in data["segments"]:
                perms = np.zeros((store.cells_per_column, store.columns), dtype=np.float64)
                for pi, pj, value in segment["synapses"]:
                    perms[int(pi), int(pj)] = float(value)
                i, j = segment["cell"]
                store.add((int(i), int(j)), perms)
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise DataError(f"Malformed segment checkpoint: {e}")
        return store

    def to_json(self, output_path: Path) -> None:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def from_json(cls, path: Path, max_segments_per_cell: int = 32) -> SegmentStore:
        with path.open(encoding="utf-8") as f:
            return cls.from_dict(json.load(f), max_segments_per_cell)


def _winner_columns(winners: InhibitionResult | Iterable[int]) -> frozenset[int]:
    if isinstance(winners, InhibitionResult):
        return winners.winners
    return frozenset(int(j) for j in winners)


def compute_predictive(state: TemporalState, segments: SegmentStore) -> CellMatrix:
    """A cell is predictive iff one of its segments has connected-active overlap strictly above theta."""
    predictive = np.zeros((segments.cells_per_column, segments.columns), dtype=bool)
    if len(segments) == 0:
        return predictive
    firing = segments.owners[segments.overlaps(state.active) > segments.theta]
    predictive[firing[:, 0], firing[:, 1]] = True
    return predictive


def compute_active(winners: InhibitionResult | Iterable[int], prev_predictive: CellMatrix) -> CellMatrix:
    active = np.zeros(prev_predictive.shape, dtype=bool)
    for j in sorted(_winner_columns(winners)):
        column = prev_predictive[:, j]
        active[:, j] = column if column.any() else True
    return active


def learn(
    segments: SegmentStore,
    prev_active: CellMatrix,
    params: LearningParams,
    reinforced: Iterable[int],
) -> SegmentStore:
    indices = np.asarray(sorted(set(int(r) for r in reinforced)), dtype=np.intp)
    if indices.size == 0:
        return segments
    perms = segments.permanences[indices]
    presynaptic = prev_active.astype(np.float64)
    if params.learning_rule == "multiplicative":
        updated = perms + params.p_plus * perms * presynaptic - params.p_minus * perms
    else:
        existing = (perms > 0).astype(np.float64)
        updated = perms + params.p_plus * existing * presynaptic - params.p_minus * existing * (1 - presynaptic)
    segments.permanences[indices] = np.clip(updated, 0.0, 1.0)
    segments.refresh(indices)
    return segments


def grow_segment(
    segments: SegmentStore, cell: Cell, sample: Iterable[Cell], initial_permanence: float
) -> SegmentStore:
    cells = list(sample)
    if not cells:
        raise StructuralError("A new segment needs at least one presynaptic cell")
    if initial_permanence < segments.connect_threshold:
        raise ConfigurationError(
            f"{initial_permanence} is below the connect threshold {segments.connect_threshold}", "initial_permanence"
        )
    perms = np.zeros((segments.cells_per_column, segments.columns), dtype=np.float64)
    for pi, pj in cells:
        perms[pi, pj] = initial_permanence
    segments.add(cell, perms)
    return segments


def _learning_cell(segments: SegmentStore, column: int, prev_active: CellMatrix) -> int:
    """
    Cell of a bursting column that learns: the one owning the best matching segment against the previous
    activity, ties to the lowest cell; without any match the least used cell, ties to the lowest cell.
    """
    best_per_cell = np.zeros(segments.cells_per_column, dtype=np.int64)
    if len(segments):
        in_column = np.flatnonzero(segments.owners[:, 1] == column)
        if in_column.size:
            scores = segments.potential_overlaps(prev_active)[in_column]
            np.maximum.at(best_per_cell, segments.owners[in_column, 0], scores)
    if best_per_cell.max() > 0:
        return int(np.argmax(best_per_cell))
    return int(np.argmin(segments.segment_counts()[:, column]))


def _presynaptic_sample(
    state: TemporalState, size: int, rng: Optional[np.random.Generator]
) -> list[Cell]:
    """Previous winner cells first, topped up with the other previously active cells."""
    winners = np.argwhere(state.winner_cells)
    others = np.argwhere(state.active & ~state.winner_cells)
    if rng is not None:
        winners = winners[rng.permutation(len(winners))]
        others = others[rng.permutation(len(others))]
    pool = np.concatenate([winners, others])[:size]
    return [(int(i), int(j)) for i, j in pool]


def temporal_step(
    winners: InhibitionResult | Iterable[int],
    state: TemporalState,
    segments: SegmentStore,
    params: LearningParams,
    learning_enabled: bool = True,
    rng: Optional[np.random.Generator] = None,
) -> tuple[TemporalState, SegmentStore]:
    columns = _winner_columns(winners)
    active = compute_active(columns, state.predictive)
    bursting = frozenset(j for j in columns if not state.predictive[:, j].any())
    winner_cells = active & state.predictive

    if learning_enabled:
        if len(segments):
            owners = segments.owners
            correct = active[owners[:, 0], owners[:, 1]] & (segments.overlaps(state.active) > segments.theta)
            learn(segments, state.active, params, np.flatnonzero(correct))
        for j in sorted(bursting):
            cell = _learning_cell(segments, j, state.active)
            winner_cells[cell, j] = True
            sample = _presynaptic_sample(state, segments.theta + 1, rng)
            if sample:
                grow_segment(segments, (cell, j), sample, params.initial_permanence)
    else:
        for j in sorted(bursting):
            winner_cells[_learning_cell(segments, j, state.active), j] = True

    new_state = TemporalState(
        active=active,
        predictive=np.zeros_like(active),
        prev_active=state.active,
        prev_predictive=state.predictive,
        winner_cells=winner_cells,
        prev_winner_cells=state.winner_cells,
        bursting_columns=bursting,
    )
    new_state.predictive = compute_predictive(new_state, segments)
    return new_state, segments


@dataclass
class TrainingSummary:
    bursts_per_pass: list[int] = field(default_factory=list)


class TemporalMemory:
    """Single-writer wrapper holding the state and segments of one temporal region."""

    def __init__(
        self,
        cells_per_column: int,
        columns: int,
        params: LearningParams,
        connect_threshold: float = 0.21,
        theta: int = 1,
        max_segments_per_cell: int = 32,
        seed: Optional[int] = None,
        logger: Optional[logging.Logger] = None,
    ):
        self.params = params
        self.segments = SegmentStore(cells_per_column, columns, connect_threshold, theta, max_segments_per_cell)
        self.state = TemporalState.empty(cells_per_column, columns)
        self.rng = None if seed is None else np.random.default_rng(seed)
        self.logger = logger or logging.getLogger(__name__)

    @classmethod
    def from_config(
        cls, config: ExperimentConfig, seed: Optional[int] = None, logger: Optional[logging.Logger] = None
    ) -> TemporalMemory:
        return cls(
            config.cells_per_column,
            config.columns,
            LearningParams.from_config(config),
            config.perms_th,
            config.theta,
            config.max_segments_per_cell,
            seed,
            logger,
        )

    def reset(self) -> None:
        self.state = TemporalState.empty(self.segments.cells_per_column, self.segments.columns)

    def step(self, winners: InhibitionResult | Iterable[int], learn: bool = True) -> TemporalState:
        self.state, self.segments = temporal_step(winners, self.state, self.segments, self.params, learn, self.rng)
        return self.state

    def train(self, sequence: list[frozenset[int]], passes: int = 1) -> TrainingSummary:
        summary = TrainingSummary()
        for number in range(passes):
            bursts = 0
            for columns in sequence:
                bursts += len(self.step(columns).bursting_columns)
            summary.bursts_per_pass.append(bursts)
            self.logger.info(
                f"Temporal pass {number + 1}/{passes}: {bursts} bursting columns, {len(self.segments)} segments"
            )
        return summary

    def infer(self, sequence: list[frozenset[int]]) -> list[frozenset[int]]:
        """Columns predicted for the next step after each input, learning disabled."""
        predicted = []
        for columns in sequence:
            predicted.append(self.step(columns, learn=False).predicted_columns)
        return predicted
