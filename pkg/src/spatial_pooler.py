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
Spatial pooling: proximal permanences, min-overlap cutoff and k-winner inhibition over N columns,
wrapped in a Monte Carlo loop that re-samples the permanences and keeps the trial with the best
reconstruction MAPE.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt

from src.encoders import MixedIntegerSequence, RowEncoder
from src.exceptions import ConfigurationError, DataError, StructuralError, UndefinedMetricError
from src.metrics import mape_with_exclusions
from src.models import ExperimentConfig
from src.sdr import OverlapScore, Sdr, top_k, top_k_rows


@dataclass(frozen=True)
class NetworkTopology:
    columns: int
    cells_per_column: int
    input_width: int

    def __post_init__(self) -> None:
        for name in ("columns", "cells_per_column", "input_width"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"must be positive, got {getattr(self, name)}", name)

    def check_winner_count(self, winner_count: int) -> None:
        if self.columns < winner_count:
            raise ConfigurationError(
                f"{self.columns} columns cannot hold {winner_count} winners", "desired_local_activity"
            )

    @property
    def cell_count(self) -> int:
        return self.columns * self.cells_per_column


@dataclass
class ProximalPermanences:
    matrix: npt.NDArray[np.float64]
    connect_threshold: float

    def __post_init__(self) -> None:
        if not 0 < self.connect_threshold < 1:
            raise ConfigurationError(f"must lie in (0, 1), got {self.connect_threshold}", "perms_th")
        if self.matrix.ndim != 2:
            raise StructuralError(f"Proximal permanences must be a 2-D matrix, got shape {self.matrix.shape}")
        if self.matrix.size and (self.matrix.min() < 0 or self.matrix.max() > 1):
            raise StructuralError("Proximal permanences must lie in [0, 1]")

    @classmethod
    def sample(
        cls,
        topology: NetworkTopology,
        connect_threshold: float,
        rng: np.random.Generator,
        potential_fraction: float = 0.5,
    ) -> ProximalPermanences:
        """Uniform permanences on [0, 1], zeroed outside a random potential pool of the given fraction."""
        shape = (topology.columns, topology.input_width)
        values = rng.random(shape)
        potential = rng.random(shape) < potential_fraction
        return cls(values * potential, connect_threshold)

    @property
    def columns(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def input_width(self) -> int:
        return int(self.matrix.shape[1])

    def connected(self) -> npt.NDArray[np.bool_]:
        return self.matrix >= self.connect_threshold

    def copy(self) -> ProximalPermanences:
        return ProximalPermanences(self.matrix.copy(), self.connect_threshold)


@dataclass(frozen=True)
class InhibitionResult:
    winners: frozenset[int]
    raw_overlaps: tuple[int, ...]

    def to_sdr(self) -> Sdr:
        return Sdr.from_indices(len(self.raw_overlaps), self.winners)

    @property
    def min_winner_overlap(self) -> int:
        return min((self.raw_overlaps[c] for c in self.winners), default=0)


@dataclass
class McTrace:
    mapes: list[float]
    best_iteration: int
    best_permanences: ProximalPermanences

    def running_minimum(self) -> list[float]:
        return [float(v) for v in np.minimum.accumulate(np.asarray(self.mapes, dtype=np.float64))]


def column_overlaps(input_sdr: Sdr, perms: ProximalPermanences, min_overlap: int) -> list[OverlapScore]:
    if input_sdr.width != perms.input_width:
        raise StructuralError(
            f"Input width {input_sdr.width} does not match the permanence input width {perms.input_width}"
        )
    raw = perms.connected()[:, np.asarray(input_sdr.active, dtype=np.intp)].sum(axis=1)
    return [OverlapScore(int(score) if score >= min_overlap else 0) for score in raw]


def inhibit(scores: Sequence[int], desired_local_activity: int) -> InhibitionResult:
    winners = top_k(list(enumerate(scores)), desired_local_activity)
    return InhibitionResult(winners, tuple(int(s) for s in scores))


def batch_overlaps(
    inputs: npt.NDArray[np.bool_], perms: ProximalPermanences, min_overlap: int
) -> npt.NDArray[np.int64]:
    """column_overlaps for every row of a dense (rows, input_width) input matrix at once."""
    if inputs.shape[1] != perms.input_width:
        raise StructuralError(f"Input width {inputs.shape[1]} does not match {perms.input_width}")
    raw = (inputs.astype(np.float32) @ perms.connected().T.astype(np.float32)).astype(np.int64)
    raw[raw < min_overlap] = 0
    return raw


def codebook_decode(winner_masks: npt.NDArray[np.bool_], rows: MixedIntegerSequence) -> MixedIntegerSequence:
    """
    Decode every pooled row to the integer row of the lowest-index exemplar whose pooled
    representation contains it. Row r always contains itself, so the lookup never fails.
    """
    masks = winner_masks.astype(np.int64)
    sizes = masks.sum(axis=1)
    contains = (masks @ masks.T) == sizes[:, None]
    return np.asarray(rows)[np.argmax(contains, axis=1)]


@dataclass
class PoolingResult:
    trace: McTrace
    sparsed_data: list[Sdr]
    # minimum raw overlap among each row's winners, 0 without winners
    min_val: list[int]
    winner_overlaps: list[list[int]]
    decoded: MixedIntegerSequence
    input_width: int
    clamped_values: int = 0
    excluded_zero_terms: int = 0


class SpatialPooler:
    """Runs the Monte Carlo pooling trials for one experiment configuration."""

    def __init__(self, config: ExperimentConfig, logger: Optional[logging.Logger] = None):
        self.config = config
        self.logger = logger or logging.getLogger(__name__)

    def pool(
        self, inputs: npt.NDArray[np.bool_], perms: ProximalPermanences
    ) -> tuple[npt.NDArray[np.bool_], npt.NDArray[np.int64]]:
        """Winner masks and raw overlaps for a dense input batch under fixed permanences."""
        overlaps = batch_overlaps(inputs, perms, self.config.min_overlap)
        return top_k_rows(overlaps, self.config.winner_count), overlaps

    def evolve(self, data: MixedIntegerSequence, seed: int) -> PoolingResult:
        if self.config.seq_size < 1:
            raise ConfigurationError(f"must be at least 1, got {self.config.seq_size}", "seq_size")
        rows = np.asarray(data, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[0] == 0:
            raise DataError("Spatial pooling needs a non-empty table of exemplars")
        rows = rows[: self.config.seq_size]

        encoder = RowEncoder.fit(rows, self.config.encoder, self.config.buckets, self.config.active_width)
        inputs = encoder.encode_rows(rows)
        topology = NetworkTopology(self.config.columns, self.config.cells_per_column, encoder.input_width)
        topology.check_winner_count(self.config.winner_count)
        self.logger.info(
            f"Spatial pooling started: {rows.shape[0]} rows, input width {topology.input_width}, "
            f"{topology.columns} columns, {self.config.iters} trials"
        )

        mapes: list[float] = []
        best: Optional[tuple[int, ProximalPermanences, npt.NDArray[np.bool_], npt.NDArray[np.int64], int]] = None
        undefined_reported = False
        for iteration, child in enumerate(np.random.SeedSequence(seed).spawn(self.config.iters)):
            rng = np.random.default_rng(child)
            perms = ProximalPermanences.sample(
                topology, self.config.perms_th, rng, self.config.potential_fraction
            )
            masks, overlaps = self.pool(inputs, perms)
            try:
                trial_mape, excluded = mape_with_exclusions(rows, codebook_decode(masks, rows))
            except UndefinedMetricError:
                if not undefined_reported:
                    self.logger.warning("Reconstruction MAPE undefined (all values are zero), recorded as 0.0")
                    undefined_reported = True
                trial_mape, excluded = 0.0, int(rows.size)
            mapes.append(trial_mape)
            # strict comparison keeps the lowest trial index on ties
            if best is None or trial_mape < mapes[best[0]]:
                best = (iteration, perms, masks, overlaps, excluded)
                self.logger.debug(f"Trial {iteration}: new best reconstruction MAPE {trial_mape:.4f}")

        assert best is not None
        best_iteration, best_perms, best_masks, best_overlaps, best_excluded = best
        self.logger.info(f"Spatial pooling done: best trial {best_iteration} with MAPE {mapes[best_iteration]:.4f}")

        winner_overlaps = [[int(v) for v in row[mask]] for row, mask in zip(best_overlaps, best_masks)]
        return PoolingResult(
            trace=McTrace(mapes, best_iteration, best_perms.copy()),
            sparsed_data=[Sdr.from_dense(mask) for mask in best_masks],
            min_val=[min(values, default=0) for values in winner_overlaps],
            winner_overlaps=winner_overlaps,
            decoded=codebook_decode(best_masks, rows),
            input_width=topology.input_width,
            clamped_values=encoder.clamped_values,
            excluded_zero_terms=best_excluded,
        )


def evolve_sdr(data: MixedIntegerSequence, config: ExperimentConfig, seed: int) -> tuple[McTrace, list[Sdr]]:
    result = SpatialPooler(config).evolve(data, seed)
    return result.trace, result.sparsed_data
