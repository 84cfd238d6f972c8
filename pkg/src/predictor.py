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

"""Recognition units and the greedy, overlap-thresholded prefix search over them."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np
import numpy.typing as npt

from src.exceptions import DataError, StateError, StructuralError
from src.sdr import Sdr

ScoringMode = Literal["codes", "sdr"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecognitionUnit:
    id: int
    integer_row: tuple[int, ...]
    sdr_row: Optional[Sdr] = None

    @classmethod
    def from_row(
        cls, id: int, row: Sequence[int] | npt.NDArray[np.int64], sdr_row: Optional[Sdr] = None
    ) -> RecognitionUnit:
        return cls(id, tuple(int(v) for v in row), sdr_row)


@dataclass(frozen=True)
class PredictionOutcome:
    predicted_row: tuple[int, ...]
    source_unit: int
    score: int
    accepted: bool


def acceptance_threshold(per_adjust: float, best_possible: int) -> int:
    # small tolerance keeps e.g. 99% of 100 at exactly 99
    return max(0, math.ceil(per_adjust * best_possible / 100 - 1e-9))


class RecognitionStore:
    """Stored exemplars, kept as a zero-padded code matrix for vectorised scoring."""

    def __init__(self) -> None:
        self._units: list[RecognitionUnit] = []
        self._index: dict[int, int] = {}
        self._codes: Optional[npt.NDArray[np.int64]] = None
        self._sdrs: Optional[npt.NDArray[np.bool_]] = None

    def __len__(self) -> int:
        return len(self._units)

    @property
    def units(self) -> list[RecognitionUnit]:
        return list(self._units)

    def get(self, unit_id: int) -> RecognitionUnit:
        if unit_id not in self._index:
            raise StructuralError(f"No recognition unit with id {unit_id}")
        return self._units[self._index[unit_id]]

    def ingest(self, unit: RecognitionUnit) -> RecognitionStore:
        if unit.id in self._index:
            raise StructuralError(f"Recognition unit {unit.id} already stored")
        if self._units and (unit.sdr_row is None) != (self._units[0].sdr_row is None):
            raise StructuralError("Either every recognition unit carries a pooled Sdr or none does")
        self._index[unit.id] = len(self._units)
        self._units.append(unit)
        self._codes = None
        self._sdrs = None
        return self

    def code_matrix(self, width: int = 0) -> npt.NDArray[np.int64]:
        if self._codes is None:
            longest = max(len(unit.integer_row) for unit in self._units)
            codes = np.zeros((len(self._units), longest), dtype=np.int64)
            for r, unit in enumerate(self._units):
                codes[r, : len(unit.integer_row)] = unit.integer_row
            self._codes = codes
        if width > self._codes.shape[1]:
            return np.pad(self._codes, ((0, 0), (0, width - self._codes.shape[1])))
        return self._codes

    def sdr_matrix(self) -> npt.NDArray[np.bool_]:
        if self._sdrs is None:
            if self._units[0].sdr_row is None:
                raise StateError("Recognition units carry no pooled Sdrs, sdr scoring is unavailable")
            self._sdrs = np.stack([unit.sdr_row.dense() for unit in self._units if unit.sdr_row is not None])
        return self._sdrs

    def ids(self) -> npt.NDArray[np.int64]:
        return np.asarray([unit.id for unit in self._units], dtype=np.int64)


def _best(
    store: RecognitionStore, scores: npt.NDArray[np.int64], best_possible: int, per_adjust: float
) -> PredictionOutcome:
    ids = store.ids()
    top = scores.max()
    winner = int(ids[scores == top].min())
    score = int(top)
    return PredictionOutcome(
        predicted_row=store.get(winner).integer_row,
        source_unit=winner,
        score=score,
        accepted=score >= acceptance_threshold(per_adjust, best_possible),
    )


def greedy_predict(
    prefix: Sequence[int] | npt.NDArray[np.int64],
    store: RecognitionStore,
    per_adjust: float,
    scoring: ScoringMode = "codes",
    query_sdr: Optional[Sdr] = None,
) -> PredictionOutcome:
    """
    Best unit for a query prefix; zero codes in the prefix are unknown positions and never score.
    The predicted row is the unit's full row, so a prefix query returns its completion.
    """
    if len(store) == 0:
        raise StateError("Nothing learned: the recognition store is empty")
    query = np.asarray(prefix, dtype=np.int64).ravel()
    known = query != 0
    if not known.any():
        raise DataError("Cannot predict from an empty or all-zero prefix")

    if scoring == "sdr":
        if query_sdr is None:
            raise StructuralError("sdr scoring needs the pooled Sdr of the query")
        units = store.sdr_matrix()
        if units.shape[1] != query_sdr.width:
            raise StructuralError(f"Query Sdr width {query_sdr.width} does not match {units.shape[1]}")
        scores = units[:, query_sdr.dense()].sum(axis=1).astype(np.int64)
        return _best(store, scores, len(query_sdr.active), per_adjust)

    leading = store.code_matrix(query.size)[:, : query.size]
    scores = ((leading == query) & known).sum(axis=1).astype(np.int64)
    return _best(store, scores, int(known.sum()), per_adjust)


def predict_all(
    inputs: npt.NDArray[np.int64],
    store: RecognitionStore,
    per_adjust: float,
    scoring: ScoringMode = "codes",
    query_sdrs: Optional[list[Sdr]] = None,
) -> list[PredictionOutcome]:
    if scoring == "sdr" and (query_sdrs is None or len(query_sdrs) != len(inputs)):
        raise StructuralError("sdr scoring needs one pooled Sdr per input row")
    outcomes = [
        greedy_predict(row, store, per_adjust, scoring, None if query_sdrs is None else query_sdrs[r])
        for r, row in enumerate(inputs)
    ]
    rejected = sum(not outcome.accepted for outcome in outcomes)
    if rejected:
        logger.info(f"{rejected} of {len(outcomes)} predictions fell below the {per_adjust}% overlap threshold")
    return outcomes
