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

"""Sparse distributed representations: an immutable sorted index set over a fixed width."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, NewType, Sequence

import numpy as np
import numpy.typing as npt

from src.exceptions import StructuralError

OverlapScore = NewType("OverlapScore", int)


@dataclass(frozen=True)
class Sdr:
    width: int
    active: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.width < 1:
            raise StructuralError(f"Sdr width must be positive, got {self.width}")
        previous = -1
        for index in self.active:
            if index <= previous:
                raise StructuralError(f"Sdr active indices must be strictly increasing, got {self.active}")
            previous = index
        if self.active and (self.active[0] < 0 or self.active[-1] >= self.width):
            raise StructuralError(f"Sdr active index out of range [0, {self.width})")

    @classmethod
    def from_indices(cls, width: int, indices: Iterable[int]) -> Sdr:
        return cls(width, tuple(sorted({int(i) for i in indices})))

    @classmethod
    def from_dense(cls, bits: npt.ArrayLike) -> Sdr:
        dense = np.asarray(bits).ravel()
        return cls(int(dense.size), tuple(int(i) for i in np.flatnonzero(dense)))

    @property
    def sparsity(self) -> float:
        return len(self.active) / self.width

    def dense(self) -> npt.NDArray[np.bool_]:
        """Dense boolean view, used by matrix code and brute-force oracles."""
        bits = np.zeros(self.width, dtype=bool)
        bits[np.asarray(self.active, dtype=np.intp)] = True
        return bits

    def to_dict(self) -> dict[str, Any]:
        return {"width": self.width, "active": list(self.active)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Sdr:
        return cls(int(data["width"]), tuple(int(i) for i in data["active"]))


def _check_same_width(a: Sdr, b: Sdr) -> None:
    if a.width != b.width:
        raise StructuralError(f"Incompatible representations: width {a.width} vs {b.width}")


def overlap(a: Sdr, b: Sdr) -> OverlapScore:
    _check_same_width(a, b)
    return OverlapScore(len(set(a.active).intersection(b.active)))


def union(a: Sdr, b: Sdr) -> Sdr:
    _check_same_width(a, b)
    return Sdr(a.width, tuple(sorted(set(a.active).union(b.active))))


def top_k(scores: Sequence[tuple[int, float]], k: int) -> frozenset[int]:
    """Indices of the k highest strictly positive scores; ties go to the lowest index."""
    if not scores:
        raise StructuralError("top_k needs at least one score")
    if k < 1:
        raise StructuralError(f"top_k needs k >= 1, got {k}")
    ranked = sorted((item for item in scores if item[1] > 0), key=lambda item: (-item[1], item[0]))
    return frozenset(index for index, _ in ranked[:k])


def top_k_rows(scores: npt.NDArray[np.floating[Any]] | npt.NDArray[np.integer[Any]], k: int) -> npt.NDArray[np.bool_]:
    """Row-wise top_k over a (rows, columns) score matrix, returned as a boolean winner mask.

    Column position is the index, so the stable sort on negated scores gives the lowest-index tie rule.
    """
    if scores.ndim != 2 or scores.shape[1] == 0:
        raise StructuralError("top_k_rows needs a non-empty (rows, columns) score matrix")
    if k < 1:
        raise StructuralError(f"top_k needs k >= 1, got {k}")
    k = min(k, scores.shape[1])
    order = np.argsort(-scores, axis=1, kind="stable")[:, :k]
    mask = np.zeros(scores.shape, dtype=bool)
    rows = np.arange(scores.shape[0])[:, None]
    mask[rows, order] = True
    return mask & (scores > 0)
