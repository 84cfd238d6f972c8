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

from src.exceptions import StructuralError
from src.sdr import Sdr, overlap, top_k, top_k_rows, union
from tests.utils import brute_overlap

logger = logging.getLogger(__name__)


@pytest.mark.parametrize(
    "a, b, width, expected",
    [
        ((0, 2, 4), (1, 3, 5), 8, 0),
        ((1, 3, 5), (1, 3, 5), 8, 3),
        ((1, 3, 5), (3, 5, 9), 16, 2),
    ],
)
def test_overlap(a: tuple[int, ...], b: tuple[int, ...], width: int, expected: int) -> None:
    assert overlap(Sdr(width, a), Sdr(width, b)) == expected


def test_overlap_rejects_width_mismatch() -> None:
    with pytest.raises(StructuralError, match="width 8 vs 16"):
        overlap(Sdr(8, (1,)), Sdr(16, (1,)))


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ((0, 1), (), (0, 1)),
        ((1, 3), (1, 3), (1, 3)),
        ((1, 3), (2, 3, 7), (1, 2, 3, 7)),
    ],
)
def test_union(a: tuple[int, ...], b: tuple[int, ...], expected: tuple[int, ...]) -> None:
    assert union(Sdr(8, a), Sdr(8, b)).active == expected


def test_sdr_rejects_unsorted_and_out_of_range_indices() -> None:
    with pytest.raises(StructuralError):
        Sdr(8, (3, 1))
    with pytest.raises(StructuralError):
        Sdr(8, (8,))
    with pytest.raises(StructuralError):
        Sdr(0)


def test_sdr_dense_views() -> None:
    sdr = Sdr.from_indices(6, [4, 1, 4])
    assert sdr.active == (1, 4)
    assert Sdr.from_dense(sdr.dense()) == sdr
    assert sdr.sparsity == pytest.approx(2 / 6)
    assert Sdr.from_dict(sdr.to_dict()) == sdr


@pytest.mark.parametrize(
    "scores, k, expected",
    [
        ([(0, 5), (1, 3), (2, 5)], 2, {0, 2}),
        ([(0, 0), (1, 0)], 2, set()),
        ([(0, 7)], 3, {0}),
    ],
)
def test_top_k(scores: list[tuple[int, float]], k: int, expected: set[int]) -> None:
    assert top_k(scores, k) == frozenset(expected)


def test_top_k_rejects_empty_scores() -> None:
    with pytest.raises(StructuralError):
        top_k([], 2)


def test_top_k_rows_agrees_with_top_k() -> None:
    rng = np.random.default_rng(3)
    scores = rng.integers(0, 4, size=(200, 7))
    mask = top_k_rows(scores, 3)
    for row, winners in zip(scores, mask):
        assert set(np.flatnonzero(winners)) == top_k(list(enumerate(row.tolist())), 3)


def test_overlap_properties() -> None:
    rng = np.random.default_rng(2026)
    for _ in range(10_000):
        width = int(rng.integers(1, 40))
        a = Sdr.from_indices(width, rng.choice(width, size=int(rng.integers(0, width + 1)), replace=False))
        b = Sdr.from_indices(width, rng.choice(width, size=int(rng.integers(0, width + 1)), replace=False))
        score = overlap(a, b)
        assert score == overlap(b, a)
        assert 0 <= score <= min(len(a.active), len(b.active))
        assert overlap(a, a) == len(a.active)
        assert score == brute_overlap(width, a.active, b.active)
    logger.info("Overlap properties hold on 10000 random pairs")
