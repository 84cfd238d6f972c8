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
from pathlib import Path

import numpy as np
import pytest

from src.exceptions import DataError, StructuralError
from src.temporal_memory import (
    LearningParams,
    SegmentStore,
    TemporalMemory,
    TemporalState,
    compute_active,
    compute_predictive,
    grow_segment,
    learn,
    temporal_step,
)
from tests.utils import oracle_active, oracle_learn, oracle_predictive, random_segment_store

logger = logging.getLogger(__name__)


def _state(active: np.ndarray) -> TemporalState:
    state = TemporalState.empty(*active.shape)
    state.active = active
    return state


def _symbol_columns(symbol: int) -> frozenset[int]:
    return frozenset({2 * symbol, 2 * symbol + 1})


def test_no_segments_means_no_prediction() -> None:
    store = SegmentStore(2, 2)
    assert not compute_predictive(_state(np.ones((2, 2), dtype=bool)), store).any()


@pytest.mark.parametrize("covered, predictive", [(2, True), (1, False)])
def test_predictive_needs_overlap_strictly_above_theta(covered: int, predictive: bool) -> None:
    store = SegmentStore(2, 2, connect_threshold=0.21, theta=1)
    perms = np.zeros((2, 2))
    perms[0, 0] = 0.5
    perms[1, 0] = 0.5 if covered == 2 else 0.1
    store.add((0, 1), perms)
    active = np.zeros((2, 2), dtype=bool)
    active[:, 0] = True
    result = compute_predictive(_state(active), store)
    assert bool(result[0, 1]) is predictive
    assert result.sum() == int(predictive)


def test_active_state() -> None:
    prev_predictive = np.zeros((4, 3), dtype=bool)
    assert not compute_active(set(), prev_predictive).any()

    burst = compute_active({1}, prev_predictive)
    assert burst[:, 1].all() and burst.sum() == 4

    prev_predictive[[1, 3], 2] = True
    predicted = compute_active({2}, prev_predictive)
    assert np.flatnonzero(predicted[:, 2]).tolist() == [1, 3]
    assert predicted.sum() == 2


def test_learning_rule_entries() -> None:
    store = SegmentStore(1, 3)
    store.add((0, 0), np.array([[0.5, 0.5, 0.0]]))
    prev_active = np.array([[False, True, True]])
    learn(store, prev_active, LearningParams(p_plus=0.1, p_minus=0.02), [0])
    assert store.permanences[0, 0, 0] == pytest.approx(0.49)
    assert store.permanences[0, 0, 1] == pytest.approx(0.54)
    assert store.permanences[0, 0, 2] == 0.0


def test_additive_learning_rule_only_touches_existing_synapses() -> None:
    store = SegmentStore(1, 3)
    store.add((0, 0), np.array([[0.5, 0.5, 0.0]]))
    prev_active = np.array([[False, True, True]])
    learn(store, prev_active, LearningParams(p_plus=0.1, p_minus=0.02, learning_rule="additive"), [0])
    assert store.permanences[0, 0].tolist() == pytest.approx([0.48, 0.6, 0.0])


def test_learning_without_reinforced_segments_is_a_no_op() -> None:
    store = SegmentStore(1, 2)
    store.add((0, 0), np.array([[0.5, 0.3]]))
    before = store.permanences.copy()
    learn(store, np.ones((1, 2), dtype=bool), LearningParams(), [])
    assert np.array_equal(store.permanences, before)


def test_grow_segment() -> None:
    store = SegmentStore(2, 2, connect_threshold=0.21)
    grow_segment(store, (1, 1), [(0, 0)], initial_permanence=0.21)
    assert len(store) == 1
    assert np.count_nonzero(store.permanences[0]) == 1
    assert store.connected[0, 0, 0]
    assert store.owners[0].tolist() == [1, 1]
    with pytest.raises(StructuralError):
        grow_segment(store, (0, 0), [], 0.3)


def test_segment_budget_replaces_oldest(caplog: pytest.LogCaptureFixture) -> None:
    store = SegmentStore(1, 2, max_segments_per_cell=2)
    for value in (0.3, 0.4, 0.5):
        store.add((0, 0), np.array([[0.0, value]]))
    assert len(store) == 2
    assert sorted(store.permanences[:, 0, 1].tolist()) == [0.4, 0.5]
    assert "budget of 2 exhausted" in caplog.text


def test_transition_is_replayed_as_prediction() -> None:
    memory = TemporalMemory(2, 2, LearningParams(initial_permanence=0.22), theta=1)
    memory.step({0})
    memory.step({1})
    memory.reset()
    state = memory.step({0}, learn=False)
    assert state.predicted_columns == frozenset({1})


def test_alternating_sequence_is_predicted_exactly() -> None:
    memory = TemporalMemory(4, 4, LearningParams())
    a, b = _symbol_columns(0), _symbol_columns(1)
    for _ in range(3):
        memory.step(a)
        memory.step(b)
    for _ in range(3):
        memory.step(a)
        predicted_before_b = memory.state.predictive.copy()
        state = memory.step(b)
        assert np.array_equal(predicted_before_b, state.active)
        assert not state.bursting_columns


def test_constant_stream_stops_bursting_on_one_column() -> None:
    memory = TemporalMemory(4, 1, LearningParams(), theta=0)
    summary = memory.train([frozenset({0})] * 5, passes=2)
    assert summary.bursts_per_pass[-1] == 0


def test_frozen_learning_leaves_segments_unchanged() -> None:
    memory = TemporalMemory(4, 6, LearningParams(), seed=1)
    memory.train([_symbol_columns(0), _symbol_columns(1), _symbol_columns(2)], passes=3)
    permanences = memory.segments.permanences.copy()
    owners = memory.segments.owners.copy()
    memory.reset()
    memory.infer([_symbol_columns(2), _symbol_columns(1), frozenset({0, 5})])
    assert np.array_equal(memory.segments.permanences, permanences)
    assert np.array_equal(memory.segments.owners, owners)


def test_step_matches_entrywise_evaluation() -> None:
    rng = np.random.default_rng(2026)
    params = LearningParams(p_plus=0.1, p_minus=0.02, initial_permanence=0.22)
    for _ in range(10_000):
        m, n = int(rng.integers(1, 3)), int(rng.integers(1, 5))
        theta = int(rng.integers(0, 3))
        segments = random_segment_store(rng, m, n, theta)
        state = TemporalState.empty(m, n)
        state.active = rng.random((m, n)) < 0.5
        state.predictive = rng.random((m, n)) < 0.3
        state.winner_cells = state.active & (rng.random((m, n)) < 0.5)
        winners = {int(j) for j in np.flatnonzero(rng.random(n) < 0.5)}

        before = segments.permanences.copy()
        owners = segments.owners.copy()
        expected_active = oracle_active(winners, state.predictive)
        reinforced = []
        for s in range(len(before)):
            i, j = owners[s]
            total = sum(
                1
                for pi in range(m)
                for pj in range(n)
                if before[s][pi][pj] >= segments.connect_threshold and state.active[pi][pj]
            )
            if expected_active[i][j] and total > theta:
                reinforced.append(s)

        new_state, segments = temporal_step(winners, state, segments, params)

        assert np.array_equal(new_state.active, expected_active)
        assert np.array_equal(new_state.predictive, oracle_predictive(segments, new_state.active))
        for s in range(len(before)):
            expected = oracle_learn(before[s], state.active, 0.1, 0.02) if s in reinforced else before[s]
            assert np.array_equal(segments.permanences[s], expected)
    logger.info("One step matched the entrywise evaluation on 10000 random networks")


def test_permanences_stay_clamped() -> None:
    rng = np.random.default_rng(9)
    for _ in range(10):
        segments = random_segment_store(rng, 2, 4, theta=1)
        if len(segments) == 0:
            continue
        for _ in range(1000):
            params = LearningParams(
                p_plus=float(rng.uniform(0.01, 1)),
                p_minus=float(rng.uniform(0, 1)),
                learning_rule="multiplicative" if rng.random() < 0.5 else "additive",
            )
            reinforced = np.flatnonzero(rng.random(len(segments)) < 0.5)
            learn(segments, rng.random((2, 4)) < 0.5, params, reinforced)
            assert segments.permanences.min() >= 0.0
            assert segments.permanences.max() <= 1.0


def test_cyclic_sequences_are_mastered() -> None:
    rng = np.random.default_rng(2026)
    for _ in range(100):
        length = int(rng.integers(1, 9))
        symbols = [int(s) for s in rng.permutation(8)[:length]]
        cycle = [_symbol_columns(s) for s in symbols]
        memory = TemporalMemory(4, 16, LearningParams())

        summary = memory.train(cycle, passes=20)
        assert summary.bursts_per_pass[-1] == 0

        memory.reset()
        predicted = memory.infer(cycle * 2)
        expected = [cycle[(t + 1) % length] for t in range(2 * length)]
        assert predicted == expected
    logger.info("100 random cyclic sequences mastered")


def test_checkpoint_round_trip(tmp_path: Path) -> None:
    memory = TemporalMemory(4, 6, LearningParams(), seed=3)
    memory.train([_symbol_columns(0), _symbol_columns(2), _symbol_columns(1)], passes=4)
    path = tmp_path / "segments.json"
    memory.segments.to_json(path)
    restored = SegmentStore.from_json(path)
    assert np.array_equal(restored.permanences, memory.segments.permanences)
    assert np.array_equal(restored.owners, memory.segments.owners)
    assert restored.theta == memory.segments.theta


def test_checkpoint_rejects_other_versions() -> None:
    data = SegmentStore(1, 1).to_dict()
    data["version"] = 99
    with pytest.raises(DataError, match="version 99"):
        SegmentStore.from_dict(data)
    with pytest.raises(DataError, match="Malformed"):
        SegmentStore.from_dict({"version": 1, "columns": 2})
