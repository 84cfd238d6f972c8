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

"""Dataset loaders and the bundled toy generators (times-table, word fixtures, periodic pressure surrogate)."""

import logging
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
import polars as pl

from src.dataset_sources import get_dataset_path, get_dataset_source
from src.encoders import decode_row, encode_text_row, integer_view
from src.exceptions import DataError
from src.models import Dataset, ExperimentConfig

logger = logging.getLogger(__name__)

RESOURCES_DIR = Path(__file__).resolve().parent.parent / "resources"
WORD_FIXTURES = ("word3a", "word3b", "word3c")
TIMES_TABLE_NAMES = ("times_trainv1", "times")
PERIODIC_NAMES = ("pressure_data", "periodic")


def load_csv(
    path: Path, has_label_column: bool, header: bool = False, delimiter: str = ",", buckets: int = 64
) -> Dataset:
    """Numeric rows in file order; `delimiter="whitespace"` reads space separated files such as the UCI .dat files."""
    sep = r"\s+" if delimiter == "whitespace" else delimiter
    try:
        frame = pd.read_csv(
            path,
            sep=sep,
            header=0 if header else None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            engine="python",
        )
    except pd.errors.EmptyDataError:
        raise DataError(f"{path} contains no rows")
    except pd.errors.ParserError as e:
        raise DataError(f"Ragged rows in {path}: {e}")

    first_data_line = 2 if header else 1
    missing = frame.isna().to_numpy()
    if missing.any():
        row = int(np.argwhere(missing)[0][0])
        raise DataError(f"Ragged rows in {path}: row {row + first_data_line} has fewer than {frame.shape[1]} fields")

    numeric = frame.apply(lambda column: pd.to_numeric(column.str.strip(), errors="coerce"))
    invalid = numeric.isna().to_numpy()
    if invalid.any():
        row, column = (int(i) for i in np.argwhere(invalid)[0])
        raise DataError(
            f"Unparseable cell {frame.iat[row, column]!r} in {path} at row {row + first_data_line} column {column + 1}"
        )

    values = numeric.to_numpy(dtype=np.float64)
    labels: Optional[np.ndarray] = None
    if has_label_column:
        if values.shape[1] < 2:
            raise DataError(f"{path} needs at least one feature column besides the label column")
        label_values = values[:, -1]
        if not np.all(np.mod(label_values, 1) == 0):
            raise DataError(f"Label column of {path} must hold integer class values")
        labels = label_values.astype(np.int64)
        values = values[:, :-1]

    logger.info(f"Loaded {values.shape[0]} records with {values.shape[1]} fields from {path}")
    return Dataset(path.stem, "numeric", integer_view(values, buckets), labels, values)


def load_text(path: Path) -> Dataset:
    """One exemplar per non-blank line, character codes right-padded with 0 to the longest line."""
    try:
        lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    except UnicodeDecodeError as e:
        raise DataError(f"{path} is not valid UTF-8: {e}")
    if not lines:
        raise DataError(f"{path} contains no lines")
    pad_to = max(len(line) for line in lines)
    rows = []
    for number, line in enumerate(lines, start=1):
        try:
            rows.append(encode_text_row(line, pad_to))
        except DataError as e:
            raise DataError(f"{path} line {number}: {e}")
    return Dataset(path.stem, "text", np.asarray(rows, dtype=np.int64))


def generate_times_table(limit: int) -> Dataset:
    """(a, b, a*b) for a, b in [2, limit], followed by the zero-masked query exemplar (2, min(3, limit), 0)."""
    if limit < 2:
        raise DataError(f"times table limit must be at least 2, got {limit}")
    rows = [(a, b, a * b) for a in range(2, limit + 1) for b in range(2, limit + 1)]
    rows.append((2, min(3, limit), 0))
    return Dataset("times_trainv1", "numeric", np.asarray(rows, dtype=np.int64))


def generate_periodic_binary(period: int, cycles: int, anomaly_phase: Optional[int] = None) -> Dataset:
    """Records (slot, flag): two-hourly slot 1..period and a threat flag raised once per period at a fixed phase."""
    if period < 2 or cycles < 1:
        raise DataError(f"periodic generator needs period >= 2 and cycles >= 1, got {period} and {cycles}")
    phase = period - 1 if anomaly_phase is None else anomaly_phase
    if not 0 <= phase < period:
        raise DataError(f"anomaly phase {phase} outside [0, {period})")
    steps = np.arange(period * cycles)
    slots = (steps % period + 1).astype(np.int64)
    flags = (steps % period == phase).astype(np.int64)
    return Dataset("pressure_data", "numeric", slots.reshape(-1, 1), flags)


def load_word_fixture(name: str) -> Dataset:
    if name not in WORD_FIXTURES:
        raise DataError(f"Unknown word fixture {name}; available: {WORD_FIXTURES}")
    return load_text(RESOURCES_DIR / "datasets" / f"{name}.txt")


def resolve_dataset(config: ExperimentConfig) -> Dataset:
    if config.data_path is not None:
        path = config.data_path
        if not path.exists():
            raise DataError(f"Dataset file {path} not found")
        if path.suffix == ".txt":
            return load_text(path)
        return load_csv(path, bool(config.has_label_column), config.header, config.delimiter or ",", config.buckets)

    name = config.data_name
    if name in TIMES_TABLE_NAMES:
        return generate_times_table(config.times_limit)
    if name in PERIODIC_NAMES:
        return generate_periodic_binary(config.periodic_period, config.periodic_cycles)
    if name in WORD_FIXTURES:
        return load_word_fixture(name)

    source = get_dataset_source(name)
    if source is None:
        raise DataError(f"Dataset {name} is neither bundled nor registered in datasets.json")
    path = get_dataset_path(name, config.data_dir)
    if not path.exists():
        raise DataError(f"Dataset {name} not found at {path}; download it from {source['url']}")
    has_label_column = source["label_column"] if config.has_label_column is None else config.has_label_column
    delimiter = config.delimiter or source["delimiter"]
    dataset = load_csv(path, bool(has_label_column), config.header, delimiter, config.buckets)
    dataset.name = name
    return dataset


def generate_toy(toy: str, times_limit: int = 9, period: int = 12, cycles: int = 10) -> Dataset:
    if toy == "times":
        return generate_times_table(times_limit)
    if toy == "periodic":
        return generate_periodic_binary(period, cycles)
    return load_word_fixture(toy)


def write_dataset(dataset: Dataset, output_path: Path) -> None:
    """Text datasets as one line per exemplar, numeric ones as header-less CSV with the label column last."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    if dataset.kind == "text":
        output_path.write_text("".join(decode_row(row) + "\n" for row in dataset.records), encoding="utf-8")
        return
    columns = {f"field_{j}": dataset.records[:, j] for j in range(dataset.records.shape[1])}
    if dataset.labels is not None:
        columns["label"] = dataset.labels
    pl.DataFrame(columns).write_csv(output_path, include_header=False)
