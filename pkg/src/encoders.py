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

"""Scalar and character encoders producing the mixed-integer representation fed to the spatial pooler."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, TypeAlias

import numpy as np
import numpy.typing as npt

from src.exceptions import ConfigurationError, DataError
from src.sdr import Sdr

MixedIntegerSequence: TypeAlias = npt.NDArray[np.int64]

PAD_CODE = 0
FIRST_PRINTABLE_CODE = 32
LAST_PRINTABLE_CODE = 126

EncoderMode = Literal["scalar", "identity"]


@dataclass(frozen=True)
class ScalarEncoderSpec:
    min_value: float
    max_value: float
    buckets: int = 64
    active_width: int = 3

    def __post_init__(self) -> None:
        if not self.min_value < self.max_value:
            raise ConfigurationError(f"must be below max_value {self.max_value}, got {self.min_value}", "min_value")
        if self.buckets < 2:
            raise ConfigurationError(f"needs at least 2 buckets, got {self.buckets}", "buckets")
        if self.active_width < 1:
            raise ConfigurationError(f"must be at least 1, got {self.active_width}", "active_width")

    @property
    def total_width(self) -> int:
        return self.buckets + self.active_width - 1

    def bucket(self, value: float) -> tuple[int, bool]:
        """Bucket of value and whether it had to be clamped into [min_value, max_value]."""
        if not math.isfinite(value):
            raise DataError(f"Cannot encode non-finite value {value}")
        clamped = min(max(value, self.min_value), self.max_value)
        position = (clamped - self.min_value) / (self.max_value - self.min_value) * (self.buckets - 1)
        return int(math.floor(position + 0.5)), clamped != value


def encode_scalar(value: float, spec: ScalarEncoderSpec) -> Sdr:
    start, _ = spec.bucket(value)
    return Sdr(spec.total_width, tuple(range(start, start + spec.active_width)))


@dataclass(frozen=True)
class SymbolCode:
    symbol: str
    code: int

    @classmethod
    def from_symbol(cls, symbol: str) -> SymbolCode:
        code = ord(symbol)
        if not FIRST_PRINTABLE_CODE <= code <= LAST_PRINTABLE_CODE:
            raise DataError(f"Unsupported character {symbol!r}")
        return cls(symbol, code)

    @classmethod
    def from_code(cls, code: int) -> SymbolCode:
        if not FIRST_PRINTABLE_CODE <= code <= LAST_PRINTABLE_CODE:
            raise DataError(f"Code {code} does not map to a supported character")
        return cls(chr(code), code)


def encode_text_row(line: str, pad_to: int) -> list[int]:
    if len(line) > pad_to:
        raise DataError(f"Line of length {len(line)} does not fit pad length {pad_to}")
    codes = []
    for position, symbol in enumerate(line):
        try:
            codes.append(SymbolCode.from_symbol(symbol).code)
        except DataError:
            raise DataError(f"Unsupported character {symbol!r} at position {position}")
    return codes + [PAD_CODE] * (pad_to - len(codes))


def decode_row(codes: list[int] | npt.NDArray[np.int64]) -> str:
    return "".join(SymbolCode.from_code(int(code)).symbol for code in codes if int(code) != PAD_CODE)


def column_specs(
    rows: MixedIntegerSequence, mode: EncoderMode, buckets: int = 64, active_width: int = 3
) -> list[ScalarEncoderSpec]:
    """One encoder spec per field, ranged on the column's min/max (constant columns get a unit range)."""
    specs = []
    for column in np.asarray(rows).T:
        low, high = float(column.min()), float(column.max())
        if mode == "identity":
            high = max(high, low + 1)
            specs.append(ScalarEncoderSpec(low, high, buckets=int(high - low) + 1, active_width=1))
        else:
            specs.append(ScalarEncoderSpec(low, high if high > low else low + 1, buckets, active_width))
    return specs


def integer_view(values: npt.NDArray[np.float64], buckets: int = 64) -> MixedIntegerSequence:
    """Integral columns keep their values; real-valued columns become 1-based bucket indices."""
    values = np.asarray(values, dtype=np.float64)
    view = np.empty(values.shape, dtype=np.int64)
    for j in range(values.shape[1]):
        column = values[:, j]
        if np.all(np.mod(column, 1) == 0):
            view[:, j] = column.astype(np.int64)
            continue
        low, high = float(column.min()), float(column.max())
        spec = ScalarEncoderSpec(low, high if high > low else low + 1, buckets, 1)
        view[:, j] = [spec.bucket(float(v))[0] + 1 for v in column]
    return view


class RowEncoder:
    """Concatenates per-field scalar encodings of an integer row into one input Sdr."""

    def __init__(self, specs: list[ScalarEncoderSpec]):
        if not specs:
            raise ConfigurationError("needs at least one field", "encoder")
        self.specs = specs
        self.offsets = np.cumsum([0] + [spec.total_width for spec in specs[:-1]])
        self.input_width = int(sum(spec.total_width for spec in specs))
        self.clamped_values = 0
        self.logger = logging.getLogger(__name__)

    @classmethod
    def fit(
        cls, rows: MixedIntegerSequence, mode: EncoderMode = "scalar", buckets: int = 64, active_width: int = 3
    ) -> RowEncoder:
        return cls(column_specs(rows, mode, buckets, active_width))

    def encode_row(self, row: list[int] | npt.NDArray[np.int64]) -> Sdr:
        return Sdr.from_dense(self.encode_rows(np.asarray([row]))[0])

    def encode_rows(self, rows: MixedIntegerSequence) -> npt.NDArray[np.bool_]:
        rows = np.asarray(rows)
        if rows.ndim != 2 or rows.shape[1] != len(self.specs):
            raise DataError(f"Expected rows with {len(self.specs)} fields, got shape {rows.shape}")
        dense = np.zeros((rows.shape[0], self.input_width), dtype=bool)
        for field, (spec, offset) in enumerate(zip(self.specs, self.offsets)):
            for r, value in enumerate(rows[:, field]):
                start, clamped = spec.bucket(float(value))
                if clamped:
                    self.clamped_values += 1
                    self.logger.warning(
                        f"Value {value} of field {field} clamped into [{spec.min_value}, {spec.max_value}]"
                    )
                dense[r, offset + start : offset + start + spec.active_width] = True
        return dense
