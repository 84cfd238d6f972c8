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
from __future__ import annotations

from typing import Any, Iterable, Literal, Sequence

import numpy as np
import numpy.typing as npt
import yaml

from src.encoders import decode_row
from src.exceptions import ConfigurationError, DataError

ComparisonFormat = Literal["csv", "markdown"]


def check_comparison_format(comparison_format: str) -> ComparisonFormat:
    if comparison_format not in {"csv", ".csv", "markdown", "md", ".md"}:
        raise ConfigurationError(f"Invalid comparison format: {comparison_format}", "format")
    return "csv" if comparison_format.endswith("csv") else "markdown"


def parse_overrides(items: Iterable[str]) -> dict[str, Any]:
    """`key=value` pairs from the command line; values are read as YAML scalars (`iters=5` gives an int)."""
    overrides: dict[str, Any] = {}
    for item in items:
        key, separator, raw_value = item.partition("=")
        if not separator or not key.strip():
            raise ConfigurationError(f"Expected key=value, got {item!r}", "set")
        try:
            overrides[key.strip()] = yaml.safe_load(raw_value) if raw_value.strip() else None
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Unreadable value {raw_value!r}: {e}", key.strip())
    return overrides


def format_row(row: Sequence[int] | npt.NDArray[np.int64], kind: str) -> str:
    """Display form of a row: decoded characters for text, space separated values otherwise."""
    if kind == "text":
        try:
            return decode_row(list(row))
        except DataError:
            return " ".join(str(int(v)) for v in row)
    return " ".join(str(int(v)) for v in row)
