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

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt

from src.exceptions import DataError


@dataclass
class Dataset:
    name: str
    kind: Literal["numeric", "text"]
    records: npt.NDArray[np.int64]
    labels: Optional[npt.NDArray[np.int64]] = None
    # raw values behind the integer view, kept for real-valued numeric data
    values: Optional[npt.NDArray[np.float64]] = None

    def __post_init__(self) -> None:
        self.check_consistency()

    def check_consistency(self) -> None:
        if self.records.ndim != 2 or self.records.shape[0] == 0:
            raise DataError(f"Dataset {self.name} needs a non-empty table of records, got shape {self.records.shape}")
        if self.labels is not None and len(self.labels) != len(self.records):
            raise DataError(f"Dataset {self.name} has {len(self.records)} records but {len(self.labels)} labels")

    def __len__(self) -> int:
        return int(self.records.shape[0])

    def head(self, size: int) -> "Dataset":
        return Dataset(
            self.name,
            self.kind,
            self.records[:size],
            None if self.labels is None else self.labels[:size],
            None if self.values is None else self.values[:size],
        )

    def targets(self) -> Optional[npt.NDArray[np.int64]]:
        """Label column if present, otherwise the last field of numeric records, None for text."""
        if self.labels is not None:
            return self.labels
        if self.kind == "numeric" and self.records.shape[1] > 1:
            return self.records[:, -1]
        return None
