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

from pathlib import Path
from typing import Any, Literal, Optional

import yaml
from pydantic import Field, ValidationError, model_validator

from src.exceptions import ConfigurationError

from .modified_base_model import ModifiedBaseModel

# legacy key spellings
_LEGACY_KEYS = {"desired_localActivity": "desired_local_activity"}
_SPARSITY_MODES = ("desired_local_activity", "sparsity_percent")


def _canonical_key(key: Any) -> str:
    return _LEGACY_KEYS.get(key, str(key).replace("-", "_"))


class ExperimentConfig(ModifiedBaseModel):
    """Experiment parameters; defaults for iters..per_adjust are the reference run values."""

    data_name: str = "times_trainv1"
    data_path: Optional[Path] = None
    data_dir: Path = Path("data")
    has_label_column: Optional[bool] = None
    header: bool = False
    delimiter: Optional[str] = None

    iters: int = Field(50, ge=1)
    min_overlap: int = Field(2, ge=0)
    perms_th: float = Field(0.21, gt=0, lt=1)
    desired_local_activity: Optional[int] = Field(2, ge=1)
    sparsity_percent: Optional[float] = Field(None, gt=0, le=100)
    seq_size: int = Field(700, ge=1)
    per_adjust: float = Field(99, ge=0, le=100)
    seed: int = 0

    columns: int = Field(128, ge=1)
    cells_per_column: int = Field(4, ge=1)
    encoder: Literal["scalar", "identity"] = "scalar"
    buckets: int = Field(64, ge=2)
    active_width: int = Field(3, ge=1)
    potential_fraction: float = Field(0.5, gt=0, le=1)

    learning_rule: Literal["multiplicative", "additive"] = "multiplicative"
    p_plus: float = Field(0.1, gt=0, le=1)
    p_minus: float = Field(0.02, ge=0, le=1)
    theta: int = Field(1, ge=0)
    initial_permanence: Optional[float] = Field(None, gt=0, le=1)
    max_segments_per_cell: int = Field(32, ge=1)
    temporal_passes: int = Field(1, ge=1)

    scoring: Literal["codes", "sdr"] = "codes"
    evaluation: Literal["resubstitution", "online"] = "resubstitution"
    baseline: Literal["last_value", "majority_class"] = "majority_class"

    times_limit: int = Field(9, ge=2)
    periodic_period: int = Field(12, ge=2)
    periodic_cycles: int = Field(10, ge=1)

    @model_validator(mode="before")
    @classmethod
    def _normalize_keys(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        normalized = {_canonical_key(key): value for key, value in data.items()}
        if normalized.get("sparsity_percent") is not None and "desired_local_activity" not in normalized:
            normalized["desired_local_activity"] = None
        return normalized

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        if (self.desired_local_activity is None) == (self.sparsity_percent is None):
            raise ValueError("exactly one of desired_local_activity and sparsity_percent must be set")
        if self.columns < self.winner_count:
            raise ValueError(f"columns ({self.columns}) must be at least the winner count ({self.winner_count})")
        if self.initial_permanence is None:
            self.initial_permanence = min(1.0, self.perms_th + 0.01)
        elif self.initial_permanence < self.perms_th:
            raise ValueError("initial_permanence must be at least perms_th")
        return self

    @property
    def winner_count(self) -> int:
        if self.desired_local_activity is not None:
            return self.desired_local_activity
        assert self.sparsity_percent is not None
        return max(1, round(self.columns * self.sparsity_percent / 100))

    @classmethod
    def build(cls, values: dict[str, Any]) -> "ExperimentConfig":
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            error = e.errors()[0]
            field = ".".join(str(part) for part in error["loc"]) or "config"
            raise ConfigurationError(error["msg"], field) from e

    @classmethod
    def from_yml(cls, path: Path, overrides: Optional[dict[str, Any]] = None) -> "ExperimentConfig":
        """Flat YAML mapping; CLI overrides win over the file, the file over the defaults."""
        if not path.is_file():
            raise ConfigurationError(f"Config file {path} not found", "config")
        try:
            with path.open(encoding="utf-8") as f:
                values = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"{path} is not valid YAML: {e}", "config")
        if not isinstance(values, dict):
            raise ConfigurationError(f"{path} must contain a key-value mapping", "config")
        for key, value in values.items():
            if isinstance(value, (dict, list)):
                raise ConfigurationError("nested values are not supported in the flat config format", str(key))
        # relative dataset paths are resolved against the config file
        if values.get("data_path") or values.get("data-path"):
            key = "data_path" if "data_path" in values else "data-path"
            values[key] = str(path.parent / values[key]) if not Path(values[key]).is_absolute() else values[key]
        values = {_canonical_key(key): value for key, value in values.items()}
        overrides = {_canonical_key(key): value for key, value in (overrides or {}).items()}
        # a sparsity mode set on the command line replaces the file's mode
        chosen = [mode for mode in _SPARSITY_MODES if overrides.get(mode) is not None]
        if len(chosen) == 1:
            for mode in _SPARSITY_MODES:
                if mode != chosen[0]:
                    values.pop(mode, None)
                    overrides.setdefault(mode, None)
        return cls.build({**values, **overrides})
