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

import hashlib
import json
from pathlib import Path

from pydantic import BaseModel, ConfigDict


def alias_generator(snake: str) -> str:
    """Convert snake_case to kebab-case."""
    return snake.replace("_", "-")


class ModifiedBaseModel(BaseModel):
    model_config = ConfigDict(alias_generator=alias_generator, extra="forbid", populate_by_name=True)

    def canonical_json(self, exclude: set[str] | None = None) -> str:
        return json.dumps(self.model_dump(mode="json", exclude=exclude), sort_keys=True, separators=(",", ":"))

    def content_hash(self, exclude: set[str] | None = None) -> str:
        return hashlib.sha256(self.canonical_json(exclude).encode("utf-8")).hexdigest()

    def to_json(self, output_path: Path) -> None:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
