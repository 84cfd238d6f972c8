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

"""Error hierarchy shared by every pipeline stage; exit codes follow the CLI contract."""


class HtmError(Exception):
    exit_code = 1


class StructuralError(HtmError, ValueError):
    """Incompatible shapes or identities (width mismatch, duplicate ids, empty score list)."""


class ConfigurationError(HtmError, ValueError):
    exit_code = 3

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class DataError(HtmError, ValueError):
    exit_code = 2


class UndefinedMetricError(DataError):
    pass


class StateError(HtmError, RuntimeError):
    pass
