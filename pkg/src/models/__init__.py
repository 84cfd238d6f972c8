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

from .dataset import Dataset
from .experiment_config import ExperimentConfig
from .experiment_report import ExperimentReport, MetricReport, PredictionRecord, TemporalSummary
from .modified_base_model import ModifiedBaseModel
