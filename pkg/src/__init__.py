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

from .experiment import ExperimentRunner, run_experiment
from .spatial_pooler import SpatialPooler
from .temporal_memory import TemporalMemory
