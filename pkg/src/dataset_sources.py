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

"""Load and expose the external benchmark dataset entries from datasets.json."""

import hashlib
import json
import logging
import urllib.error
import urllib.request
from pathlib import Path
from typing import Any, Optional, cast

from src.exceptions import DataError

logger = logging.getLogger(__name__)


def _repo_root() -> Path:
    return Path(__file__).resolve().parent.parent


def _load_sources() -> dict[str, Any]:
    path = _repo_root() / "datasets.json"
    if not path.exists():
        return {}
    with path.open() as f:
        return cast(dict[str, Any], json.load(f))


_sources: dict[str, Any] | None = None


def get_sources() -> dict[str, Any]:
    """Return the content of datasets.json (cached)."""
    global _sources
    if _sources is None:
        _sources = _load_sources()
    return _sources


def get_dataset_source(name: str) -> Optional[dict[str, Any]]:
    return cast(Optional[dict[str, Any]], get_sources().get(name))


def get_dataset_path(name: str, data_dir: Path) -> Path:
    """Expected local path of a registered dataset (e.g. data/heart.dat)."""
    source = get_dataset_source(name)
    if source is None:
        raise DataError(f"Unknown dataset {name}; registered datasets: {sorted(get_sources())}")
    return data_dir / str(source["file"])


CHECKSUMS_FILE = "checksums.json"


def _read_pins(data_dir: Path) -> dict[str, str]:
    path = data_dir / CHECKSUMS_FILE
    if not path.is_file():
        return {}
    with path.open() as f:
        return cast(dict[str, str], json.load(f))


def _write_pins(data_dir: Path, pins: dict[str, str]) -> None:
    with (data_dir / CHECKSUMS_FILE).open("w") as f:
        json.dump(pins, f, indent=4, sort_keys=True)


def fetch_dataset(name: str, data_dir: Path) -> Path:
    """
    Download a registered dataset and verify its SHA-256.

    The expected digest is the one datasets.json records, else the one pinned in data_dir/checksums.json
    by the first successful fetch.
    """
    source = get_dataset_source(name)
    if source is None:
        raise DataError(f"Unknown dataset {name}")
    destination = get_dataset_path(name, data_dir)
    destination.parent.mkdir(parents=True, exist_ok=True)
    logger.info(f"Fetching {name} from {source['url']}")
    try:
        urllib.request.urlretrieve(source["url"], destination)
    except urllib.error.URLError as e:
        raise DataError(f"Could not download {name} from {source['url']}: {e.reason}") from e

    digest = hashlib.sha256(destination.read_bytes()).hexdigest()
    logger.info(f"{destination.name} sha256={digest}")
    pins = _read_pins(data_dir)
    expected = source.get("sha256") or pins.get(name)
    if expected and expected != digest:
        destination.unlink()
        raise DataError(f"Checksum mismatch for {name}: expected {expected}, got {digest}")
    if name not in pins:
        pins[name] = digest
        _write_pins(data_dir, pins)
        logger.info(f"Pinned the sha256 of {name} in {data_dir / CHECKSUMS_FILE}")
    return destination
