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

"""Command-line entry point; returns 0 on success, 2 on data errors, 3 on configuration errors, 1 otherwise."""

import glob
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from src.data_io import generate_toy, load_csv, load_text, resolve_dataset, write_dataset
from src.dataset_sources import fetch_dataset
from src.exceptions import DataError, HtmError
from src.experiment import BaselineKind, emit_comparison, run_baseline, run_experiment
from src.models import Dataset, ExperimentConfig, ExperimentReport
from src.parsing import ParsedArguments, parse_cli
from src.report_writer import render_markdown, write_comparison
from src.utils import check_comparison_format

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _load_baseline_dataset(args: ParsedArguments) -> Dataset:
    assert args.data is not None
    path = Path(args.data)
    if path.is_file():
        if path.suffix == ".txt":
            return load_text(path)
        return load_csv(path, args.label_column, delimiter=args.delimiter or ",")
    return resolve_dataset(ExperimentConfig.build({"data_name": args.data, "data_dir": args.data_dir}))


def _load_reports(pattern: str) -> list[ExperimentReport]:
    paths = sorted(glob.glob(pattern, recursive=True))
    if not paths:
        raise DataError(f"No report matches {pattern}")
    reports = []
    for path in paths:
        try:
            reports.append(ExperimentReport.from_json(Path(path)))
        except ValidationError as e:
            raise DataError(f"{path} is not an experiment report: {e.errors()[0]['msg']}")
    return reports


def _dispatch(args: ParsedArguments, logger: logging.Logger) -> None:
    if args.command == "run":
        if args.config_path is not None:
            config = ExperimentConfig.from_yml(args.config_path, args.overrides)
        else:
            config = ExperimentConfig.build(args.overrides)
        output_dir = args.output_dir / config.data_name
        report = run_experiment(
            config,
            output_dir,
            args.report_path,
            args.curve_path,
            args.predictions_path,
            args.checkpoint_path,
            logger,
        )
        logger.info(f"Artifacts of {report.dataset} written (report hash {report.report_hash()[:12]})")

    elif args.command == "baseline":
        kind: BaselineKind = "last_value" if args.kind == "last_value" else "majority_class"
        metrics = run_baseline(_load_baseline_dataset(args), kind)
        if args.out is not None:
            metrics.to_json(args.out)
        else:
            sys.stdout.write(metrics.model_dump_json(indent=2) + "\n")

    elif args.command == "compare":
        assert args.reports is not None
        comparison_format = check_comparison_format(args.comparison_format)
        frame = emit_comparison(_load_reports(args.reports))
        if args.out is not None:
            write_comparison(frame, args.out, comparison_format)
        else:
            sys.stdout.write(frame.write_csv() if comparison_format == "csv" else render_markdown(frame))

    elif args.command == "gen":
        assert args.toy is not None and args.out is not None
        write_dataset(generate_toy(args.toy, args.times_limit, args.period, args.cycles), args.out)
        logger.info(f"Toy dataset {args.toy} written to {args.out}")

    else:
        assert args.data is not None
        fetch_dataset(args.data, args.data_dir)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)
    logger = logging.getLogger("htm_sequence_predictor")
    try:
        args = parse_cli(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        _dispatch(args, logger)
    except HtmError as e:
        logger.error(str(e))
        return e.exit_code
    except Exception:
        logger.exception("Internal error")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
