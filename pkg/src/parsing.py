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

import argparse
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, NoReturn, Optional

from src.exceptions import ConfigurationError
from src.utils import parse_overrides

TOYS = ("times", "word3a", "word3b", "word3c", "periodic")


@dataclass(frozen=True)
class ParsedArguments:
    command: str
    verbose: bool = False
    # run
    config_path: Optional[Path] = None
    overrides: dict[str, Any] = field(default_factory=dict)
    output_dir: Path = Path("output")
    report_path: Optional[Path] = None
    curve_path: Optional[Path] = None
    predictions_path: Optional[Path] = None
    checkpoint_path: Optional[Path] = None
    # baseline / fetch
    data: Optional[str] = None
    kind: str = "majority_class"
    label_column: bool = True
    delimiter: Optional[str] = None
    data_dir: Path = Path("data")
    # compare
    reports: Optional[str] = None
    comparison_format: str = "markdown"
    # baseline / compare / gen
    out: Optional[Path] = None
    # gen
    toy: Optional[str] = None
    times_limit: int = 9
    period: int = 12
    cycles: int = 10


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors surface as configuration errors so they share the exit-code contract."""

    def error(self, message: str) -> NoReturn:
        raise ConfigurationError(message, "arguments")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="htm-sequence-predictor")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run one experiment end to end")
    run.add_argument("--config", type=Path, help="flat YAML experiment config")
    run.add_argument("--seed", type=int, help="master seed, overrides the config")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one config value")
    run.add_argument("--output-dir", type=Path, default=Path("output"), help="directory for default artifact paths")
    run.add_argument("--emit-report", type=Path, help="report JSON path")
    run.add_argument("--emit-curve", type=Path, help="Monte Carlo MAPE curve CSV path")
    run.add_argument("--emit-predictions", type=Path, help="predictions CSV path")
    run.add_argument("--emit-checkpoint", type=Path, help="distal segment checkpoint JSON path")
    run.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS, help="log at DEBUG level")

    baseline = commands.add_parser("baseline", help="score a naive predictor on a labelled dataset")
    baseline.add_argument("--data", required=True, help="dataset file or registered/bundled dataset name")
    baseline.add_argument("--kind", choices=("last_value", "majority_class"), default="majority_class")
    baseline.add_argument("--no-label-column", action="store_true", help="the last column is a feature, not a label")
    baseline.add_argument("--delimiter", help="field delimiter, or 'whitespace'")
    baseline.add_argument("--data-dir", type=Path, default=Path("data"))
    baseline.add_argument("--out", type=Path, help="write the metrics JSON here instead of stdout")

    compare = commands.add_parser("compare", help="tabulate report RMSEs next to the published values")
    compare.add_argument("--reports", required=True, help="glob of report JSON files")
    compare.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    compare.add_argument("--out", type=Path, help="write the table here instead of stdout")

    gen = commands.add_parser("gen", help="write a bundled toy dataset")
    gen.add_argument("--toy", choices=TOYS, required=True)
    gen.add_argument("--out", type=Path, required=True)
    gen.add_argument("--times-limit", type=int, default=9)
    gen.add_argument("--period", type=int, default=12)
    gen.add_argument("--cycles", type=int, default=10)

    fetch = commands.add_parser("fetch", help="download a dataset registered in datasets.json")
    fetch.add_argument("--data", required=True, help="registered dataset name, e.g. heart_data")
    fetch.add_argument("--data-dir", type=Path, default=Path("data"))
    return parser


def parse_cli(argv: Optional[List[str]] = None) -> ParsedArguments:
    args = build_parser().parse_args(argv)

    if args.command == "run":
        overrides = parse_overrides(args.set)
        if args.seed is not None:
            overrides["seed"] = args.seed
        return ParsedArguments(
            command="run",
            verbose=args.verbose,
            config_path=args.config,
            overrides=overrides,
            output_dir=args.output_dir,
            report_path=args.emit_report,
            curve_path=args.emit_curve,
            predictions_path=args.emit_predictions,
            checkpoint_path=args.emit_checkpoint,
        )
    if args.command == "baseline":
        return ParsedArguments(
            command="baseline",
            verbose=args.verbose,
            data=args.data,
            kind=args.kind,
            label_column=not args.no_label_column,
            delimiter=args.delimiter,
            data_dir=args.data_dir,
            out=args.out,
        )
    if args.command == "compare":
        return ParsedArguments(
            command="compare", verbose=args.verbose, reports=args.reports, comparison_format=args.format, out=args.out
        )
    if args.command == "gen":
        return ParsedArguments(
            command="gen",
            verbose=args.verbose,
            toy=args.toy,
            out=args.out,
            times_limit=args.times_limit,
            period=args.period,
            cycles=args.cycles,
        )
    return ParsedArguments(command="fetch", verbose=args.verbose, data=args.data, data_dir=args.data_dir)
