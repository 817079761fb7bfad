"""Command line: ``covertime <experiment> --config cfg.json [options]``.

Exit codes: 0 success, 2 configuration error, 3 band check failed (``--check``).
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    EXPERIMENTS,
    ConfigError,
    ExperimentConfig,
    aggregate,
    compare_to_predictor,
    run_experiment,
    validate,
    write_records,
    write_summary,
)

# statistic compared with the predictor under --check
_CHECK_STAT = {"alpha-radius": "median"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="covertime", description=__doc__.splitlines()[0])
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--config", required=True, help="JSON file with ExperimentConfig fields")
    ap.add_argument("--replicates", type=int)
    ap.add_argument("--seed", type=int, help="master seed")
    ap.add_argument("--out", help="record CSV path")
    ap.add_argument("--jsonl", help="optional JSON-lines mirror of the records")
    ap.add_argument("--summary", help="summary CSV path")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--check", action="store_true", help="exit 3 unless the ratio lies in the band")
    ap.add_argument("--band", type=float, nargs=2, metavar=("LOW", "HIGH"))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ConfigError("config", "must be a JSON object")
        raw.setdefault("experiment", args.experiment)
        if raw["experiment"] != args.experiment:
            raise ConfigError("experiment", f"config says {raw['experiment']!r}, command line {args.experiment!r}")
        config = ExperimentConfig.from_dict(raw)
        if args.replicates is not None:
            config.replicates = args.replicates
        if args.seed is not None:
            config.master_seed = args.seed
        if args.out:
            config.output_path = args.out
        if not config.output_path:
            raise ConfigError("output_path", "missing (set it in the config or pass --out)")
        band = args.band or raw.get("band")
        if args.check and not band:
            raise ConfigError("band", "--check needs a band (config 'band' or --band)")
        validate(config)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    records = run_experiment(config, workers=args.workers)
    write_records(records, config.output_path, args.jsonl or raw.get("jsonl_path"))

    rows = [aggregate(records, s) for s in ("mean", "median", "stderr")]
    status = 0
    if band:
        stat = _CHECK_STAT.get(config.experiment, "mean")
        summary = next(r for r in rows if r.statistic == stat)
        if summary.predictor_value is None:
            print(f"{config.experiment} has no predictor to check against", file=sys.stderr)
            return 2
        report = compare_to_predictor(summary, tuple(band))
        rows.append(report)
        print(f"{config.experiment} {stat} ratio {summary.ratio!r} band {tuple(band)} "
              f"{'pass' if report.passed else 'FAIL'}")
        if args.check and not report.passed:
            status = 3
    summary_path = args.summary or raw.get("summary_path")
    if summary_path:
        write_summary(rows, summary_path)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
