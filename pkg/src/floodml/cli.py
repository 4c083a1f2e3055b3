"""Command line: ``run``, ``generate`` and ``compare``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import pipeline
from .synthetic import generate_synthetic, read_spec


def _run(args):
    path = Path(args.config)
    try:
        config = pipeline.read_config(path.read_text(encoding="utf-8"), base_dir=path.parent)
    except (OSError, pipeline.ConfigError) as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 2
    try:
        report = pipeline.run_pipeline(config)
    except pipeline.PipelineError as exc:
        print(f"error [{exc.stage}]: {exc.cause}", file=sys.stderr)
        return 1
    sys.stdout.write((Path(config.output_dir) / "summary.csv").read_text(encoding="utf-8"))
    for res in report.results.values():
        if res.error:
            print(f"warning [{res.kind}]: {res.error}", file=sys.stderr)
    return 0


def _generate(args):
    try:
        spec = read_spec(Path(args.spec).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        print(f"error [spec]: {exc}", file=sys.stderr)
        return 2
    rain, flood = generate_synthetic(spec, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "rainfall.csv").write_text(rain, encoding="utf-8", newline="\n")
    (out / "flood.csv").write_text(flood, encoding="utf-8", newline="\n")
    print(f"wrote {out / 'rainfall.csv'} and {out / 'flood.csv'}")
    return 0


def _compare(args):
    try:
        a = pipeline.load_summary(args.report_a)
        b = pipeline.load_summary(args.report_b)
    except (OSError, KeyError, ValueError) as exc:
        print(f"error [compare]: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(pipeline.compare_runs(a, b))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="floodml", description=__doc__)
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the full experiment described by a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_run)

    p = sub.add_parser("generate", help="write synthetic rainfall.csv and flood.csv")
    p.add_argument("--spec", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_generate)

    p = sub.add_parser("compare", help="diff two runs' summary tables")
    p.add_argument("report_a", help="run directory or summary.csv")
    p.add_argument("report_b")
    p.set_defaults(func=_compare)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
