"""Command-line entry point: ``webometrics <stage> --config FILE [flags]``.

Each stage subcommand computes what it needs and writes only its own
outputs; ``run`` writes everything. Flags override config-file keys and
the output directory can also come from ``WEBOMETRICS_OUTPUT_DIR``.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .pipeline import EXIT_INPUT, EXIT_OK, Pipeline, PipelineError, load_config, run_pipeline

# flag dest -> config key
_FLAGS = {
    "roster": "roster_path",
    "fixtures": "fixtures_path",
    "samples": "samples",
    "output_dir": "output_dir",
    "mode": "summary_mode",
    "alpha_levels": "alpha_levels",
    "top_k": "top_k",
    "network_top_universities": "network_top_universities",
    "stats_top_universities": "stats_top_universities",
    "cross_only": "cross_only",
    "workers": "workers",
    "min_interval": "min_interval",
    "layout_iterations": "layout_iterations",
    "layout_seed": "layout_seed",
    "layout_width": "layout_width",
    "layout_height": "layout_height",
}

_HELP = {
    "plan": "write the metric and pairwise query plans",
    "collect": "run the plans against the recorded hit counts",
    "ingest": "domain resolution, sample anomalies and stability",
    "stats": "descriptives, correlation matrices and PCA per set",
    "net": "network summary, node metrics, taxonomy and rankings",
    "layout": "Fruchterman-Reingold coordinates",
    "export": "Pajek NET and GEXF files",
    "run": "every stage in order",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="flat key = value config file")
    common.add_argument("--roster", help="roster CSV")
    common.add_argument("--fixtures", help="directory holding hits.csv and academic_hits.csv")
    common.add_argument("--samples", help="Label=path;Label=path")
    common.add_argument("-o", "--output-dir", dest="output_dir")
    common.add_argument("--mode", choices=("Directed", "UndirectedView"), help="summary mode")
    common.add_argument("--alpha-levels", dest="alpha_levels", help="e.g. 0.01;0.05")
    common.add_argument("--top-k", dest="top_k", type=int)
    common.add_argument("--network-top-universities", dest="network_top_universities")
    common.add_argument("--stats-top-universities", dest="stats_top_universities")
    common.add_argument("--cross-only", dest="cross_only", action="store_const", const="true")
    common.add_argument("--workers", type=int)
    common.add_argument("--min-interval", dest="min_interval", type=float)
    common.add_argument("--layout-iterations", dest="layout_iterations", type=int)
    common.add_argument("--layout-seed", dest="layout_seed", type=int)
    common.add_argument("--layout-width", dest="layout_width", type=float)
    common.add_argument("--layout-height", dest="layout_height", type=float)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="webometrics", description="University-industry URL mention toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*Pipeline.STAGES, "run"):
        sub.add_parser(name, parents=[common], help=_HELP[name])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    overrides = {key: getattr(args, dest) for dest, key in _FLAGS.items() if getattr(args, dest) is not None}
    try:
        config = load_config(args.config, overrides)
        stages = Pipeline.STAGES if args.command == "run" else (args.command,)
        out = run_pipeline(config, stages)
    except PipelineError as exc:
        print(f"webometrics: error: {exc}", file=sys.stderr)
        return exc.code
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
