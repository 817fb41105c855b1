"""layersynth command line.

    layersynth synth --config PATH --catalog PATH --out DIR --pages N --seed S [--no-aesthetic]
    layersynth evaluate --pred DIR --truth PATH --report PATH
    layersynth inspect --manifest PATH [--figures DIR]
    layersynth demo-catalog --out DIR
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .catalog import resolve_catalog
from .errors import ConfigError, LayerSynthError
from .planner import SynthConfig

log = logging.getLogger("layersynth")


def _load_config(args) -> SynthConfig:
    config = SynthConfig.from_file(args.config) if args.config else SynthConfig()
    changes = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.no_aesthetic:
        changes["aesthetic_guidance"] = False
    return config.replace(**changes) if changes else config


def cmd_synth(args) -> int:
    from .pipeline import synth

    config = _load_config(args)
    catalog = resolve_catalog(args.catalog)
    t0 = time.perf_counter()
    result = synth(catalog, config, args.out, args.pages, workers=args.workers,
                   simplify_eps=args.simplify_eps, catalog_ref=str(args.catalog))
    log.info("wrote %d pages to %s in %.1fs", len(result.manifest["pages"]), args.out, time.perf_counter() - t0)
    if result.failures:
        log.error("%d pages failed; see %s", len(result.failures), Path(args.out) / "failures.json")
        return 1
    return 0


def cmd_evaluate(args) -> int:
    from .pipeline import evaluate

    run = evaluate(args.pred, args.truth, args.report, figures=not args.no_figures)
    if run.unmatched:
        log.warning("%d unmatched pages: %s", len(run.unmatched), ", ".join(run.unmatched[:10]))
    if run.errors:
        log.warning("%d pages could not be evaluated: %s", len(run.errors), ", ".join(run.errors[:10]))
    if run.corpus is not None:
        c = run.corpus
        print(f"accuracy\t{c.accuracy:.6f}\nmacro_p\t{c.macro_precision:.6f}\n"
              f"macro_r\t{c.macro_recall:.6f}\nmacro_f1\t{c.macro_f1:.6f}")
    return 0


def cmd_inspect(args) -> int:
    from .pipeline import format_summary, read_manifest, summarize

    summary = summarize(read_manifest(args.manifest))
    sys.stdout.write(format_summary(summary))
    if args.figures:
        from .plots import plot_inspect_summary

        plot_inspect_summary(summary, args.figures)
    return 0


def cmd_demo_catalog(args) -> int:
    from .demo import make_demo_catalog

    path = make_demo_catalog(args.out, seed=args.seed)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layersynth", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic page dataset")
    p.add_argument("--config", help="JSON config file (defaults used when omitted)")
    p.add_argument("--catalog", required=True, help="catalog directory or catalog.csv path")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--pages", type=int, required=True)
    p.add_argument("--seed", type=int, help="override master_seed")
    p.add_argument("--no-aesthetic", action="store_true", help="disable aesthetic guidance (ablation)")
    p.add_argument("--simplify-eps", type=float, default=1.5)
    p.add_argument("--workers", type=int, help="worker processes (default: $LAYERSYNTH_WORKERS or CPU count)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("evaluate", help="score predicted masks against ground truth")
    p.add_argument("--pred", required=True, help="directory of predicted mask PNGs")
    p.add_argument("--truth", required=True, help="mask directory or CVAT 1.1 XML")
    p.add_argument("--report", required=True, help="TSV report path")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("inspect", help="summarize a dataset manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--figures", help="directory for summary plots")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("demo-catalog", help="write a procedurally drawn sample asset catalog")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_demo_catalog)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 2
    except LayerSynthError as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
