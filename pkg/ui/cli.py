"""
Command-line interface
argparse subcommands over the analysis pipeline, JSON or table output and exit codes
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from rich.console import Console

from config.loader import ConfigError, build_config
from config.settings import (
    APP_NAME, DEFAULT_OUT_DIR, DESCRIPTION, EXIT_INPUT_ERROR, EXIT_OK, EXIT_UNCERTAIN, SUBCOMMANDS, VERSION,
)
from core.groups import SymmetryElement
from core.pipeline import AnalysisError, AnalysisResult, SkewAnalyzer
from core.rational import AlgebraError, RationalTurn
from core.render import write_pgm, write_sidecar
from core.skew import SkewProductError
from ui.console import print_report
from ui.expression import ExpressionError, parse_map, read_map_source
from ui.report import ReportError, build_report, dumps_report, write_report
from utils.logging import get_logger, setup_logging
from utils.validation import parse_turn, validate_window

logger = get_logger(__name__)

SUBCOMMAND_HELP = {
    "normalize": "translate and scale the map into normal form",
    "symmetries": "compute the symmetry group with its exactness status",
    "classify": "classify the map (types I-IV or finite symmetry group)",
    "render": "render a fiber Julia set slice as PGM plus JSON sidecar",
    "verify": "check symmetries numerically on sampled Julia points",
    "report": "run every stage and write the full report",
}


def parse_complex(text: str) -> complex:
    """Complex literal such as 1, -0.5, 0.3+0.2i or 2j"""
    cleaned = text.replace(" ", "").replace("i", "j")
    if cleaned in ("j", "+j", "-j"):
        cleaned = cleaned.replace("j", "1j")
    try:
        return complex(cleaned)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid complex number: {text!r}")


def parse_window(text: str) -> Tuple[complex, float]:
    """CENTER,WIDTH with a complex centre"""
    center_text, sep, width_text = text.rpartition(",")
    if not sep:
        raise argparse.ArgumentTypeError(f"window must be CENTER,WIDTH (got {text!r})")
    try:
        width = float(width_text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid window width: {width_text!r}")
    center = parse_complex(center_text)
    ok, msg = validate_window(center, width)
    if not ok:
        raise argparse.ArgumentTypeError(msg)
    return center, width


def parse_turn_arg(text: str) -> RationalTurn:
    ok, msg, value = parse_turn(text)
    if not ok:
        raise argparse.ArgumentTypeError(msg)
    return RationalTurn.from_fraction(value)


class SkewArgumentParser(argparse.ArgumentParser):
    """Usage errors are input errors"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = SkewArgumentParser(add_help=False)
    common.add_argument("--map", required=True, help="map expression \"(P, Q)\" or a file holding one")
    common.add_argument("--out", type=Path, help="directory for JSON reports and images")
    common.add_argument("--config", type=Path, help="key=value configuration file")
    common.add_argument("--format", choices=["json", "table"], default="json", help="stdout format")
    common.add_argument("--seed", type=int, help="random seed for every sampler")
    common.add_argument("--samples", type=int, help="Julia samples for the base-set checks")
    common.add_argument("--tol", type=float, help="numeric verification tolerance")
    common.add_argument("--max-order", type=int, help="oracle bound on element orders")
    common.add_argument("--depth", type=int, help="oracle iterate depth")
    common.add_argument("--strict", action="store_true", default=None,
                        help=f"exit {EXIT_UNCERTAIN} when any result is uncertain")
    common.add_argument("--no-timestamp", action="store_true", help="omit the time stamp for reproducible output")
    common.add_argument("--verbose", action="store_true", help="debug logging")
    common.add_argument("--quiet", action="store_true", help="warnings and errors only")
    common.add_argument("--log-file", type=Path, help="also write detailed logs here")

    parser = SkewArgumentParser(prog=APP_NAME, description=DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name in SUBCOMMANDS:
        sub = subparsers.add_parser(name, parents=[common], help=SUBCOMMAND_HELP[name])
        if name == "render":
            sub.add_argument("--fiber", type=parse_complex, default=1 + 0j, help="base point z of the slice")
            sub.add_argument("--window", type=parse_window, help="CENTER,WIDTH of the square window")
            sub.add_argument("--res", type=int, help="pixels per side")
        if name == "verify":
            sub.add_argument("--mu", type=parse_turn_arg, help="base rotation as a turn k/m")
            sub.add_argument("--nu", type=parse_turn_arg, help="fiber rotation as a turn k/m")
        if name == "report":
            sub.add_argument("--oracle", action="store_true", help="cross-check against the brute-force oracle")

    return parser


def _overrides(args: argparse.Namespace) -> Dict:
    overrides = {
        "seed": args.seed,
        "samples": args.samples,
        "tol": args.tol,
        "max_order": args.max_order,
        "depth": args.depth,
        "strict": args.strict,
        "resolution": getattr(args, "res", None),
    }
    if args.no_timestamp:
        overrides["timestamp"] = False
    return overrides


def _log_level(args: argparse.Namespace) -> int:
    if args.verbose:
        return logging.DEBUG
    if args.quiet:
        return logging.WARNING
    return logging.INFO


def _verify_elements(args: argparse.Namespace) -> Optional[List[SymmetryElement]]:
    """The requested element, or None to let the pipeline pick group elements"""
    if args.mu is None and args.nu is None:
        return None
    identity = RationalTurn(0, 1)
    return [SymmetryElement(args.mu or identity, args.nu or identity)]


def _render(analyzer: SkewAnalyzer, result: AnalysisResult, args: argparse.Namespace,
            out_dir: Path) -> Dict:
    center, width = args.window if args.window else (0j, None)
    view = analyzer.run_render(result, args.fiber, center, width)
    image = write_pgm(out_dir / "slice.pgm", view.pixels)
    sidecar = write_sidecar(out_dir / "slice.json", view, analyzer.evaluator(result.f),
                            seed=analyzer.config["seed"], extra={"map": result.source})
    data = view.to_json()
    data.update({"image": str(image), "sidecar": str(sidecar)})
    return {"render": data}


def run(args: argparse.Namespace) -> int:
    """Run one subcommand; returns the exit code"""
    config = build_config(args.config, _overrides(args))
    source = read_map_source(args.map)
    f = parse_map(source)

    analyzer = SkewAnalyzer(config)
    result = AnalysisResult(f, source)
    extra = None
    command = args.command

    if command == "report":
        result = analyzer.analyze(f, source, numeric=True, oracle=args.oracle)
    elif command == "render":
        extra = _render(analyzer, result, args, args.out or DEFAULT_OUT_DIR)
    else:
        analyzer.run_normalize(result)
        if command in ("symmetries", "classify", "verify"):
            analyzer.run_symmetries(result)
        if command == "classify":
            analyzer.run_classify(result)
        if command == "verify":
            analyzer.run_verify(result, _verify_elements(args))

    report = build_report(command, result, config, extra, timestamp=config["timestamp"])
    if args.out:
        write_report(report, args.out)

    if args.format == "table":
        print_report(report, Console())
    else:
        sys.stdout.write(dumps_report(report))

    if config["strict"] and report["uncertain"]:
        logger.warning("Result is uncertain; exiting with the strict-mode code")
        return EXIT_UNCERTAIN
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(_log_level(args), args.log_file)
    logger.debug(f"{APP_NAME} {VERSION}: {args.command}")

    try:
        return run(args)
    except (ExpressionError, SkewProductError, AlgebraError, ConfigError) as e:
        logger.error(f"Input error: {e}")
        return EXIT_INPUT_ERROR
    except (AnalysisError, ReportError) as e:
        logger.error(str(e))
        return EXIT_INPUT_ERROR
    except OSError as e:
        logger.error(f"File error: {e}")
        return EXIT_INPUT_ERROR
