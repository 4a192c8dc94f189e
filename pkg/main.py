#!/usr/bin/env python3
"""
Supervisory Observer - DIRECT Sampling Policy

Joint parameter and state estimation for a neural mass model with a growing
bank of observers whose parameter samples are chosen by DIRECT.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from config import LOG_FILE, LOG_LEVEL

# Add src directory to path for imports
sys.path.insert(0, str(Path(__file__).parent / "src"))

from src.core.runner import ScenarioRunner, recompute_metrics  # noqa: E402
from src.models.errors import SupervisorError  # noqa: E402
from src.services.diagnostics import (contraction_check,  # noqa: E402
                                      pe_diagnostic)
from src.services.direct_static import direct_static  # noqa: E402
from src.services.scenario_service import load_scenario  # noqa: E402


def configure_logging(level: str, log_file: Optional[Path] = None) -> None:
    """Console sink at ``level``, plus a DEBUG file sink when given"""
    logger.remove()
    logger.add(sys.stderr, level=level)
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        logger.add(log_file, level="DEBUG", mode="w")


def _parse_target(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Bad target '{text}'") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Supervisory observer with DIRECT sampling"
    )
    parser.add_argument("--log-level", default=LOG_LEVEL)
    verbs = parser.add_subparsers(dest="command", required=True)

    run = verbs.add_parser("run", help="Run a scenario file")
    run.add_argument("config", type=Path)
    run.add_argument("--no-snapshots", action="store_true")

    static = verbs.add_parser("direct-test", help="DIRECT on a test cost")
    static.add_argument("function")
    static.add_argument("n_p", type=int)
    static.add_argument("d_star", type=float, nargs="?")
    static.add_argument("--iters", type=int)
    static.add_argument("--target", type=_parse_target)

    metrics = verbs.add_parser("metrics", help="Recompute run metrics")
    metrics.add_argument("run_dir", type=Path)
    metrics.add_argument("--threshold", type=float)

    diag = verbs.add_parser(
        "pe-diagnostic", help="Excitation and contraction diagnostics"
    )
    diag.add_argument("config", type=Path)
    diag.add_argument("--window", type=float)
    diag.add_argument("--horizon", type=float)
    return parser


def _run(args: argparse.Namespace) -> bool:
    scenario = load_scenario(args.config)
    configure_logging(args.log_level, scenario.output_path / LOG_FILE)
    runner = ScenarioRunner(scenario, write_snapshots=not args.no_snapshots)
    return runner.run()


def _direct_test(args: argparse.Namespace) -> bool:
    result = direct_static(
        args.function,
        args.n_p,
        iterations=args.iters,
        d_star=args.d_star,
        target=args.target,
    )
    print(f"iterations={result.iterations}")
    print(f"samples={result.history[-1].n_samples if result.history else 0}")
    print(f"best_point={','.join(repr(v) for v in result.best_point)}")
    print(f"best_cost={result.best_cost!r}")
    print(f"final_distance={result.final_distance!r}")
    if args.d_star is not None:
        return result.final_distance <= args.d_star
    return True


def _metrics(args: argparse.Namespace) -> bool:
    metrics = recompute_metrics(args.run_dir, args.threshold)
    print("\n".join(metrics.to_lines()))
    return True


def _pe_diagnostic(args: argparse.Namespace) -> bool:
    scenario = load_scenario(args.config)
    report = contraction_check(scenario)
    print(
        f"contraction initial={report.initial_error:.6g} "
        f"final={report.final_error:.6g} settled_at={report.settled_at} "
        f"settled={report.settled}"
    )
    for row in pe_diagnostic(scenario, window=args.window,
                             horizon=args.horizon):
        print(
            f"mismatch={row.mismatch} norm={row.mismatch_norm:.6g} "
            f"min_energy={row.min_energy:.6g}"
        )
    return report.settled


COMMANDS = {
    "run": _run,
    "direct-test": _direct_test,
    "metrics": _metrics,
    "pe-diagnostic": _pe_diagnostic,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point of the supervisory observer toolkit

    Returns:
        Exit code: 0 for success, 1 for failure
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        success = COMMANDS[args.command](args)
        return 0 if success else 1

    except KeyboardInterrupt:
        print("\nOperation cancelled by user")
        return 1
    except SupervisorError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 1
    except Exception as e:
        print(f"Unexpected error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
