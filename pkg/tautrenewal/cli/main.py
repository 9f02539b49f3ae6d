import argparse
import logging
from typing import List, Optional

from tautrenewal.__version__ import __version__
from tautrenewal.api.error import (
    DegenerateVarianceError,
    InvalidArgumentError,
    TautError,
)

from .commands import COMMANDS, Artifacts
from .config import CampaignConfig, UsageError

logger = logging.getLogger(__name__)

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taut-renewal",
        description="Seeded taut string and renewal campaigns with CSV/JSON output.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: WARNING).",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration document.")
    common.add_argument("-o", "--output", help="Output directory.")
    common.add_argument("-w", "--width", type=float, help="Tube width h.")
    common.add_argument("-T", "--horizon", type=float, help="Horizon T.")
    common.add_argument("--dt", type=float, help="Grid step.")
    common.add_argument("--seed", type=int, help="Master seed.")
    common.add_argument("--input", help="Path CSV with columns t,w.")
    common.add_argument(
        "--penalty",
        dest="penalties",
        action="append",
        help="Penalty such as quadratic, power:4 or sqrt1p. Repeatable.",
    )
    common.add_argument("--tolerance", type=float, help="Agreement tolerance.")
    common.add_argument("--energy-tolerance", type=float, help="Energy tolerance.")
    common.add_argument("--workers", type=int, help="Worker processes.")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("gen", parents=[common], help="Emit a Brownian path CSV.")
    solve = commands.add_parser("solve", parents=[common], help="Solve a tube problem.")
    solve.add_argument("--boundary", choices=["fixed", "free"])
    commands.add_parser(
        "decompose", parents=[common], help="Emit the h-extrema decomposition."
    )
    verify = commands.add_parser(
        "verify-decomposition",
        parents=[common],
        help="Compare the global string with the block minimizers.",
    )
    verify.add_argument("--paths", type=int, help="Number of generated paths.")
    for name, text in (
        ("verify-invariance", "Compare oracle minimizers of several penalties."),
        ("oracle-check", "Compare the solver with the oracle on random instances."),
    ):
        check = commands.add_parser(name, parents=[common], help=text)
        check.add_argument("--instances", type=int, help="Number of random instances.")
        check.add_argument("--max-grid", type=int, help="Largest instance grid.")
    renewal = commands.add_parser(
        "estimate-c", parents=[common], help="Estimate the energy rate."
    )
    renewal.add_argument("--n-blocks", type=int, help="Renewal samples to draw.")
    renewal.add_argument("--blocks-per-path", type=int)
    clt = commands.add_parser(
        "clt", parents=[common], help="Standardized energies of independent paths."
    )
    clt.add_argument("--replicates", type=int)
    clt.add_argument("--calibration-blocks", type=int)
    clt.add_argument("--blocks-per-path", type=int)
    clt.add_argument("--alpha", type=float, help="KS significance level.")
    anscombe = commands.add_parser(
        "anscombe", parents=[common], help="Randomly indexed renewal-reward sums."
    )
    anscombe.add_argument("--replicates", type=int)
    anscombe.add_argument(
        "--pair-law", help="independent, linear-correlated or identical."
    )
    anscombe.add_argument("--tau-law", help="Duration law, e.g. exponential:1.")
    anscombe.add_argument("--x-law", help="Reward law, e.g. gaussian:5,1.")
    anscombe.add_argument("--rho", type=float, help="Correlation of X and τ.")
    anscombe.add_argument("--alpha", type=float, help="KS significance level.")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run a command.

    Returns:
        0 when the run passed, 1 when a check failed,
        2 on a malformed configuration or command line.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = CampaignConfig.load(args.config) if args.config else CampaignConfig()
        config.override(args)
        warnings = config.validate()
        artifacts = Artifacts(args.command, config, warnings)
        passed = COMMANDS[args.command](config, artifacts)
    except (UsageError, InvalidArgumentError) as exp:
        logger.error("%s", exp)
        return EXIT_USAGE
    except DegenerateVarianceError as exp:
        logger.error("%s", exp)
        return EXIT_FAILED
    except TautError as exp:
        logger.error("%s failed: %s", args.command, exp)
        return EXIT_FAILED
    if not passed:
        logger.warning("%s: check failed", args.command)
    return EXIT_PASSED if passed else EXIT_FAILED
