"""Command-line entry point: ``eprsim run`` and ``eprsim compare``."""
import argparse
import json
import logging
import sys
from typing import Optional

from .exceptions import EprsimError
from .experimentrunner import ExperimentRunner
from .optics import MODEL_IDS
from .simulation import deviation_report
from .utils.config import load_config_from_file, seed_from_environment
from .utils.io import read_result_table, to_builtin, write_summary

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIGURATION = 2
EXIT_IO = 3

# command-line flag -> configuration field
RUN_OVERRIDES = dict(
    experiment="experiment", model="model", seed="seed", n_events="n_events", window="window", out="output"
)


def parse_angles(value: str):
    """Comma-separated radians, or the name of an angle preset."""
    try:
        return [float(item) for item in value.split(",")]
    except ValueError:
        return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eprsim", description="Local-realistic EPR-B experiment simulations.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run the experiment described by a configuration file.")
    run.add_argument("--config", required=True, help="JSON or YAML experiment configuration.")
    run.add_argument("--experiment", help="Override the experiment name.")
    run.add_argument("--model", help="Override the model id.")
    run.add_argument("--seed", type=int, help="Override the master seed (takes precedence over EPRSIM_SEED).")
    run.add_argument("--n-events", type=int, dest="n_events", help="Override the number of emissions per setting.")
    run.add_argument("--window", type=float, help="Override the coincidence window in seconds.")
    run.add_argument("--angles", type=parse_angles, help="Comma-separated radians or an angle preset name.")
    run.add_argument("--out", help="Override the path of the result CSV.")
    run.add_argument("--progress", action="store_true", help="Show progress bars.")
    run.add_argument("--verbose", "-v", action="count", default=0, help="-v for INFO, -vv for DEBUG logging.")

    compare = subparsers.add_parser("compare", help="Compare a result CSV against closed-form correlations.")
    compare.add_argument("--input", required=True, help="Result CSV written by 'eprsim run'.")
    compare.add_argument("--oracle", required=True, choices=MODEL_IDS, help="Model whose closed form is the reference.")
    compare.add_argument("--out", help="Optional path of a JSON copy of the report.")
    compare.add_argument("--verbose", "-v", action="count", default=0, help="-v for INFO, -vv for DEBUG logging.")
    return parser


def build_config(args: argparse.Namespace, environ=None) -> dict:
    """Configuration file, then the EPRSIM_SEED environment variable, then command-line flags."""
    config = load_config_from_file(args.config)
    environment_seed = seed_from_environment(environ)
    if environment_seed is not None:
        config["seed"] = environment_seed
    for flag, key in RUN_OVERRIDES.items():
        value = getattr(args, flag)
        if value is not None:
            config[key] = value
    if args.angles is not None:
        config["angles"] = args.angles
    if args.progress:
        config["progress"] = True
    return config


def run(args: argparse.Namespace, environ=None) -> dict:
    runner = ExperimentRunner(build_config(args, environ))
    return runner.run()


def compare(args: argparse.Namespace) -> dict:
    report = deviation_report(read_result_table(args.input), args.oracle)
    report["input"] = args.input
    if args.out:
        write_summary(report, args.out)
    return report


def _error_record(error: Exception, exit_code: int) -> str:
    return json.dumps(dict(error=type(error).__name__, message=str(error), exit_code=exit_code))


def main(argv: Optional[list] = None, environ=None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    try:
        if args.command == "run":
            result = run(args, environ)
        else:
            result = compare(args)
    except EprsimError as e:
        print(_error_record(e, EXIT_CONFIGURATION), file=sys.stderr)
        return EXIT_CONFIGURATION
    except OSError as e:
        print(_error_record(e, EXIT_IO), file=sys.stderr)
        return EXIT_IO
    print(json.dumps(to_builtin({k: v for k, v in result.items() if k != "config"}), sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
