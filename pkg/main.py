#!/usr/bin/env python3
"""
Strichartz Radon Toolkit

Command-line front end for the radial Strichartz transforms: compute
transforms and inversions, evaluate constants, run verification suites and
write JSON/CSV artifacts.
"""

import argparse
import logging
import os
import sys
import traceback

# Add src to path
ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(ROOT, 'src'))

from experiments.config import OUTPUT_FORMATS, ExperimentConfig
from experiments.engine import (ALL_SUITES, RIESZ_BACKENDS, SEMYANISTYI_OPS, SUITES,
                                SWEEPABLE, TRANSFORM_OPS, ExperimentEngine)
from experiments.output import TOOL_VERSION, write_text
from identities.reports import Verdict
from numerics.errors import StrichartzError
from storage.run_store import RunStore

DEFAULT_CONFIG_PATH = os.path.join(ROOT, 'config', 'config.json')

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAIL = 2
EXIT_CONSTANT_MISMATCH = 3

_VERDICT_EXIT = {
    Verdict.PASS.value: EXIT_OK,
    Verdict.FAIL.value: EXIT_FAIL,
    Verdict.CONSTANT_MISMATCH.value: EXIT_CONSTANT_MISMATCH,
}
_MARKS = {'pass': '✓', 'fail': '✗', 'constant-mismatch': '≠'}


class CliParser(argparse.ArgumentParser):
    """Usage errors exit with status 1 like every other invalid input."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    """Parser with one subcommand per engine command."""
    common = CliParser(add_help=False)
    common.add_argument('--config', default=None,
                        help=f'JSON configuration file (default: {DEFAULT_CONFIG_PATH} if present)')
    common.add_argument('--output', default=None,
                        help='Write the artifact to this path instead of stdout')
    common.add_argument('--format', choices=OUTPUT_FORMATS, default=None,
                        help='Artifact format (default: json)')
    common.add_argument('--record', action='store_true',
                        help='Record the run in the SQLite run log')
    common.add_argument('--log-level', dest='log_level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level (default: from config, else WARNING)')
    common.add_argument('--threads', type=int, default=None,
                        help='Worker threads (default: STRICHARTZ_THREADS or CPU count)')

    geometry = CliParser(add_help=False)
    for name in ('n', 'p', 'q', 'l'):
        geometry.add_argument(f'--{name}', type=int, default=None,
                              help=f'Dimension {name} of the configuration (n, p, q, l)')

    profile = CliParser(add_help=False)
    profile.add_argument('--profile', default=None,
                         help="Radial profile: gaussian[:s], power-law:λ, generalized-cauchy:β, "
                              "log-tempered-power:e, constant[:c], zero or grid:<csv>")
    profile.add_argument('--at', type=float, nargs='+', default=None, metavar='R',
                         help='Radii to evaluate at (default: the configured probe radii)')

    params = CliParser(add_help=False)
    params.add_argument('--alpha', type=float, default=None, help='Order α')
    params.add_argument('--beta', type=float, default=None, help='Order β')
    params.add_argument('--lambda', dest='lam', type=float, default=None, help='Exponent λ')
    params.add_argument('--dim', type=int, default=None,
                        help='Plane dimension k (k-plane, Semyanistyi) or ambient d (Riesz)')

    sampling = CliParser(add_help=False)
    sampling.add_argument('--samples', type=int, default=None,
                          help='Monte Carlo samples (default: 100000)')
    sampling.add_argument('--seed', type=int, default=None,
                          help='Monte Carlo seed (default: fresh, reported in the header)')
    sampling.add_argument('--streams', type=int, default=None,
                          help='Independent random streams (default: 8)')

    parser = CliParser(
        description='Strichartz Radon Toolkit',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Evaluate a constant
  python main.py constants --name c1 --n 6 --p 1 --q 1 --l 1 --lambda 2

  # Forward transform of a Gaussian at one radius
  python main.py transform --op strichartz-forward --n 6 --p 1 --q 1 --l 1 --at 1.0

  # Monte Carlo duality suite with a fixed seed
  python main.py verify --suite duality --n 4 --p 1 --q 1 --l 1 --samples 100000 --seed 7

  # Invert the dual transform of a power law
  python main.py invert --side dual --n 7 --p 1 --q 2 --l 2 --profile power-law:4

  # Sweep c1 over λ into a CSV table
  python main.py sweep --name c1 --n 6 --p 1 --q 1 --l 1 --vary lam --values 1.5 2 2.5 \\
      --format csv --output results/c1.csv

  # Show recorded runs
  python main.py history --limit 5
        """
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {TOOL_VERSION}')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')

    transform = subparsers.add_parser(
        'transform', parents=[common, geometry, profile, params],
        help='Radial Strichartz, inclusion, k-plane and related transforms')
    transform.add_argument('--op', dest='operation', choices=TRANSFORM_OPS,
                           default='strichartz-forward', help='Transform to evaluate')
    transform.add_argument('--side', choices=['forward', 'dual'], default=None,
                           help='Side for --op existence (default: forward)')

    invert = subparsers.add_parser(
        'invert', parents=[common, geometry, profile],
        help='Transform a profile, invert it and report the recovery error')
    invert.add_argument('--side', choices=['forward', 'dual'], default=None,
                        help='Invert the forward (default) or the dual transform')

    riesz = subparsers.add_parser(
        'riesz', parents=[common, geometry, profile, params],
        help='Radial Riesz potential')
    riesz.add_argument('--backend', choices=RIESZ_BACKENDS, default=None,
                       help='Evaluation route (default: ek-factorized)')

    semyanistyi = subparsers.add_parser(
        'semyanistyi', parents=[common, geometry, profile, params],
        help='Semyanistyi integrals P^α_k and their duals')
    semyanistyi.add_argument('--op', dest='operation', choices=SEMYANISTYI_OPS,
                             default='forward', help='Which integral (default: forward)')

    verify = subparsers.add_parser(
        'verify', parents=[common, geometry, profile, params, sampling],
        help='Run a verification suite')
    verify.add_argument('--suite', choices=SUITES + (ALL_SUITES,), default=ALL_SUITES,
                        help='Suite to run (default: all)')
    verify.add_argument('--side', choices=['forward', 'dual'], default=None,
                        help='Side for the sharpness suite (default: forward)')

    constants = subparsers.add_parser(
        'constants', parents=[common, geometry, params],
        help='Evaluate a named constant (or list every one the flags determine)')
    constants.add_argument('--name', default=None, help='Constant name, e.g. c1')

    sweep = subparsers.add_parser(
        'sweep', parents=[common, geometry, profile, params],
        help='Repeat a constant or transform over values of one parameter')
    sweep.add_argument('--vary', choices=SWEEPABLE, required=True, help='Parameter to vary')
    sweep.add_argument('--values', type=float, nargs='+', required=True,
                       help='Values of the varied parameter')
    sweep.add_argument('--name', default=None, help='Sweep this constant instead of a transform')
    sweep.add_argument('--op', dest='operation', choices=TRANSFORM_OPS, default=None,
                       help='Transform to sweep (default: strichartz-forward)')

    export = subparsers.add_parser(
        'export-grid', parents=[common, geometry, profile],
        help='Tabulate a profile or transform into the CSV grid format')
    export.add_argument('--op', dest='operation', default=None,
                        choices=['profile', 'strichartz-forward', 'strichartz-dual'],
                        help='What to tabulate (default: the profile itself)')

    history = subparsers.add_parser('history', parents=[common], help='Show recorded runs')
    history.add_argument('--limit', type=int, default=10, help='Runs to show (default: 10)')

    return parser


def main(argv=None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_OK

    store = None
    try:
        config = ExperimentConfig.resolve(args.command, vars(args),
                                          args.config or DEFAULT_CONFIG_PATH,
                                          explicit_config=args.config is not None)
        logging.basicConfig(level=config.log_level,
                            format='%(asctime)s %(levelname)s %(name)s: %(message)s')

        if config.record or config.command == 'history':
            store = RunStore(config.store_path).connect()

        engine = ExperimentEngine(config, store)
        result = engine.run()

        artifact_to_stdout = not config.output or config.command == 'export-grid'
        # keep stdout machine-readable when the artifact goes there
        console = sys.stderr if artifact_to_stdout else sys.stdout
        show_summary(result, console)
        if config.command != 'export-grid':
            text = engine.render(result)
            if config.output:
                write_text(text, config.output)
                print(f"Artifact written to {config.output}", file=console)
            else:
                sys.stdout.write(text)

        return _VERDICT_EXIT.get(result['verdict'], EXIT_OK)

    except StrichartzError as e:
        print(f"\nError: {e}", file=sys.stderr)
        return EXIT_ERROR

    except Exception as e:
        print(f"\nError: {e}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_ERROR

    finally:
        if store is not None:
            store.disconnect()


def show_summary(result, stream) -> None:
    """Human-readable banner for one command result."""
    def emit(line=''):
        print(line, file=stream)

    emit(f"strichartz-radon {result['command']}")
    emit('=' * 60)
    emit(f"Seed: {result['seed']}")

    body = result['body']
    command = result['command']
    if command == 'verify':
        emit('\nChecks:')
        emit('-' * 60)
        for entry in body['checks']:
            mark = _MARKS.get(entry['verdict'], '-')
            detail = (entry.get('skipped')
                      or f"{entry['statistic']:.3e} (tol {entry['tolerance']:g})")
            emit(f"  {mark} {entry['suite']}/{entry['check']}: {detail}")
    elif command == 'constants':
        for name, value in body['constants'].items():
            emit(f"  {name} = {value!r}")
    elif command == 'history':
        if body['runs']:
            for run in body['runs']:
                emit(f"  #{run['id']} {run['command']}: {run['status']}, "
                     f"verdict {run['verdict']}, seed {run['seed']}, {run['started_at']}")
        else:
            emit('  No recorded runs')
    elif command == 'export-grid':
        emit(f"  {body['label']}: {body['points']} radii written to {body['path']}")
    else:
        emit(f"  Rows: {result['success']}")

    if result['errors']:
        emit(f"\nErrors encountered: {len(result['errors'])}")
        for error in result['errors'][:5]:
            emit(f"  - {error}")

    if result['verdict'] is not None:
        mark = '✓' if result['verdict'] == Verdict.PASS.value else '✗'
        emit(f"\n{mark} Verdict: {result['verdict']}")
    emit('=' * 60)


if __name__ == '__main__':
    sys.exit(main())
