"""
Reparametrization-invariant norms of piecewise-monotone functions.
Main entry point for the command-line interface.
"""
import argparse
import logging
import sys
from typing import List, Optional

from config import LOG_LEVEL
from constants import (
    CLASSIC_NORMS, EXIT_NUMERICAL, EXIT_VALIDATION, NAMED_FAMILIES, OUTPUT_FORMATS,
    SPECTRUM_FAMILIES,
)
from handlers import (
    CliConfig, cmd_catalog, cmd_compare, cmd_norm, cmd_reconstruct, cmd_spectrum,
    cmd_verify, parse_csv_numbers, write_error, write_payload,
)
from utils.errors import NumericalError, ValidationError

logger = logging.getLogger(__name__)

COMMAND_HANDLERS = {
    'norm': cmd_norm,
    'spectrum': cmd_spectrum,
    'reconstruct': cmd_reconstruct,
    'compare': cmd_compare,
    'verify': cmd_verify,
    'catalog': cmd_catalog,
}


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that reports usage errors as ValidationError."""

    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(
        prog='main.py',
        description="Evaluate, compare and reconstruct functions through reparametrization-invariant norms.",
    )
    parser.add_argument('--format', choices=OUTPUT_FORMATS, default=None,
                        help="Output format (default: csv for spectrum and catalog, json otherwise)")
    parser.add_argument('--log-level', default=LOG_LEVEL, help="Logging level (default from RPINORM_LOG_LEVEL)")
    sub = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)

    norm = sub.add_parser('norm', help="Evaluate one norm of a function")
    norm.add_argument('--phi', required=True, help="Function document")
    norm.add_argument('--psi', help="Function document or norm descriptor defining the norm")
    norm.add_argument('--named', choices=NAMED_FAMILIES, help="Named standard norm")
    norm.add_argument('--n', type=int, help="Index for S_n, S_n_e and L_n")
    norm.add_argument('--e', help="Comma separated perturbations for S_n_e")

    spectrum = sub.add_parser('spectrum', help="S_n or L_n norms for n = 1..max-n")
    spectrum.add_argument('--phi', required=True)
    spectrum.add_argument('--family', required=True, choices=SPECTRUM_FAMILIES)
    spectrum.add_argument('--max-n', dest='max_n', type=int, required=True)
    spectrum.add_argument('--jobs', type=int)

    rebuild = sub.add_parser('reconstruct', help="Recover a function from its standard norms")
    rebuild.add_argument('--phi', required=True)
    rebuild.add_argument('--tol', type=float, help="Relative tolerance (default from RPINORM_TOL)")
    rebuild.add_argument('--paranoid', type=int, help="Extra spectrum steps to confirm stabilization")
    rebuild.add_argument('--n-cap', dest='n_cap', type=int, help="Largest n tried for l detection")
    rebuild.add_argument('--jobs', type=int)

    compare = sub.add_parser('compare', help="Bound the natural pseudo-distance of two functions")
    compare.add_argument('--phi', required=True)
    compare.add_argument('--psi', required=True)
    compare.add_argument('--refine', dest='refinement', type=int, help="Samples per function")

    verify = sub.add_parser('verify', help="Run the invariant suites on a function")
    verify.add_argument('--phi', required=True)
    verify.add_argument('--seed', type=int)
    verify.add_argument('--trials', type=int, help="Number of random partner functions")
    verify.add_argument('--refine', dest='refinement', type=int)
    verify.add_argument('--jobs', type=int)

    sub.add_parser('catalog', help=f"List named norms and the classic norms {', '.join(CLASSIC_NORMS)}")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        )
        e = parse_csv_numbers(args.e) if getattr(args, 'e', None) else None
        cfg = CliConfig.from_args(args, e=e)
        result = COMMAND_HANDLERS[cfg.command](cfg)
        write_payload(result.payload, cfg.output_format)
        return result.exit_code
    except ValidationError as err:
        logger.error(f"Invalid input: {err}")
        write_error(err)
        return EXIT_VALIDATION
    except NumericalError as err:
        logger.error(f"Numerical failure: {err}")
        write_error(err)
        return EXIT_NUMERICAL


if __name__ == '__main__':
    sys.exit(main())
