"""Handler package for the CLI - one module per command group."""

from handlers.cli_config import CliConfig, COMMANDS

from handlers.io_handlers import (
    CommandResult,
    NormSpec,
    load_function,
    load_norm,
    parse_function,
    parse_norm,
    parse_csv_numbers,
    write_payload,
    write_error,
)

from handlers.norm_handlers import (
    cmd_norm,
    cmd_spectrum,
    cmd_catalog,
)

from handlers.reconstruct_handlers import (
    cmd_reconstruct,
)

from handlers.compare_handlers import (
    cmd_compare,
)

from handlers.verify_handlers import (
    cmd_verify,
    CheckResult,
    InvariantSuite,
)

__all__ = [
    # Configuration
    'CliConfig',
    'COMMANDS',

    # Documents
    'CommandResult',
    'NormSpec',
    'load_function',
    'load_norm',
    'parse_function',
    'parse_norm',
    'parse_csv_numbers',
    'write_payload',
    'write_error',

    # Commands
    'cmd_norm',
    'cmd_spectrum',
    'cmd_catalog',
    'cmd_reconstruct',
    'cmd_compare',
    'cmd_verify',

    # Verification
    'CheckResult',
    'InvariantSuite',
]
