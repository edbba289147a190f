"""reconstruct command: hide the input behind a counting oracle and recover it."""
import logging

from handlers.cli_config import CliConfig
from handlers.io_handlers import CommandResult, load_function
from services.profiles import CriticalProfile, canonicalize, total_variation
from services.reconstruct import ProfileOracle, reconstruct, verify_reconstruction
from utils.errors import DomainError, ValidationError

logger = logging.getLogger(__name__)

# Match tolerance relative to the total variation of the input
MATCH_TOL = 1e-6


def cmd_reconstruct(cfg: CliConfig) -> CommandResult:
    f = load_function(cfg.phi)
    hidden = f if isinstance(f, CriticalProfile) else canonicalize(f)
    if hidden.is_zero:
        raise ValidationError("reconstruction requires a nonzero function")
    if not hidden.is_compact:
        raise DomainError("reconstruction requires compact support")

    oracle = ProfileOracle(hidden)
    report = reconstruct(oracle, tol=cfg.tol, n_cap=cfg.n_cap, paranoid=cfg.paranoid, jobs=cfg.jobs)
    match = verify_reconstruction(hidden, report, MATCH_TOL * max(1.0, total_variation(hidden)))
    if not match:
        logger.warning(f"Recovered {report.profile.values} does not match the input {hidden.values}")

    payload = report.to_dict()
    payload['match'] = match
    return CommandResult(payload)
