"""norm, spectrum and catalog commands."""
import logging

from constants import CLASSIC_NORMS
from handlers.cli_config import CliConfig
from handlers.io_handlers import CommandResult, NormSpec, load_function, load_norm
from services.norms import default_catalog, named_weights, norm_spectrum, standard_evaluator
from utils.errors import ValidationError

logger = logging.getLogger(__name__)


def _resolve_norm(cfg: CliConfig) -> NormSpec:
    if cfg.psi and cfg.named:
        raise ValidationError("give either --psi or --named, not both")
    if cfg.psi:
        return load_norm(cfg.psi)
    if cfg.named:
        weights = named_weights(cfg.named, cfg.n, cfg.e)
        return NormSpec(weights.name, standard_evaluator(weights), weights)
    raise ValidationError("a norm is required: --psi FILE or --named NAME")


def cmd_norm(cfg: CliConfig) -> CommandResult:
    """Evaluate one norm of φ."""
    phi = load_function(cfg.phi)
    spec = _resolve_norm(cfg)
    value = spec.evaluate(phi)
    logger.info(f"Norm {spec.label} of {cfg.phi}: {value!r}")
    return CommandResult({'norm': spec.label, 'value': value})


def cmd_spectrum(cfg: CliConfig) -> CommandResult:
    """‖φ‖_[S_n] or ‖φ‖_[L_n] for n = 1..max_n, one row per n."""
    phi = load_function(cfg.phi)
    values = norm_spectrum(phi, cfg.family, cfg.max_n, jobs=cfg.jobs)
    return CommandResult([{'n': n, 'value': v} for n, v in enumerate(values, start=1)])


def cmd_catalog(cfg: CliConfig) -> CommandResult:
    """Default standard-norm catalog with weights, then the classic norms."""
    rows = [
        {'name': w.name, 'kind': 'standard', 'weights': list(w.weights)}
        for w in default_catalog()
    ]
    rows.extend({'name': name, 'kind': 'classic', 'weights': None} for name in CLASSIC_NORMS)
    return CommandResult(rows)
