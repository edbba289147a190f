"""compare command."""
from handlers.cli_config import CliConfig
from handlers.io_handlers import CommandResult, load_function
from services.pseudodist import sandwich
from utils.errors import ValidationError


def cmd_compare(cfg: CliConfig) -> CommandResult:
    if not cfg.psi:
        raise ValidationError("compare needs --psi FILE")
    f1 = load_function(cfg.phi)
    f2 = load_function(cfg.psi)
    return CommandResult(sandwich(f1, f2, refinement=cfg.refinement).to_dict())
