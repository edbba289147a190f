"""Validated settings of one CLI invocation."""
import argparse
import os
from dataclasses import dataclass
from typing import List, Optional

from config import DEFAULT_JOBS, DEFAULT_N_CAP, DEFAULT_REFINEMENT, DEFAULT_TOL
from constants import OUTPUT_FORMATS
from utils.errors import ValidationError

COMMANDS = ('norm', 'spectrum', 'reconstruct', 'compare', 'verify', 'catalog')

# Commands whose payload is a table by default
CSV_DEFAULT_COMMANDS = ('spectrum', 'catalog')


@dataclass
class CliConfig:
    """Command, input paths and overrides, with config.py defaults filled in."""
    command: str
    output_format: str
    phi: Optional[str] = None
    psi: Optional[str] = None
    named: Optional[str] = None
    n: Optional[int] = None
    e: Optional[List[float]] = None
    family: Optional[str] = None
    max_n: Optional[int] = None
    tol: float = DEFAULT_TOL
    paranoid: int = 0
    n_cap: int = DEFAULT_N_CAP
    refinement: int = DEFAULT_REFINEMENT
    seed: int = 0
    trials: int = 20
    jobs: int = DEFAULT_JOBS

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command: {self.command!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValidationError(f"unknown output format: {self.output_format!r}")
        if not self.tol > 0:
            raise ValidationError("tolerance must be positive")
        if self.paranoid < 0:
            raise ValidationError("paranoid must be nonnegative")
        if self.n_cap < 2:
            raise ValidationError("n-cap must be at least 2")
        if self.refinement < 2:
            raise ValidationError("refine must be at least 2")
        if self.trials < 1 or self.jobs < 1:
            raise ValidationError("trials and jobs must be at least 1")
        for path in (self.phi, self.psi):
            if path is not None and not os.access(path, os.R_OK):
                raise ValidationError(f"cannot read {path}")

    @classmethod
    def from_args(cls, args: argparse.Namespace, e: Optional[List[float]] = None) -> 'CliConfig':
        fmt = args.format or ('csv' if args.command in CSV_DEFAULT_COMMANDS else 'json')
        fields = {
            name: getattr(args, name)
            for name in ('phi', 'psi', 'named', 'n', 'family', 'max_n', 'tol', 'paranoid',
                         'n_cap', 'refinement', 'seed', 'trials', 'jobs')
            if getattr(args, name, None) is not None
        }
        return cls(command=args.command, output_format=fmt, e=e, **fields)
