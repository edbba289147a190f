"""Geometric step shrinking until two consecutive estimates agree."""
import logging
from dataclasses import dataclass
from typing import Callable

from utils.errors import NumericalError

logger = logging.getLogger(__name__)


@dataclass
class HalvingResult:
    """Outcome of a shrink-until-stable run."""
    value: float
    step: float
    halvings: int
    evaluations: int


class HalvingExhaustedError(NumericalError):
    """Raised when every allowed halving has been used without agreement."""


def shrink_until_stable(
    estimate: Callable[[float], float],
    start: float,
    tolerance: float,
    factor: float = 0.5,
    max_halvings: int = 60,
    label: str = "estimate",
) -> HalvingResult:
    """
    Shrink a step size geometrically until estimate(step) and estimate(step * factor) agree.

    Agreement means |E(h) - E(h * factor)| <= tolerance * max(1, |E(h)|).

    Args:
        estimate: Function of the step size to be stabilised
        start: Initial step size (> 0)
        tolerance: Relative agreement tolerance
        factor: Shrink factor in (0, 1)
        max_halvings: Number of extra shrink steps allowed after the first comparison
        label: Name used in log messages

    Returns:
        HalvingResult with the value at the larger step of the agreeing pair
    """
    if start <= 0 or not 0 < factor < 1:
        raise ValueError(f"invalid halving setup: start={start}, factor={factor}")

    step = start
    previous = estimate(step)
    evaluations = 1
    for halvings in range(max_halvings + 1):
        smaller = step * factor
        current = estimate(smaller)
        evaluations += 1
        if abs(previous - current) <= tolerance * max(1.0, abs(previous)):
            return HalvingResult(previous, step, halvings, evaluations)
        logger.warning(
            f"Halving {halvings + 1}/{max_halvings} for {label}: "
            f"{previous!r} at {step:.3e} vs {current!r} at {smaller:.3e}"
        )
        step, previous = smaller, current

    logger.error(f"All {max_halvings} halvings failed for {label}")
    raise HalvingExhaustedError(
        f"{label} did not stabilise after {max_halvings} halvings "
        f"(hidden function likely violates preconditions)",
        last_value=previous,
    )
