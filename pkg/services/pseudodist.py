"""
Two-sided estimates of the natural pseudo-distance

    σ(φ1, φ2) = inf_h sup_t |φ1(t) - φ2(h(t))|.

Every standard norm gives a lower bound, because sup|χ| >= ‖χ‖_[ψ] / V_ψ and
‖φ2∘h‖_[ψ] = ‖φ2‖_[ψ]. The upper estimate is a bottleneck matching of the
two value sequences under monotone couplings.
"""
import logging
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_REFINEMENT
from services.norms import WeightSequence, default_catalog, standard_norm
from services.profiles import (
    CriticalProfile, FunctionLike, canonicalize, total_variation,
)
from utils.errors import NumericalError, ValidationError

logger = logging.getLogger(__name__)

# Constant samples added at each end of a sampled profile
TAIL_PADDING = 2


@dataclass
class DistanceSandwich:
    """Lower and upper estimates of the pseudo-distance."""
    lower: float
    upper: float
    refinement: int
    witness_psi: str

    def to_dict(self) -> dict:
        return asdict(self)


def _profile(f: FunctionLike) -> CriticalProfile:
    return f if isinstance(f, CriticalProfile) else canonicalize(f)


def npd_lower(
    phi1: FunctionLike,
    phi2: FunctionLike,
    catalog: Optional[Sequence[WeightSequence]] = None,
) -> Tuple[float, str]:
    """
    max over ψ in catalog of |‖φ1‖_[ψ] - ‖φ2‖_[ψ]| / V_ψ.

    Returns:
        (bound, name of the weight sequence attaining it)
    """
    catalog = default_catalog() if catalog is None else list(catalog)
    if not catalog:
        raise ValidationError("the catalog must be nonempty")
    p1, p2 = _profile(phi1), _profile(phi2)

    best, witness = 0.0, catalog[0].name
    for weights in catalog:
        bound = abs(standard_norm(p1, weights) - standard_norm(p2, weights)) / weights.total_variation
        if bound > best:
            best, witness = bound, weights.name
    return best, witness


def sample_values(f: FunctionLike, refinement: int) -> np.ndarray:
    """
    Sample the canonical realization of f.

    Each monotone run gets a number of segments proportional to its share
    of the total variation (at least one), so the samples depend on the
    canonical profile only.
    """
    values = _profile(f).values
    if len(values) == 1:
        return np.zeros(2 * TAIL_PADDING)

    variation = total_variation(CriticalProfile(values))
    pieces: List[np.ndarray] = [np.zeros(TAIL_PADDING)]
    for start, end in zip(values, values[1:]):
        segments = max(1, int(round(refinement * abs(end - start) / variation)))
        pieces.append(np.linspace(start, end, segments + 1)[1:])
    pieces.append(np.full(TAIL_PADDING, values[-1]))
    return np.concatenate(pieces)


def coupling_bottleneck(x: np.ndarray, y: np.ndarray) -> float:
    """
    Minimum over monotone complete couplings of max |x_i - y_j|.

    Each coupling step advances i, j or both. Cells on one anti-diagonal
    only depend on the previous two, so the table is filled one diagonal
    at a time.
    """
    n, m = len(x), len(y)
    cost = np.abs(x[:, None] - y[None, :])
    table = np.full((n, m), np.inf)
    table[0, 0] = cost[0, 0]
    for d in range(1, n + m - 1):
        i = np.arange(max(0, d - m + 1), min(d, n - 1) + 1)
        j = d - i
        best = np.full(i.shape, np.inf)
        up = i > 0
        left = j > 0
        diag = up & left
        best[up] = table[i[up] - 1, j[up]]
        best[left] = np.minimum(best[left], table[i[left], j[left] - 1])
        best[diag] = np.minimum(best[diag], table[i[diag] - 1, j[diag] - 1])
        table[i, j] = np.maximum(cost[i, j], best)
    return float(table[-1, -1])


def npd_upper(f1: FunctionLike, f2: FunctionLike, refinement: int = DEFAULT_REFINEMENT) -> float:
    """
    Coupling estimate of inf_h sup_t |f1(t) - f2(h(t))|.

    Monotone couplings allow plateaus and jumps that no diffeomorphism
    realizes, so this is an estimate rather than a guaranteed bound.
    """
    if refinement < 2:
        raise ValidationError("refinement must be at least 2")
    x, y = sample_values(f1, refinement), sample_values(f2, refinement)
    logger.debug(f"Coupling DP on {len(x)} x {len(y)} samples")
    return coupling_bottleneck(x, y)


def sandwich(
    f1: FunctionLike,
    f2: FunctionLike,
    refinement: int = DEFAULT_REFINEMENT,
    catalog: Optional[Sequence[WeightSequence]] = None,
    tol: float = 1e-9,
) -> DistanceSandwich:
    lower, witness = npd_lower(f1, f2, catalog)
    upper = npd_upper(f1, f2, refinement)
    if lower > upper + tol:
        raise NumericalError(f"lower bound {lower!r} exceeds upper estimate {upper!r}", last_value=upper)
    logger.info(f"Pseudo-distance in [{lower!r}, {upper!r}] (witness {witness})")
    return DistanceSandwich(lower, upper, refinement, witness)
