"""
Reparametrization-invariant norms.

A standard norm ‖φ‖_[ψ] is determined by the ordered signed variations
m_0, ..., m_{k-1} of ψ over its maximal monotone intervals. Its value is the
largest |Σ m_i·φ*(τ_i)| over nondecreasing positions τ_0 <= ... <= τ_{k-1},
and the τ_i may be taken among the critical points of φ*(t) = φ(-t). That
turns the norm into a dynamic program over nondecreasing index assignments
into the critical values of φ*.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from constants import (
    CATALOG_MAX_LN, CATALOG_MAX_SN, NAMED_LAMBDA, NAMED_LN,
    NAMED_S, NAMED_SN, NAMED_SN_E,
)
from services.profiles import (
    CriticalProfile, FunctionLike, PiecewiseLinearFunction, canonicalize,
    star_values, sup_abs, total_variation, values_of,
)
from utils.errors import ValidationError

logger = logging.getLogger(__name__)


# ==================== DOMAIN TYPES ====================

@dataclass(frozen=True)
class WeightSequence:
    """
    Ordered signed variations defining a standard norm.

    Only the order of the intervals matters, so their positions are dropped.
    The name is for display and does not take part in equality.
    """
    weights: Tuple[float, ...]
    name: str = field(default='weights', compare=False)

    def __post_init__(self):
        weights = tuple(float(m) for m in self.weights)
        object.__setattr__(self, 'weights', weights)
        if not weights:
            raise ValidationError("a weight sequence must be nonempty")
        if not all(np.isfinite(weights)):
            raise ValidationError("weights must be finite")
        if any(m == 0.0 for m in weights):
            raise ValidationError("weights must be nonzero")

    def __len__(self) -> int:
        return len(self.weights)

    def as_array(self) -> np.ndarray:
        return np.array(self.weights)

    @property
    def total_variation(self) -> float:
        return float(np.abs(self.weights).sum())

    @property
    def sup_abs(self) -> float:
        return float(np.abs(np.cumsum(self.weights)).max())


@dataclass(frozen=True)
class DpExtremes:
    """Extreme weighted sums over nondecreasing assignments, with witnesses."""
    max_sum: float
    min_sum: float
    argmax: Tuple[int, ...]
    argmin: Tuple[int, ...]

    @property
    def value(self) -> float:
        return max(self.max_sum, -self.min_sum)

    @property
    def optimal(self) -> Tuple[int, ...]:
        """Assignment attaining the norm (the max side on ties)."""
        return self.argmax if self.max_sum >= -self.min_sum else self.argmin


NormFn = Callable[[FunctionLike], float]
PsiLike = Union[CriticalProfile, WeightSequence, PiecewiseLinearFunction]


# ==================== WEIGHTS AND PROFILES ====================

def weights_of(psi: CriticalProfile) -> WeightSequence:
    """Consecutive differences of a nonzero profile."""
    if psi.is_zero:
        raise ValidationError("psi must be nonzero")
    return WeightSequence(tuple(np.diff(psi.values).tolist()))


def profile_of(w: WeightSequence) -> CriticalProfile:
    """Profile realizing a weight sequence; adjacent same-sign weights are merged."""
    merged: List[float] = []
    for m in w.weights:
        if merged and merged[-1] * m > 0:
            merged[-1] += m
        else:
            merged.append(m)
    return CriticalProfile((0.0, *np.cumsum(merged).tolist()))


def _weights_for(psi: PsiLike) -> WeightSequence:
    if isinstance(psi, WeightSequence):
        return psi
    if isinstance(psi, PiecewiseLinearFunction):
        psi = canonicalize(psi)
    return weights_of(psi)


def _star_candidates(phi: FunctionLike) -> np.ndarray:
    if isinstance(phi, CriticalProfile):
        return np.array(star_values(phi))
    return values_of(phi)[::-1].copy()


# ==================== DYNAMIC PROGRAM ====================

def _backtrace(table: np.ndarray, m: np.ndarray, c: np.ndarray) -> Tuple[int, ...]:
    """Recover the assignment behind table[-1, -1], preferring the smallest index."""
    k = len(m)
    j = len(c) - 1
    assignment = [0] * k
    for i in range(k, 0, -1):
        terms = table[i - 1, :j + 1] + m[i - 1] * c[:j + 1]
        j = int(np.flatnonzero(terms == table[i, j])[0])
        assignment[i - 1] = j
    return tuple(assignment)


def dp_extremes(candidates: Sequence[float], w: Union[WeightSequence, Sequence[float]]) -> DpExtremes:
    """
    Max and min of Σ m_i·candidates[j_i] over j_0 <= j_1 <= ... <= j_{k-1}.

    Row i of the table holds, for every j, the best sum of the first i terms
    with j_{i-1} <= j:  best[i][j] = opt(best[i][j-1], best[i-1][j] + m_{i-1}·c[j]).
    Repeated indices are allowed, so idle weights can share a position.

    Args:
        candidates: Ordered candidate values (critical values of φ*)
        w: Weight sequence

    Returns:
        DpExtremes with both extremes and their assignments
    """
    c = np.asarray(candidates, dtype=float)
    if c.size == 0:
        raise ValidationError("candidate list must be nonempty")
    m = w.as_array() if isinstance(w, WeightSequence) else np.asarray(w, dtype=float)
    k, p = len(m), len(c)

    best_max = np.zeros((k + 1, p))
    best_min = np.zeros((k + 1, p))
    for i in range(1, k + 1):
        step = m[i - 1] * c
        best_max[i] = np.maximum.accumulate(best_max[i - 1] + step)
        best_min[i] = np.minimum.accumulate(best_min[i - 1] + step)

    logger.debug(f"DP over {k} weights x {p} candidates")
    return DpExtremes(
        max_sum=float(best_max[k, -1]),
        min_sum=float(best_min[k, -1]),
        argmax=_backtrace(best_max, m, c),
        argmin=_backtrace(best_min, m, c),
    )


def standard_norm(phi: FunctionLike, psi: PsiLike) -> float:
    """
    ‖φ‖_[ψ] computed from critical values.

    A PL φ is used with all its breakpoint values, which gives the same result
    as its canonical profile. ψ may be a profile, a PL function or weights.
    """
    weights = _weights_for(psi)
    return dp_extremes(_star_candidates(phi), weights).value


def standard_evaluator(psi: PsiLike) -> NormFn:
    """Bind ψ and return φ ↦ ‖φ‖_[ψ]."""
    weights = _weights_for(psi)

    def evaluate(phi: FunctionLike) -> float:
        return standard_norm(phi, weights)

    evaluate.__name__ = f"norm[{weights.name}]"
    return evaluate


# ==================== NAMED FAMILIES ====================

def _check_n(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    return int(n)


def make_S() -> WeightSequence:
    return WeightSequence((1.0,), name=NAMED_S)


def make_Lambda() -> WeightSequence:
    return WeightSequence((1.0, -1.0), name=NAMED_LAMBDA)


def make_Sn(n: int) -> WeightSequence:
    """S_n(t) = Σ (-1)^i S(t - 2i): alternating unit weights."""
    n = _check_n(n)
    return WeightSequence(tuple(float((-1) ** i) for i in range(n)), name=f"S_{n}")


def make_Sn_e(n: int, e: Sequence[float]) -> WeightSequence:
    """Perturbed S_n with weights (-1)^i + ε_i."""
    n = _check_n(n)
    if len(e) != n:
        raise ValidationError(f"S_n_e needs {n} perturbations, got {len(e)}")
    weights = tuple((-1) ** i + float(eps) for i, eps in enumerate(e))
    if any(m == 0.0 for m in weights):
        raise ValidationError("a perturbation cancels a weight (vanishing variation)")
    return WeightSequence(weights, name=f"S_{n}^e")


def make_Ln(n: int) -> WeightSequence:
    """L_n(t) = Σ (-1)^i Λ(t - 4i): 2n weights 1, -1, -1, 1, 1, -1, ..."""
    n = _check_n(n)
    weights = []
    for i in range(n):
        sign = float((-1) ** i)
        weights.extend((sign, -sign))
    return WeightSequence(tuple(weights), name=f"L_{n}")


def named_weights(name: str, n: Optional[int] = None, e: Optional[Sequence[float]] = None) -> WeightSequence:
    """Resolve a named family member (S, Lambda, S_n, S_n_e, L_n)."""
    if name == NAMED_S:
        return make_S()
    if name == NAMED_LAMBDA:
        return make_Lambda()
    if name in (NAMED_SN, NAMED_SN_E, NAMED_LN) and n is None:
        raise ValidationError(f"{name} requires n")
    if name == NAMED_SN:
        return make_Sn(n)
    if name == NAMED_SN_E:
        if e is None:
            raise ValidationError("S_n_e requires e")
        return make_Sn_e(n, e)
    if name == NAMED_LN:
        return make_Ln(n)
    raise ValidationError(f"unknown named norm: {name!r}")


def default_catalog() -> List[WeightSequence]:
    """S, Lambda, S_3..S_8 and L_2..L_4 (S_1, S_2 and L_1 repeat S and Lambda)."""
    catalog = [make_S(), make_Lambda()]
    catalog.extend(make_Sn(n) for n in range(3, CATALOG_MAX_SN + 1))
    catalog.extend(make_Ln(n) for n in range(2, CATALOG_MAX_LN + 1))
    return catalog


def norm_spectrum(phi: FunctionLike, family: str, max_n: int, jobs: int = 1) -> List[float]:
    """‖φ‖_[S_n] or ‖φ‖_[L_n] for n = 1..max_n, in order."""
    max_n = _check_n(max_n)
    makers = {'S': make_Sn, 'L': make_Ln}
    if family not in makers:
        raise ValidationError(f"unknown spectrum family: {family!r}")
    weights = [makers[family](n) for n in range(1, max_n + 1)]

    def evaluate(w: WeightSequence) -> float:
        return standard_norm(phi, w)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(evaluate, weights))
    return [evaluate(w) for w in weights]


# ==================== CLASSIC NORMS ====================

def sup_norm(phi: FunctionLike) -> float:
    return sup_abs(phi)


def range_norm(phi: FunctionLike) -> float:
    values = values_of(phi)
    return float(values.max() - values.min())


def tv_norm(phi: FunctionLike) -> float:
    return total_variation(phi)


def tail_seminorm(phi: FunctionLike) -> float:
    """lim |φ(t)| for t → +∞ (a seminorm)."""
    return float(abs(values_of(phi)[-1]))


ASYM_WEIGHTS = WeightSequence((2.0, -1.0), name='asym')


def asym_norm(phi: FunctionLike) -> float:
    """
    max over t1 <= t2 of |2φ(t1) - φ(t2)|.

    Evaluated on the forward values of φ, not on φ*, so it is not invariant
    under orientation-reversing reparametrizations.
    """
    return dp_extremes(values_of(phi), ASYM_WEIGHTS).value


CLASSIC_EVALUATORS = {
    'sup': sup_norm,
    'range': range_norm,
    'tv': tv_norm,
    'tail': tail_seminorm,
    'asym': asym_norm,
}


def classic_norm(name: str) -> NormFn:
    if name not in CLASSIC_EVALUATORS:
        raise ValidationError(f"unknown classic norm: {name!r}")
    return CLASSIC_EVALUATORS[name]


# ==================== COMBINATORS ====================

def linear_combo(norms: Sequence[NormFn], coeffs: Sequence[float]) -> NormFn:
    """Σ a_i·N_i with every a_i > 0."""
    if not norms or len(norms) != len(coeffs):
        raise ValidationError("need one positive coefficient per norm")
    if any(a <= 0 for a in coeffs):
        raise ValidationError("coefficients must be strictly positive")
    pairs = list(zip(norms, (float(a) for a in coeffs)))

    def evaluate(phi: FunctionLike) -> float:
        return float(sum(a * norm(phi) for norm, a in pairs))

    return evaluate


def sup_family(norms: Sequence[NormFn]) -> NormFn:
    """Pointwise max of a finite family."""
    if not norms:
        raise ValidationError("the family must be nonempty")
    family = list(norms)

    def evaluate(phi: FunctionLike) -> float:
        return max(norm(phi) for norm in family)

    return evaluate


def monotone_compose(norms: Sequence[NormFn], p: float = 2.0) -> NormFn:
    """ℓ_p norm of the vector of norm values (monotone on the positive orthant)."""
    if not norms:
        raise ValidationError("the family must be nonempty")
    if not p >= 1:
        raise ValidationError(f"p must be >= 1, got {p!r}")
    family = list(norms)

    def evaluate(phi: FunctionLike) -> float:
        return float(np.linalg.norm([norm(phi) for norm in family], ord=p))

    return evaluate


def sup_tail_norm(k: float) -> NormFn:
    """max|φ| + k·lim|φ(t)|; for k = 1 this is not a positive combination of standard norms."""
    if k < 0:
        raise ValidationError("k must be nonnegative")
    if k == 0:
        return sup_norm
    return linear_combo([sup_norm, tail_seminorm], [1.0, k])


# ==================== NORM BOUNDS ====================

S_PROFILE = CriticalProfile((0.0, 1.0))
LAMBDA_PROFILE = CriticalProfile((0.0, 1.0, 0.0))


@dataclass
class BoundingReport:
    """Lower and upper bounds valid for any RPI-norm, next to its value."""
    lower: float
    value: float
    upper: float
    compact: bool

    @property
    def holds(self) -> bool:
        slack = 1e-9 * max(1.0, abs(self.upper))
        return self.lower - slack <= self.value <= self.upper + slack


def bounding_check(norm: NormFn, phi: CriticalProfile) -> BoundingReport:
    """
    Bounds of an RPI-norm in terms of its values on S and Lambda.

    General functions: lim|φ|·N(S) <= N(φ) <= V_φ·N(S).
    Compact support:   max|φ|·N(Λ) <= N(φ) <= ½·V_φ·N(Λ).
    """
    value = norm(phi)
    variation = total_variation(phi)
    if phi.is_compact:
        n_lambda = norm(LAMBDA_PROFILE)
        return BoundingReport(sup_abs(phi) * n_lambda, value, 0.5 * variation * n_lambda, True)
    n_s = norm(S_PROFILE)
    return BoundingReport(abs(phi.limit) * n_s, value, variation * n_s, False)
