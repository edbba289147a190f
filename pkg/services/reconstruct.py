"""
Recover a compactly supported function, up to reparametrization and global
sign, from standard-norm evaluations only.

The pipeline reads the S_n spectrum until it stabilizes at n = l(φ), then
perturbs each weight of S_l and reads the critical values of φ* off the
one-sided derivatives of the norm.
"""
import logging
import math
import threading
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_N_CAP, DEFAULT_TOL
from constants import ABS_TOL_FLOOR, HALVING_FACTOR, INITIAL_EPSILON, MAX_HALVINGS
from services.norms import WeightSequence, make_Sn, make_Sn_e, standard_norm
from services.profiles import CriticalProfile, total_variation
from utils.errors import CapacityError, NumericalError, ValidationError
from utils.halving import HalvingResult, shrink_until_stable

logger = logging.getLogger(__name__)


# ==================== ORACLES ====================

class NormOracle(ABC):
    """Black box answering ‖φ‖_[ψ] for weight sequences of ψ, and nothing else."""

    @abstractmethod
    def evaluate(self, weights: WeightSequence) -> float:
        """Return the norm of the hidden function for the given weights."""

    @property
    @abstractmethod
    def calls(self) -> int:
        """Number of evaluations answered so far."""


class CountingOracle(NormOracle):
    """
    Oracle around any evaluation callable, counting and logging every request.

    The counter and history are shared by concurrent callers and guarded by
    a lock.
    """

    def __init__(self, evaluate_fn: Callable[[WeightSequence], float]):
        self._evaluate_fn = evaluate_fn
        self._lock = threading.Lock()
        self._calls = 0
        self._history: List[Tuple[Tuple[float, ...], float]] = []

    def evaluate(self, weights: WeightSequence) -> float:
        value = float(self._evaluate_fn(weights))
        with self._lock:
            self._calls += 1
            self._history.append((weights.weights, value))
            call_number = self._calls
        logger.debug(f"Oracle request #{call_number}: {weights.name} {weights.weights} -> {value!r}")
        return value

    @property
    def calls(self) -> int:
        with self._lock:
            return self._calls

    @property
    def history(self) -> List[Tuple[Tuple[float, ...], float]]:
        with self._lock:
            return list(self._history)


class ProfileOracle(CountingOracle):
    """Exact oracle over a hidden canonical profile."""

    def __init__(self, hidden: CriticalProfile):
        if hidden.is_zero:
            raise ValidationError("the hidden profile must be nonzero")
        super().__init__(lambda weights: standard_norm(hidden, weights))


# ==================== REPORT ====================

@dataclass
class ReconstructionReport:
    """Outcome of an oracle-only reconstruction."""
    profile: CriticalProfile
    l: int
    derivatives: List[float]
    oracle_calls: int
    epsilon_used: float
    diagnostics: Dict[str, object] = field(default_factory=dict)
    # ‖φ‖ = ‖-φ‖ for every norm, so the sign is never recoverable
    sign_ambiguous: bool = True

    def to_dict(self) -> dict:
        return {
            'profile': list(self.profile.values),
            'l': self.l,
            'derivatives': list(self.derivatives),
            'oracle_calls': self.oracle_calls,
            'epsilon_used': self.epsilon_used,
            'sign_ambiguous': self.sign_ambiguous,
            'diagnostics': dict(self.diagnostics),
        }


# ==================== SPECTRUM AND l(φ) ====================

def sn_spectrum(oracle: NormOracle, n_max: int) -> List[float]:
    """oracle(S_n) for n = 1..n_max."""
    if n_max < 1:
        raise ValidationError("n_max must be at least 1")
    return [oracle.evaluate(make_Sn(n)) for n in range(1, n_max + 1)]


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= max(tol * abs(b), ABS_TOL_FLOOR)


def _scan_spectrum(oracle: NormOracle, n_cap: int, tol: float, paranoid: int) -> Tuple[int, List[float]]:
    if n_cap < 2:
        raise ValidationError("n_cap must be at least 2")
    if paranoid < 0:
        raise ValidationError("paranoid must be nonnegative")
    reach = 2 + paranoid
    spectrum: List[float] = []

    def s(n: int) -> float:
        while len(spectrum) < n:
            spectrum.append(oracle.evaluate(make_Sn(len(spectrum) + 1)))
        return spectrum[n - 1]

    if s(1) <= 0:
        raise ValidationError("the hidden function must be nonzero")
    for n in range(1, n_cap + 1):
        if all(_close(s(n), s(n + j), tol) for j in range(1, reach + 1)):
            logger.info(f"S_n spectrum stable from n = {n}: {spectrum}")
            return n, spectrum
    raise CapacityError(f"S_n spectrum did not stabilize up to n_cap = {n_cap}", capacity=n_cap)


def detect_l(oracle: NormOracle, n_cap: int = DEFAULT_N_CAP, tol: float = DEFAULT_TOL, paranoid: int = 0) -> int:
    """
    Smallest N whose S_N value agrees with S_{N+2+paranoid}.

    Below l(φ) the spectrum may repeat a value once but gains at least the
    separation margin every two steps, and from l(φ) on it is constant, so
    a two-step window identifies l(φ) using S_1 .. S_{l+2}.

    Raises:
        CapacityError: if no N <= n_cap qualifies
    """
    l, _ = _scan_spectrum(oracle, n_cap, tol, paranoid)
    return l


# ==================== VALUE EXTRACTION ====================

def _extract(
    oracle: NormOracle,
    l: int,
    tol: float,
    base: float,
    epsilon0: float,
    jobs: int,
) -> List[HalvingResult]:
    def derivative(i: int) -> HalvingResult:
        def estimate(eps: float) -> float:
            e = np.zeros(l)
            e[i] = eps
            return (oracle.evaluate(make_Sn_e(l, e)) - base) / eps

        return shrink_until_stable(
            estimate, epsilon0, tol,
            factor=HALVING_FACTOR, max_halvings=MAX_HALVINGS, label=f"derivative {i}",
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(derivative, range(l)))
    return [derivative(i) for i in range(l)]


def extract_values(
    oracle: NormOracle,
    l: int,
    tol: float = DEFAULT_TOL,
    base: Optional[float] = None,
    epsilon0: Optional[float] = None,
    jobs: int = 1,
) -> Tuple[List[float], float]:
    """
    One-sided derivatives ∂‖φ‖_[S_l^e]/∂ε_i at e = 0.

    ε ↦ ‖φ‖_[S_l^{ε·e_i}] is a maximum of linear functions, so once the
    difference quotients at ε and ε/2 agree the function is linear on [0, ε]
    and the quotient is the derivative. Each derivative equals s·φ*(t_i) for
    one global sign s.

    Args:
        oracle: Norm oracle of the hidden function
        l: Number of separating points (from detect_l)
        tol: Relative agreement tolerance of the halving loop
        base: oracle(S_l) if already known
        epsilon0: Initial ε (defaults to 1/4)
        jobs: Worker threads for the l derivatives

    Returns:
        (derivatives, smallest ε used)
    """
    if l < 1:
        raise ValidationError("extract_values needs l >= 1")
    if base is None:
        base = oracle.evaluate(make_Sn(l))
    results = _extract(oracle, l, tol, base, epsilon0 or INITIAL_EPSILON, jobs)
    return [r.value for r in results], min(r.step for r in results)


def initial_epsilon(spectrum: Sequence[float], l: int) -> float:
    """
    Largest power of two not above min(1/4, gap/(4·l·S_1)).

    gap = S_l - S_{l-1} (or S_1 when l = 1) is at least the separation margin,
    and S_1 = max|φ|.
    """
    gap = spectrum[l - 1] - spectrum[l - 2] if l >= 2 else spectrum[0]
    bound = min(INITIAL_EPSILON, gap / (4 * l * spectrum[0]))
    if not bound > 0:
        return INITIAL_EPSILON
    return 2.0 ** math.floor(math.log2(bound))


# ==================== REBUILD ====================

def rebuild(derivatives: Sequence[float]) -> CriticalProfile:
    """
    Profile (0, reversed derivatives, 0) realized by the sum of sigmoids
    D_{l-1}·S(t) + Σ_j (D_{l-j-1} - D_{l-j})·S(t - 2j).
    """
    if not derivatives:
        raise ValidationError("derivatives must be nonempty")
    if all(d == 0 for d in derivatives):
        raise ValidationError("all derivatives vanish")
    raw = (0.0, *reversed([float(d) for d in derivatives]), 0.0)
    profile = CriticalProfile.from_values(raw)
    if len(profile) != len(raw):
        logger.warning(f"Rebuilt values {raw} do not alternate; reduced to {profile.values}")
    return profile


def _sign_normalized(profile: CriticalProfile) -> CriticalProfile:
    if len(profile) > 1 and profile.values[1] < 0:
        return CriticalProfile(tuple(-v if v else 0.0 for v in profile.values))
    return profile


# ==================== PIPELINE ====================

def reconstruct(
    oracle: NormOracle,
    tol: float = DEFAULT_TOL,
    n_cap: int = DEFAULT_N_CAP,
    paranoid: int = 0,
    epsilon0: Optional[float] = None,
    jobs: int = 1,
) -> ReconstructionReport:
    """
    Detect l, extract the critical values of φ* and rebuild the profile.

    Raises:
        NumericalError: if the rebuilt profile fails its self-checks
    """
    calls_before = oracle.calls
    l, spectrum = _scan_spectrum(oracle, n_cap, tol, paranoid)
    base = spectrum[l - 1]
    eps = epsilon0 if epsilon0 is not None else initial_epsilon(spectrum, l)
    logger.info(f"Detected l = {l}, S_l = {base!r}, starting epsilon {eps!r}")

    results = _extract(oracle, l, tol, base, eps, jobs)
    derivatives = [r.value for r in results]
    profile = _sign_normalized(rebuild(derivatives))

    alternating = sum((-1) ** i * d for i, d in enumerate(derivatives))
    slack = max(tol, 1e-9) * max(1.0, base) * (l + 1)
    sum_residual = abs(alternating - base)
    variation_residual = abs(total_variation(profile) - 2 * base)
    if sum_residual > slack or variation_residual > slack:
        raise NumericalError(
            f"reconstruction failed its self-check (alternating sum residual {sum_residual:.3e}, "
            f"variation residual {variation_residual:.3e})",
            last_value=base,
        )

    report = ReconstructionReport(
        profile=profile,
        l=l,
        derivatives=derivatives,
        oracle_calls=oracle.calls - calls_before,
        epsilon_used=min(r.step for r in results),
        diagnostics={
            'spectrum': spectrum,
            'halvings': [r.halvings for r in results],
            'alternating_sum_residual': sum_residual,
            'variation_residual': variation_residual,
            'alternation_defect': len(profile) != l + 2,
        },
    )
    logger.info(f"Reconstructed {profile.values} with {report.oracle_calls} oracle calls")
    return report


def verify_reconstruction(phi: CriticalProfile, report: ReconstructionReport, eps: float) -> bool:
    """
    True iff the recovered profile is within eps of ±phi in index-aligned
    total variation distance (different lengths never match).
    """
    recovered = np.array(report.profile.values)
    original = np.array(phi.values)
    if recovered.shape != original.shape:
        return False
    distance = min(np.abs(original - recovered).sum(), np.abs(original + recovered).sum())
    return bool(distance <= eps)
