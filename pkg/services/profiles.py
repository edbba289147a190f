"""
Almost sigmoidal functions and their canonical profiles.

A function here is piecewise linear: it vanishes on a left half-line, is
constant on a right half-line and interpolates linearly between breakpoints.
PL functions stand in for the C1 classes they approximate. Every norm in this
package depends only on the sequence of values taken at the boundaries of
maximal monotone runs, and RPI-norms are stable under small C1 smoothing, so a
PL representative and its smoothed versions share all norm values.

The canonical profile u_0 = 0, u_1, ..., u_m of a function is that value
sequence; two functions are reparametrizations of each other exactly when
their profiles agree.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from constants import MERGE_TOL
from utils.errors import DomainError, ValidationError

logger = logging.getLogger(__name__)


# ==================== DOMAIN TYPES ====================

@dataclass(frozen=True)
class PiecewiseLinearFunction:
    """
    Breakpoint representation of an almost sigmoidal function.

    points holds (t, v) pairs with strictly increasing t and v_0 = 0. The
    function is 0 left of the first point and v_last right of the last one.
    The empty point list is the zero function.
    """
    points: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        points = tuple((float(t), float(v)) for t, v in self.points)
        object.__setattr__(self, 'points', points)
        if not points:
            return

        ts = np.array([t for t, _ in points])
        vs = np.array([v for _, v in points])
        if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(vs))):
            raise ValidationError("breakpoints must be finite")
        if np.any(np.diff(ts) <= 0):
            raise ValidationError("breakpoint t values must be strictly increasing")
        if vs[0] != 0.0:
            raise ValidationError(f"first breakpoint value must be 0, got {vs[0]!r}")

    @classmethod
    def from_arrays(cls, ts, vs) -> 'PiecewiseLinearFunction':
        return cls(tuple(zip(np.asarray(ts, dtype=float).tolist(),
                             np.asarray(vs, dtype=float).tolist())))

    @classmethod
    def from_profile(
        cls,
        profile: 'CriticalProfile',
        spacing: float = 1.0,
        slope: Optional[float] = None,
        origin: float = 0.0,
    ) -> 'PiecewiseLinearFunction':
        """
        Realize a canonical profile as a concrete PL function.

        Args:
            profile: Profile to realize
            spacing: Distance between consecutive breakpoints (used when slope is None)
            slope: If given, every segment has this absolute slope instead
            origin: t coordinate of the first breakpoint

        Returns:
            A PL function whose canonical profile is `profile`
        """
        if profile.is_zero:
            return ZERO_FUNCTION
        values = np.array(profile.values)
        if slope is None:
            lengths = np.full(len(values) - 1, float(spacing))
        else:
            if slope <= 0:
                raise ValidationError("slope must be positive")
            lengths = np.abs(np.diff(values)) / slope
        ts = origin + np.concatenate(([0.0], np.cumsum(lengths)))
        return cls.from_arrays(ts, values)

    @cached_property
    def ts(self) -> np.ndarray:
        return np.array([t for t, _ in self.points], dtype=float)

    @cached_property
    def vs(self) -> np.ndarray:
        return np.array([v for _, v in self.points], dtype=float)

    @property
    def is_zero(self) -> bool:
        return not self.points or bool(np.all(self.vs == 0.0))

    def evaluate(self, t):
        """Evaluate the function at t (scalar or array)."""
        if not self.points:
            return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
        result = np.interp(t, self.ts, self.vs)
        return float(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True)
class CriticalProfile:
    """
    Canonical value sequence of a reparametrization class.

    values starts with 0 and its consecutive differences strictly alternate in
    sign. (0,) is the zero function; the function has compact support iff the
    last value is 0.
    """
    values: Tuple[float, ...] = (0.0,)

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, 'values', values)
        if not values:
            raise ValidationError("a profile needs at least the initial value 0")
        if not all(np.isfinite(values)):
            raise ValidationError("profile values must be finite")
        if values[0] != 0.0:
            raise ValidationError(f"profile must start at 0, got {values[0]!r}")

        diffs = np.diff(values)
        if np.any(diffs == 0.0):
            raise ValidationError("consecutive profile values must differ")
        if np.any(diffs[1:] * diffs[:-1] > 0):
            raise ValidationError("profile differences must alternate in sign")

    @classmethod
    def from_values(cls, values: Sequence[float], tol: float = MERGE_TOL) -> 'CriticalProfile':
        """Build a profile from any value sequence starting at 0, reducing it first."""
        return cls(reduce_values(values, tol))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_zero(self) -> bool:
        return len(self.values) == 1

    @property
    def is_compact(self) -> bool:
        return abs(self.values[-1]) <= MERGE_TOL

    @property
    def limit(self) -> float:
        """lim φ(t) for t → +∞."""
        return self.values[-1]


@dataclass(frozen=True)
class Reparametrization:
    """
    Orientation-preserving PL bijection of the real line.

    points has strictly increasing t and strictly increasing v; outside the
    points the map continues with slope 1. The empty list is the identity.
    """
    points: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        points = tuple((float(t), float(v)) for t, v in self.points)
        object.__setattr__(self, 'points', points)
        if not points:
            return
        ts = np.array([t for t, _ in points])
        vs = np.array([v for _, v in points])
        if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(vs))):
            raise ValidationError("reparametrization points must be finite")
        if np.any(np.diff(ts) <= 0) or np.any(np.diff(vs) <= 0):
            raise ValidationError("reparametrization must be strictly increasing")

    @classmethod
    def identity(cls) -> 'Reparametrization':
        return cls(())

    @classmethod
    def from_arrays(cls, ts, vs) -> 'Reparametrization':
        return cls(tuple(zip(np.asarray(ts, dtype=float).tolist(),
                             np.asarray(vs, dtype=float).tolist())))

    @cached_property
    def ts(self) -> np.ndarray:
        return np.array([t for t, _ in self.points], dtype=float)

    @cached_property
    def vs(self) -> np.ndarray:
        return np.array([v for _, v in self.points], dtype=float)

    def __call__(self, t):
        return _interp_unit_tails(t, self.ts, self.vs)

    def inverse(self, y):
        return _interp_unit_tails(y, self.vs, self.ts)


ZERO_FUNCTION = PiecewiseLinearFunction(())
ZERO_PROFILE = CriticalProfile((0.0,))

FunctionLike = Union[PiecewiseLinearFunction, CriticalProfile]


def _interp_unit_tails(x, xs: np.ndarray, ys: np.ndarray):
    """Linear interpolation through (xs, ys) continued with slope 1 on both sides."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if len(xs) == 0:
        out = arr.copy()
    else:
        out = np.interp(arr, xs, ys)
        left = arr < xs[0]
        right = arr > xs[-1]
        out[left] = ys[0] + (arr[left] - xs[0])
        out[right] = ys[-1] + (arr[right] - xs[-1])
    return float(out[0]) if np.ndim(x) == 0 else out


def values_of(f: FunctionLike) -> np.ndarray:
    if isinstance(f, CriticalProfile):
        return np.array(f.values)
    return f.vs if f.points else np.zeros(1)


# ==================== CANONICAL FORM ====================

def reduce_values(values: Sequence[float], tol: float = MERGE_TOL) -> Tuple[float, ...]:
    """
    Reduce a value sequence to its alternating form.

    Values within `tol` of the previously kept value are dropped (plateaus and
    input noise), and runs moving in one direction collapse to their endpoint.
    """
    values = [float(v) for v in values]
    if not values:
        raise ValidationError("cannot reduce an empty value list")

    kept = [values[0]]
    for v in values[1:]:
        if abs(v - kept[-1]) <= tol:
            continue
        if len(kept) >= 2 and (kept[-1] - kept[-2]) * (v - kept[-1]) > 0:
            kept[-1] = v
        else:
            kept.append(v)
    return tuple(kept)


def canonicalize(f: PiecewiseLinearFunction) -> CriticalProfile:
    """Canonical profile of a PL function (idempotent on realized profiles)."""
    if not f.points:
        return ZERO_PROFILE
    return CriticalProfile.from_values(f.vs)


def star_values(p: CriticalProfile) -> Tuple[float, ...]:
    """Critical values of φ*(t) = φ(-t) in increasing t order."""
    return tuple(reversed(p.values))


# ==================== ELEMENTARY FUNCTIONALS ====================

def total_variation(p: FunctionLike) -> float:
    return float(np.abs(np.diff(values_of(p))).sum())


def variation_split(p: FunctionLike) -> Tuple[float, float]:
    """Positive and negative variation (V+, V-), with V+ - V- = lim φ."""
    diffs = np.diff(values_of(p))
    return float(diffs[diffs > 0].sum()), float(-diffs[diffs < 0].sum())


def variation_profiles(
    f: PiecewiseLinearFunction,
) -> Tuple[PiecewiseLinearFunction, PiecewiseLinearFunction]:
    """
    Cumulative positive and negative variation functions of f on its own grid.

    Returns:
        (V+<f>, V-<f>), both nondecreasing, with V+<f> - V-<f> = f on the grid
    """
    if not f.points:
        return ZERO_FUNCTION, ZERO_FUNCTION
    diffs = np.diff(f.vs)
    positive = np.concatenate(([0.0], np.cumsum(np.clip(diffs, 0.0, None))))
    negative = np.concatenate(([0.0], np.cumsum(np.clip(-diffs, 0.0, None))))
    return _normalized(f.ts, positive), _normalized(f.ts, negative)


def l_of(p: CriticalProfile) -> int:
    """Minimal number of separating points: the interior alternations."""
    return max(len(p.values) - 2, 0)


def separation_margin(p: CriticalProfile) -> float:
    """Smallest jump between consecutive profile values (0 below two values)."""
    if len(p.values) < 2:
        return 0.0
    return float(np.abs(np.diff(p.values)).min())


def sup_abs(p: FunctionLike) -> float:
    return float(np.abs(values_of(p)).max())


# ==================== ARITHMETIC ====================

def _normalized(ts: np.ndarray, vs: np.ndarray) -> PiecewiseLinearFunction:
    if np.all(vs == 0.0):
        return ZERO_FUNCTION
    return PiecewiseLinearFunction.from_arrays(ts, vs)


def add(f: PiecewiseLinearFunction, g: PiecewiseLinearFunction) -> PiecewiseLinearFunction:
    """Pointwise sum on the merged breakpoint grid."""
    if not f.points:
        return g
    if not g.points:
        return f
    grid = np.union1d(f.ts, g.ts)
    return _normalized(grid, f.evaluate(grid) + g.evaluate(grid))


def scale(f: PiecewiseLinearFunction, factor: float) -> PiecewiseLinearFunction:
    if not f.points or factor == 0:
        return ZERO_FUNCTION
    return _normalized(f.ts, f.vs * float(factor))


def negate(f: PiecewiseLinearFunction) -> PiecewiseLinearFunction:
    return scale(f, -1.0)


# ==================== REPARAMETRIZATION ====================

def apply_reparam(f: PiecewiseLinearFunction, h: Reparametrization) -> PiecewiseLinearFunction:
    """
    Composition f∘h, sampled on h^-1 of f's breakpoints together with h's knots.

    canonicalize(apply_reparam(f, h)) == canonicalize(f) for every valid h.
    """
    if not isinstance(h, Reparametrization):
        raise ValidationError("h must be a Reparametrization")
    if not f.points:
        return ZERO_FUNCTION
    grid = np.union1d(np.atleast_1d(h.inverse(f.ts)), h.ts)
    values = f.evaluate(h(grid))
    # grid[0] <= h^-1(t_first), where f vanishes; round-off must not leak in
    values[0] = 0.0
    return _normalized(grid, values)


def reverse_time(f: PiecewiseLinearFunction) -> PiecewiseLinearFunction:
    """The function t ↦ f(-t); only almost sigmoidal when f has compact support."""
    if not f.points:
        return ZERO_FUNCTION
    if abs(f.vs[-1]) > MERGE_TOL:
        raise DomainError("time reversal requires compact support")
    vs = f.vs[::-1].copy()
    vs[0] = 0.0
    return _normalized(-f.ts[::-1], vs)


# ==================== SAMPLING ====================

def sample_profile(
    rng: np.random.Generator,
    max_len: int = 12,
    compact: bool = True,
    amplitude: float = 10.0,
    step: float = 0.25,
) -> CriticalProfile:
    """
    Draw a random nonzero canonical profile with values on a grid of `step`.

    Grid values keep sums exact in floating point and give a separation
    margin of at least `step`.

    Args:
        rng: numpy random generator
        max_len: Maximum number of profile values (>= 2, >= 3 when compact)
        compact: Whether the profile must end at 0
        amplitude: Values are drawn from [-amplitude, amplitude]
        step: Grid spacing of the values
    """
    free = max_len - (2 if compact else 1)
    if free < 1:
        raise ValidationError("max_len too small for the requested profile kind")
    levels = int(amplitude / step)

    while True:
        k = int(rng.integers(1, free + 1))
        interior = rng.integers(-levels, levels + 1, size=k) * step
        raw = [0.0, *interior.tolist()] + ([0.0] if compact else [])
        profile = CriticalProfile.from_values(raw)
        if not profile.is_zero:
            return profile
