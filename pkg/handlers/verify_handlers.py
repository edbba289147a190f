"""verify command: run the invariant suites against one function and random partners."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, List

import numpy as np

from constants import EXIT_NUMERICAL, EXIT_OK
from handlers.cli_config import CliConfig
from handlers.io_handlers import CommandResult, load_function
from services.norms import (
    classic_norm, default_catalog, dp_extremes, make_Lambda, make_Ln, make_S, make_Sn,
    standard_evaluator, standard_norm, sup_tail_norm, weights_of, bounding_check,
)
from services.oracle import brute_force_extremes, integral_norm_estimate, realize_pair
from services.profiles import (
    CriticalProfile, PiecewiseLinearFunction, Reparametrization, add, apply_reparam,
    canonicalize, l_of, negate, sample_profile, scale, separation_margin, star_values,
    sup_abs, total_variation, variation_profiles,
)
from services.pseudodist import sandwich
from services.reconstruct import ProfileOracle, reconstruct, verify_reconstruction
from utils.errors import RpiNormError, ValidationError

logger = logging.getLogger(__name__)

REL_TOL = 1e-9


@dataclass
class CheckResult:
    """Outcome of one invariant check."""
    name: str
    passed: bool
    detail: str = ''


def _close(a: float, b: float, tol: float = REL_TOL) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _random_reparam(rng: np.random.Generator, lo: float, hi: float) -> Reparametrization:
    ts = np.sort(rng.uniform(lo - 1.0, hi + 1.0, size=6))
    vs = np.sort(rng.uniform(lo - 1.0, hi + 1.0, size=6))
    if np.any(np.diff(ts) <= 0) or np.any(np.diff(vs) <= 0):
        return Reparametrization.identity()
    return Reparametrization.from_arrays(ts, vs)


class InvariantSuite:
    """Invariant checks for one nonzero profile against seeded random partners."""

    def __init__(self, phi: CriticalProfile, seed: int, trials: int, refinement: int):
        if phi.is_zero:
            raise ValidationError("verify needs a nonzero function")
        self.phi = phi
        self.realized = PiecewiseLinearFunction.from_profile(phi)
        self.refinement = refinement
        self.rng = np.random.default_rng(seed)
        self.partners = [
            sample_profile(self.rng, max_len=8, compact=bool(self.rng.integers(2)))
            for _ in range(trials)
        ]
        self.reparams = [
            _random_reparam(self.rng, self.realized.ts[0], self.realized.ts[-1]) for _ in range(trials)
        ]
        self.origins = self.rng.uniform(-3.0, 3.0, size=trials)

    def checks(self) -> List[Callable[[], CheckResult]]:
        suite = [
            self.closed_forms,
            self.dp_matches_brute_force,
            self.exchange_property,
            self.sign_invariance,
            self.variation_bound,
            self.norm_bounds,
            self.reparametrization_invariance,
            self.norm_axioms,
            self.integral_cross_check,
            self.distance_sandwich,
        ]
        if len(self.phi) <= 2:
            suite.append(self.monotone_law)
        if self.phi.is_compact:
            suite.extend([self.sn_spectrum, self.ln_convergence, self.no_inner_product, self.reconstruction])
        return suite

    # ---- closed forms and the DP ----

    def closed_forms(self) -> CheckResult:
        s_value = standard_norm(self.phi, make_S())
        lambda_value = standard_norm(self.phi, make_Lambda())
        ok = _close(s_value, classic_norm('sup')(self.phi)) and _close(lambda_value, classic_norm('range')(self.phi))
        return CheckResult('closed_forms', ok, f"S: {s_value!r}, Lambda: {lambda_value!r}")

    def dp_matches_brute_force(self) -> CheckResult:
        candidates = star_values(self.phi)
        families = [make_Sn(n) for n in range(1, 5)] + [
            weights_of(p) for p in self.partners if len(p) <= 5
        ]
        for w in families:
            dp = dp_extremes(candidates, w)
            best, worst = brute_force_extremes(candidates, w)
            if not (_close(dp.max_sum, best) and _close(dp.min_sum, worst)):
                return CheckResult('dp_matches_brute_force', False, f"{w.weights}: DP {dp} vs {best!r}, {worst!r}")
        return CheckResult('dp_matches_brute_force', True, f"{len(families)} weight sequences")

    def exchange_property(self) -> CheckResult:
        for psi in self.partners:
            a, b = standard_norm(self.phi, psi), standard_norm(psi, self.phi)
            if not _close(a, b):
                return CheckResult('exchange_property', False, f"{psi.values}: {a!r} != {b!r}")
        return CheckResult('exchange_property', True)

    def sign_invariance(self) -> CheckResult:
        for psi in self.partners:
            flipped = CriticalProfile(tuple(-v if v else 0.0 for v in psi.values))
            if not _close(standard_norm(self.phi, psi), standard_norm(self.phi, flipped)):
                return CheckResult('sign_invariance', False, f"{psi.values}")
        return CheckResult('sign_invariance', True)

    def variation_bound(self) -> CheckResult:
        for psi in self.partners:
            bound = min(sup_abs(self.phi) * total_variation(psi), sup_abs(psi) * total_variation(self.phi))
            value = standard_norm(self.phi, psi)
            if value > bound * (1 + REL_TOL):
                return CheckResult('variation_bound', False, f"{psi.values}: {value!r} > {bound!r}")
        return CheckResult('variation_bound', True)

    def norm_bounds(self) -> CheckResult:
        evaluators = [standard_evaluator(w) for w in default_catalog()]
        evaluators += [standard_evaluator(p) for p in self.partners]
        evaluators += [classic_norm(name) for name in ('sup', 'range', 'tv', 'asym')]
        evaluators.append(sup_tail_norm(1.0))
        for norm in evaluators:
            report = bounding_check(norm, self.phi)
            if not report.holds:
                return CheckResult('norm_bounds', False, f"{getattr(norm, '__name__', norm)}: {report}")
        return CheckResult('norm_bounds', True, f"{len(evaluators)} norms")

    def monotone_law(self) -> CheckResult:
        for psi in self.partners:
            if not _close(standard_norm(self.phi, psi), sup_abs(self.phi) * sup_abs(psi)):
                return CheckResult('monotone_law', False, f"{psi.values}")
        return CheckResult('monotone_law', True)

    # ---- concrete functions ----

    def reparametrization_invariance(self) -> CheckResult:
        for psi, h in zip(self.partners, self.reparams):
            moved = apply_reparam(self.realized, h)
            recovered = canonicalize(moved).values
            if len(recovered) != len(self.phi) or not np.allclose(recovered, self.phi.values, rtol=0, atol=1e-9):
                return CheckResult('reparametrization_invariance', False, f"profile changed under {h.points}")
            if not _close(standard_norm(moved, psi), standard_norm(self.phi, psi)):
                return CheckResult('reparametrization_invariance', False, f"norm changed under {h.points}")
        return CheckResult('reparametrization_invariance', True)

    def norm_axioms(self) -> CheckResult:
        for psi, origin in zip(self.partners, self.origins):
            norm = standard_evaluator(psi)
            other = PiecewiseLinearFunction.from_profile(psi, spacing=0.75, origin=float(origin))
            total = add(self.realized, other)
            if norm(total) > (norm(self.realized) + norm(other)) * (1 + REL_TOL) + REL_TOL:
                return CheckResult('norm_axioms', False, f"triangle inequality fails with {psi.values}")
            if not _close(norm(scale(self.realized, -2.5)), 2.5 * norm(self.realized)):
                return CheckResult('norm_axioms', False, f"homogeneity fails for {psi.values}")
            difference = total_variation(canonicalize(add(self.realized, negate(other))))
            if abs(norm(self.realized) - norm(other)) > difference * sup_abs(psi) * (1 + REL_TOL) + REL_TOL:
                return CheckResult('norm_axioms', False, f"stability fails with {psi.values}")
        return CheckResult('norm_axioms', True)

    def integral_cross_check(self) -> CheckResult:
        psi = self.partners[0]
        phi_f, psi_f = realize_pair(self.phi, psi)
        value = standard_norm(self.phi, psi)
        estimate = integral_norm_estimate(phi_f, psi_f, [1e-4])[-1]
        ok = estimate <= value + 1e-9 and value - estimate <= 1e-3 * value
        return CheckResult('integral_cross_check', ok, f"{estimate!r} vs {value!r}")

    def distance_sandwich(self) -> CheckResult:
        for psi in self.partners:
            try:
                bounds = sandwich(self.phi, psi, refinement=self.refinement)
            except RpiNormError as e:
                return CheckResult('distance_sandwich', False, str(e))
            if bounds.lower > bounds.upper + 1e-9:
                return CheckResult('distance_sandwich', False, f"{psi.values}: {bounds}")
        return CheckResult('distance_sandwich', True)

    # ---- compact support ----

    def sn_spectrum(self) -> CheckResult:
        l = l_of(self.phi)
        half = total_variation(self.phi) / 2
        values = [standard_norm(self.phi, make_Sn(n)) for n in range(1, l + 4)]
        top = values[l - 1] if l >= 1 else half
        stable = all(_close(v, half) for v in values[max(l, 1) - 1:])
        gaps = all(v <= top - separation_margin(self.phi) + REL_TOL for v in values[:max(l - 1, 0)])
        return CheckResult('sn_spectrum', stable and gaps, f"l = {l}, spectrum {values}")

    def ln_convergence(self) -> CheckResult:
        l = l_of(self.phi)
        variation = total_variation(self.phi)
        values = [standard_norm(self.phi, make_Ln(n)) for n in range(1, l + 3)]
        monotone = all(b >= a - REL_TOL * variation for a, b in zip(values, values[1:]))
        reached = _close(values[l], variation)
        return CheckResult('ln_convergence', monotone and reached, f"L_n values {values}")

    def no_inner_product(self) -> CheckResult:
        positive, negative = variation_profiles(self.realized)
        both = add(positive, negative)
        for w in default_catalog():
            norm = standard_evaluator(w)
            n_phi = norm(self.realized)
            defect = norm(both) ** 2 + n_phi ** 2 - 2 * norm(positive) ** 2 - 2 * norm(negative) ** 2
            if not _close(abs(defect), n_phi ** 2) or n_phi == 0:
                return CheckResult('no_inner_product', False, f"{w.name}: defect {defect!r}")
        return CheckResult('no_inner_product', True)

    def reconstruction(self) -> CheckResult:
        oracle = ProfileOracle(self.phi)
        report = reconstruct(oracle)
        l = report.l
        ok = verify_reconstruction(self.phi, report, 1e-6 * max(1.0, total_variation(self.phi)))
        within_budget = report.oracle_calls <= (l + 2) + l * (2 + 2 * sum(report.diagnostics['halvings']))
        return CheckResult(
            'reconstruction', ok and within_budget,
            f"recovered {list(report.profile.values)} with {report.oracle_calls} calls",
        )


def _run(check: Callable[[], CheckResult]) -> CheckResult:
    try:
        return check()
    except RpiNormError as e:
        return CheckResult(check.__name__, False, f"{type(e).__name__}: {e}")


def cmd_verify(cfg: CliConfig) -> CommandResult:
    f = load_function(cfg.phi)
    phi = f if isinstance(f, CriticalProfile) else canonicalize(f)
    suite = InvariantSuite(phi, cfg.seed, cfg.trials, cfg.refinement)
    checks = suite.checks()

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run, checks))
    else:
        results = [_run(check) for check in checks]

    failed = [r.name for r in results if not r.passed]
    for name in failed:
        logger.warning(f"Invariant check failed: {name}")
    logger.info(f"{len(results) - len(failed)}/{len(results)} checks passed")
    payload = {'passed': not failed, 'checks': [asdict(r) for r in results]}
    return CommandResult(payload, EXIT_NUMERICAL if failed else EXIT_OK)
