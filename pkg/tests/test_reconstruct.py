import logging
from concurrent.futures import ThreadPoolExecutor

import pytest

from services.norms import make_Sn, make_Sn_e, standard_norm
from services.profiles import (
    ZERO_PROFILE, CriticalProfile, l_of, separation_margin, star_values, sup_abs,
    total_variation,
)
from services.reconstruct import (
    CountingOracle, ProfileOracle, ReconstructionReport, detect_l, extract_values,
    initial_epsilon, rebuild, reconstruct, sn_spectrum, verify_reconstruction,
)
from tests.conftest import RUNNING_EXAMPLE, random_float_profiles, random_profiles
from utils.errors import CapacityError, NumericalError, ValidationError
from utils.halving import HalvingExhaustedError


def profile(*values):
    return CriticalProfile(values)


class TestOracles:
    def test_profile_oracle_counts(self, running_example):
        oracle = ProfileOracle(running_example)
        assert sn_spectrum(oracle, 4) == [3.0, 3.0, 4.0, 4.0]
        assert oracle.calls == 4
        assert [weights for weights, _ in oracle.history][-1] == (1.0, -1.0, 1.0, -1.0)

    def test_zero_hidden(self):
        with pytest.raises(ValidationError):
            ProfileOracle(ZERO_PROFILE)
        with pytest.raises(ValidationError):
            detect_l(CountingOracle(lambda w: 0.0))

    def test_concurrent_counter(self, running_example):
        oracle = ProfileOracle(running_example)
        requests = [make_Sn(1 + i % 5) for i in range(1000)]
        with ThreadPoolExecutor(max_workers=8) as pool:
            list(pool.map(oracle.evaluate, requests))
        assert oracle.calls == 1000
        assert len(oracle.history) == 1000

    def test_spectrum_rejects(self, running_example):
        with pytest.raises(ValidationError):
            sn_spectrum(ProfileOracle(running_example), 0)


class TestDetectL:
    @pytest.mark.parametrize("values,expected", [
        (RUNNING_EXAMPLE, 3),
        ((0.0, 5.0, 0.0), 1),
        ((0.0, 1.0, 0.0, 1.0, 0.0), 3),
    ])
    def test_examples(self, values, expected):
        assert detect_l(ProfileOracle(CriticalProfile(values))) == expected

    def test_reads_l_plus_two_values(self, running_example):
        oracle = ProfileOracle(running_example)
        assert detect_l(oracle) == 3
        assert oracle.calls == 5

    def test_paranoid_window(self, running_example):
        oracle = ProfileOracle(running_example)
        assert detect_l(oracle, paranoid=2) == 3
        assert oracle.calls == 7

    def test_capacity(self):
        with pytest.raises(CapacityError) as info:
            detect_l(CountingOracle(lambda w: float(len(w))), n_cap=5)
        assert info.value.capacity == 5
        assert isinstance(info.value, NumericalError)

    @pytest.mark.parametrize("kwargs", [{'n_cap': 1}, {'paranoid': -1}])
    def test_invalid_settings(self, running_example, kwargs):
        with pytest.raises(ValidationError):
            detect_l(ProfileOracle(running_example), **kwargs)

    def test_random_profiles(self):
        for p in random_profiles(81, 300, compact=True):
            assert detect_l(ProfileOracle(p)) == l_of(p)

    def test_float_profiles(self):
        for p in random_float_profiles(84, 3000):
            assert detect_l(ProfileOracle(p)) == l_of(p)


class TestExtractValues:
    @pytest.mark.parametrize("values,l,expected", [
        (RUNNING_EXAMPLE, 3, [2.0, 1.0, 3.0]),
        ((0.0, -3.0, -1.0, -2.0, 0.0), 3, [2.0, 1.0, 3.0]),
        ((0.0, 1.0, 0.0), 1, [1.0]),
    ])
    def test_examples(self, values, l, expected):
        derivatives, step = extract_values(ProfileOracle(CriticalProfile(values)), l)
        assert derivatives == pytest.approx(expected)
        assert step <= 0.25

    def test_needs_positive_l(self, running_example):
        with pytest.raises(ValidationError):
            extract_values(ProfileOracle(running_example), 0)

    def test_halving_exhausted(self):
        # every perturbed request jumps by 1/2, so the quotient never settles
        oracle = CountingOracle(lambda w: 1.0 + (0.5 if w.name.endswith('^e') else 0.0))
        with pytest.raises(HalvingExhaustedError) as info:
            extract_values(oracle, 1)
        assert isinstance(info.value, NumericalError)

    def test_initial_epsilon(self):
        assert initial_epsilon([3.0, 3.0, 4.0, 4.0, 4.0], 3) == 2.0 ** -6
        assert initial_epsilon([5.0, 5.0, 5.0], 1) == 0.25

    def test_single_difference_below_threshold(self):
        for p in random_float_profiles(85, 300):
            l = l_of(p)
            eps = 0.9 * separation_margin(p) / (2 * l * sup_abs(p))
            base = standard_norm(p, make_Sn(l))
            expected = star_values(p)[1:-1]
            derivatives = []
            for i in range(l):
                e = [0.0] * l
                e[i] = eps
                derivatives.append((standard_norm(p, make_Sn_e(l, e)) - base) / eps)
            sign = 1.0 if derivatives[0] * expected[0] > 0 else -1.0
            assert derivatives == pytest.approx([sign * v for v in expected], rel=1e-7, abs=1e-7)


class TestRebuild:
    def test_running_example(self):
        assert rebuild([2.0, 1.0, 3.0]).values == RUNNING_EXAMPLE

    def test_alternation_defect(self, caplog):
        with caplog.at_level(logging.WARNING, logger='services.reconstruct'):
            assert rebuild([2.0, 1.0]).values == (0.0, 2.0, 0.0)
        assert "do not alternate" in caplog.text

    @pytest.mark.parametrize("derivatives", [[], [0.0, 0.0]])
    def test_rejects(self, derivatives):
        with pytest.raises(ValidationError):
            rebuild(derivatives)


class TestReconstruct:
    def test_running_example(self, running_example):
        report = reconstruct(ProfileOracle(running_example))
        assert isinstance(report, ReconstructionReport)
        assert report.profile.values == RUNNING_EXAMPLE
        assert report.l == 3
        assert report.derivatives == pytest.approx([2.0, 1.0, 3.0])
        assert report.sign_ambiguous
        assert report.diagnostics['spectrum'] == [3.0, 3.0, 4.0, 4.0, 4.0]
        assert report.diagnostics['alternation_defect'] is False

    def test_negated_input_matches_up_to_sign(self):
        hidden = profile(0.0, -3.0, -1.0, -2.0, 0.0)
        report = reconstruct(ProfileOracle(hidden))
        assert report.profile.values == RUNNING_EXAMPLE
        assert verify_reconstruction(hidden, report, 1e-9)

    def test_threshold_needs_no_halving(self, running_example):
        oracle = ProfileOracle(running_example)
        report = reconstruct(oracle, epsilon0=1e-3)
        l = report.l
        assert report.diagnostics['halvings'] == [0, 0, 0]
        assert report.oracle_calls == (l + 2) + 2 * l
        assert report.epsilon_used == 1e-3

    def test_round_trip_within_budget(self):
        for p in random_profiles(82, 500, compact=True):
            report = reconstruct(ProfileOracle(p))
            l = l_of(p)
            assert report.l == l
            assert verify_reconstruction(p, report, 1e-6 * max(1.0, total_variation(p)))
            assert report.diagnostics['halvings'] == [0] * l
            assert report.oracle_calls == (l + 2) + sum(2 + h for h in report.diagnostics['halvings'])

    def test_round_trip_on_float_profiles(self):
        for p in random_float_profiles(86, 500):
            report = reconstruct(ProfileOracle(p))
            l = l_of(p)
            halvings = report.diagnostics['halvings']
            assert report.l == l
            assert verify_reconstruction(p, report, 1e-6)
            assert report.oracle_calls == (l + 2) + sum(2 + h for h in halvings)
            assert report.oracle_calls <= (l + 2) + l * (2 + 2 * max(halvings))

    def test_jobs_agree(self):
        for p in random_profiles(83, 50, compact=True):
            serial = reconstruct(ProfileOracle(p))
            threaded = reconstruct(ProfileOracle(p), jobs=4)
            assert threaded.profile == serial.profile
            assert threaded.derivatives == serial.derivatives
            assert threaded.oracle_calls == serial.oracle_calls

    def test_self_check_failure(self, running_example):
        # bends the derivative of the first weight only
        oracle = CountingOracle(
            lambda w: standard_norm(running_example, w) + 0.5 * (w.weights[0] - 1.0)
        )
        with pytest.raises(NumericalError):
            reconstruct(oracle)

    def test_report_dict(self, running_example):
        payload = reconstruct(ProfileOracle(running_example)).to_dict()
        assert payload['profile'] == list(RUNNING_EXAMPLE)
        assert set(payload) == {
            'profile', 'l', 'derivatives', 'oracle_calls', 'epsilon_used', 'sign_ambiguous', 'diagnostics',
        }


class TestVerifyReconstruction:
    def test_length_mismatch(self, running_example):
        report = reconstruct(ProfileOracle(profile(0.0, 1.0, 0.0)))
        assert not verify_reconstruction(running_example, report, 1.0)
