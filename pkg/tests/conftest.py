"""Shared fixtures: the running example, seeded generators and document files."""
import json

import numpy as np
import pytest

from services.profiles import CriticalProfile, sample_profile, separation_margin

# Profile used throughout the examples: interior extrema 3, 1, 2
RUNNING_EXAMPLE = (0.0, 3.0, 1.0, 2.0, 0.0)


@pytest.fixture
def running_example():
    return CriticalProfile(RUNNING_EXAMPLE)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_profiles(seed, count, compact=None, max_len=12):
    """Seeded profiles on the 1/4 grid in [-10, 10]; compact=None mixes both kinds."""
    gen = np.random.default_rng(seed)
    profiles = []
    for _ in range(count):
        kind = bool(gen.integers(2)) if compact is None else compact
        profiles.append(sample_profile(gen, max_len=max_len, compact=kind))
    return profiles


def random_float_profiles(seed, count, max_len=12, margin=0.1):
    """Seeded compact profiles with uniform float values in [-10, 10] and separation margin >= margin."""
    gen = np.random.default_rng(seed)
    profiles = []
    while len(profiles) < count:
        k = int(gen.integers(1, max_len - 1))
        raw = [0.0, *gen.uniform(-10.0, 10.0, size=k).tolist(), 0.0]
        p = CriticalProfile.from_values(raw)
        if not p.is_zero and separation_margin(p) >= margin:
            profiles.append(p)
    return profiles


@pytest.fixture
def write_doc(tmp_path):
    """Write a JSON document into tmp_path and return its path as a string."""
    counter = {'n': 0}

    def write(doc):
        counter['n'] += 1
        path = tmp_path / f"doc{counter['n']}.json"
        path.write_text(json.dumps(doc), encoding='utf-8')
        return str(path)

    return write


@pytest.fixture
def profile_doc(write_doc):
    def write(values):
        return write_doc({'function': {'format': 'profile', 'values': list(values)}})

    return write
