from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def enumerate_points(parts, K):
    """Every n in N_0^d with sum n_j parts_j <= K, by nested loops."""
    if not parts:
        return [()]
    head, rest = parts[0], parts[1:]
    return [(n,) + tail for n in range(K // head + 1) for tail in enumerate_points(rest, K - n * head)]


def level_counts(parts, K):
    counts = [0] * (K + 1)
    for n in enumerate_points(parts, K):
        counts[sum(a * b for a, b in zip(n, parts))] += 1
    return counts


@pytest.fixture
def half():
    return Fraction(1, 2)
