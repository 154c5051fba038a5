"""Sanity checks for the seeded example generators."""

import math
import random
from fractions import Fraction as F

from shockpgf import (
    classify_support,
    is_completely_monotone,
    mass_on,
    tail_sequence,
    tail_validity,
)
from shockpgf.families import (
    random_admissible_params,
    random_mid_mass,
    random_unit_support,
    random_with_mass_beyond_two,
)


def test_unit_support_family():
    for seed in range(50):
        q = random_unit_support(random.Random(seed))
        assert q.exact and q.total_mass == 1, seed
        assert mass_on(q, 0, 1, include_hi=True) == 1, seed
        assert classify_support(q).verdict == "sdfr_support_in_unit", seed


def test_admissible_params_family():
    for seed in range(50):
        p = random_admissible_params(random.Random(seed))
        assert isinstance(p.alpha, F) and isinstance(p.beta, F), seed
        assert 0 < p.alpha < F(2, 7) and F(1, 3) <= p.beta < 1, seed
        # stays inside the region where every tail step is monotone
        assert p.alpha * p.beta * (3 + 2 * p.alpha) <= 1 - p.beta, seed


def test_mid_mass_family():
    for seed in range(50):
        q = random_mid_mass(random.Random(seed))
        assert q.exact and q.total_mass == 1, seed
        assert mass_on(q, 1, 2) > 0, seed
        assert mass_on(q, 2, math.inf, include_lo=True) == 0, seed
        t = tail_sequence(q, 80)
        assert tail_validity(t)[0], seed
        ok, first = is_completely_monotone(t, 40, 0)
        assert not ok and first is not None, seed


def test_beyond_two_family():
    for seed in range(50):
        q = random_with_mass_beyond_two(random.Random(seed))
        assert q.exact and q.total_mass == 1, seed
        assert mass_on(q, 2, math.inf, include_lo=True) >= F(1, 8), seed
        assert classify_support(q).verdict == "not_pgf_mass_at_or_beyond_2", seed


def test_generators_are_deterministic():
    a = random_mid_mass(random.Random(123))
    b = random_mid_mass(random.Random(123))
    assert a == b
    assert random_unit_support(random.Random(4)) == random_unit_support(random.Random(4))
