from collections import Counter
from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from qrt.sampler import (
    SampleConfig,
    cyclic_triangle_density,
    empirical_density,
    near_regularity_defect,
    sample,
)
from qrt.density import t as hom_density
from qrt.tournamenton import constant_half, from_tournament, parse_tournamenton
from qrt.tournaments import Tournament, automorphism_count, canonical, enumerate_tournaments

# upper 0.1% point of chi-square with 11 degrees of freedom
CHI2_11_999 = 31.264


def test_config_validation():
    with pytest.raises(ValueError):
        SampleConfig(constant_half(), 0, 1)
    with pytest.raises(ValueError):
        SampleConfig(constant_half(), 5, -1)
    with pytest.raises(ValueError):
        SampleConfig(constant_half(), 5, 2**64)


def test_same_seed_same_tournament():
    w = parse_tournamenton("uz@1/3")
    a = sample(SampleConfig(w, 40, 7))
    b = sample(SampleConfig(w, 40, 7))
    c = sample(SampleConfig(w, 40, 8))
    assert a == b and a != c
    assert np.all(a.adj + a.adj.T + np.eye(40, dtype=np.uint8) == 1)


def test_uniform_five_vertex_outcomes():
    # under W = 1/2 every labelled tournament is equally likely, so class J has probability 5!/aut(J)/2^10
    counts = Counter(canonical(sample(SampleConfig(constant_half(), 5, s))) for s in range(5000))
    classes = enumerate_tournaments(5)
    stat = 0.0
    for j in classes:
        expected = 5000 * factorial(5) / automorphism_count(j) / 1024
        stat += (counts[j] - expected) ** 2 / expected
    assert stat < CHI2_11_999


def test_blowup_source_respects_arcs_between_blocks():
    # W_T with T transitive: vertices in different blocks always point down the order
    w = from_tournament(Tournament.transitive(3))
    t = sample(SampleConfig(w, 200, 3))
    assert 0 < cyclic_triangle_density(t) < Fraction(1, 8)


def test_empirical_density():
    t = Tournament.cyclic3()
    assert empirical_density(enumerate_tournaments(1)[0], t, 100, 0) == 1.0
    assert empirical_density(Tournament.transitive(2), t, 50000, 1) == pytest.approx(1 / 3, abs=0.01)
    with pytest.raises(ValueError):
        empirical_density(t, t, 0, 1)


def test_cyclic_triangle_density_matches_hom_count():
    rng = np.random.default_rng(5)
    for _ in range(5):
        t = sample(SampleConfig(constant_half(), 9, int(rng.integers(0, 2**32))))
        assert cyclic_triangle_density(t) == hom_density(Tournament.cyclic3(), t)


def test_defect():
    tt9 = Tournament.transitive(9)
    # out-degrees 0..8; with eps = 1/4 the window is [2.25, 6.75]
    assert near_regularity_defect(tt9, Fraction(1, 4)) == Fraction(5, 9)
    with pytest.raises(ValueError):
        near_regularity_defect(tt9, Fraction(1, 2))


def test_large_samples_concentrate():
    big = sample(SampleConfig(constant_half(), 2000, 1))
    assert abs(cyclic_triangle_density(big) - Fraction(1, 8)) < Fraction(1, 200)
    assert near_regularity_defect(big, Fraction(1, 20)) == 0
    # defect of a skewed source stays away from zero as n grows
    skew = from_tournament(Tournament.transitive(3))
    defects = [near_regularity_defect(sample(SampleConfig(skew, n, 2)), Fraction(1, 20)) for n in (100, 400)]
    assert all(d > Fraction(1, 2) for d in defects)
