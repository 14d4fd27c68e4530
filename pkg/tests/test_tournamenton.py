import random
from fractions import Fraction
from math import factorial

import pytest

from oracles import t_blowup_brute, t_step_brute
from qrt.catalog import resolve_catalog
from qrt.density import t_half, t_inj
from qrt.exact import Polynomial
from qrt.flags import Flag, pictured_family
from qrt.tournamenton import (
    StepTournamenton,
    blend,
    constant_half,
    degrees,
    density_vector,
    from_tournament,
    induced_density,
    in_degrees,
    is_regular,
    parse_tournamenton,
    random_regular_step,
    random_step,
    rooted_t,
    t_blowup,
    t_step,
    u_blend,
)
from qrt.tournaments import (
    Tournament,
    c3_plus_sink,
    c3_plus_source,
    cyclic4,
    enumerate_tournaments,
)

HALF = Fraction(1, 2)
C3, TT3 = Tournament.cyclic3(), Tournament.transitive(3)


def small_patterns(max_n=5):
    return [t for n in range(1, max_n + 1) for t in enumerate_tournaments(n)]


def test_validation():
    with pytest.raises(ValueError):
        StepTournamenton([Fraction(1, 2), Fraction(1, 3)], [[HALF, HALF], [HALF, HALF]])
    with pytest.raises(ValueError):
        StepTournamenton([1], [[Fraction(1, 3)]])
    with pytest.raises(ValueError):
        StepTournamenton([HALF, HALF], [[HALF, 1], [1, HALF]])
    with pytest.raises(ValueError):
        StepTournamenton([HALF, HALF], [[HALF, 2], [-1, HALF]])
    with pytest.raises(ValueError):
        StepTournamenton([0, 1], [[HALF, HALF], [HALF, HALF]])


def test_constant_half():
    w = constant_half()
    for h in small_patterns():
        assert t_step(h, w) == t_half(h)
    assert is_regular(w)
    assert t_step(C3, w) == Fraction(1, 8)


def test_from_tournament():
    cat = resolve_catalog()
    assert is_regular(from_tournament(C3))
    assert t_step(cat["H9"], from_tournament(C3)) == Fraction(1, 1024)
    assert t_step(C3, from_tournament(Tournament.transitive(5))) < Fraction(1, 8)
    assert degrees(from_tournament(TT3)).out_degrees == (Fraction(5, 6), HALF, Fraction(1, 6))
    assert not degrees(from_tournament(TT3)).is_regular


def test_step_density_matches_brute_force():
    rng = random.Random(11)
    for _ in range(15):
        w = random_step(rng)
        for h in [C3, TT3, cyclic4(), resolve_catalog()["H13"]]:
            assert t_step(h, w) == t_step_brute(h.adj.tolist(), w.weights, w.values)


def test_blowup_fast_path_matches_brute_force():
    for host in [C3, Tournament.transitive(4), cyclic4(), Tournament.from_bits(5, "1011001110")]:
        for h in small_patterns(4) + [resolve_catalog()["H18"]]:
            assert t_blowup(h, host) == t_blowup_brute(h.adj.tolist(), host.adj.tolist())


def test_u_blend():
    u = u_blend()
    assert u.specialize(0) == StepTournamenton([Fraction(1, 3)] * 3, [[HALF] * 3] * 3)
    assert u.specialize(HALF) == from_tournament(C3)
    rep = degrees(u)
    assert rep.is_regular and all(d == HALF for d in rep.out_degrees)
    cat = resolve_catalog()
    assert t_step(cat["H12"], u) == Polynomial(
        [Fraction(1, 1024), 0, 0, 0, Fraction(-1, 96), 0, Fraction(7, 108), 0, Fraction(1, 18)]
    )


def test_u_blend_even_powers():
    u = u_blend()
    for h in small_patterns(5):
        p = t_step(h, u)
        coeffs = p.coeffs if isinstance(p, Polynomial) else (p,)
        assert all(c == 0 for c in coeffs[1::2]), h


def test_blend_construction():
    half = constant_half()
    w = blend(half, half, Fraction(1, 3))
    for h in small_patterns(4):
        assert t_step(h, w) == t_half(h)
    with pytest.raises(ValueError):
        blend(half, half, 0)
    with pytest.raises(ValueError):
        blend(half, half, 1)
    rng = random.Random(3)
    for _ in range(5):
        w0, w1 = random_regular_step(rng, max_blocks=4), random_regular_step(rng, max_blocks=4)
        for z in (Fraction(1, 5), Fraction(2, 3)):
            assert is_regular(blend(w0, w1, z))


def test_blend_is_polynomial_in_z():
    # interpolate through v(H)+1 points, compare with an extra point and the limits
    rng = random.Random(8)
    w0, w1 = random_step(rng, max_blocks=3), random_step(rng, max_blocks=3)
    h = TT3
    zs = [Fraction(i, 7) for i in range(1, 5)]
    ys = [t_step(h, blend(w0, w1, z)) for z in zs]

    def lagrange(x):
        total = Fraction(0)
        for i, (zi, yi) in enumerate(zip(zs, ys)):
            term = yi
            for j, zj in enumerate(zs):
                if i != j:
                    term *= (x - zj) / (zi - zj)
            total += term
        return total

    assert lagrange(Fraction(5, 7)) == t_step(h, blend(w0, w1, Fraction(5, 7)))
    assert lagrange(0) == t_step(h, w0)
    assert lagrange(1) == t_step(h, w1)


def test_rooted_density_basics():
    f1 = pictured_family("F1")
    assert rooted_t(f1[0], constant_half(), (0, 0)) == Fraction(1, 8)
    root_only = Flag(Tournament.from_bits(2, "0"), 2)
    w = from_tournament(C3)
    assert rooted_t(root_only, w, (1, 0)) == 1
    assert rooted_t(root_only, w, (0, 1)) == 0
    with pytest.raises(ValueError):
        rooted_t(root_only, w, (0,))


def test_parse_tournamenton():
    assert parse_tournamenton("half") == constant_half()
    assert parse_tournamenton("wt:C3") == from_tournament(C3)
    assert parse_tournamenton("uz@1/2") == from_tournament(C3)
    w = parse_tournamenton("blend(wt:t3:101, blend(half,half,1/2), 1/3)")
    assert w.k == 5 and is_regular(w)
    for bad in ["quarter", "uz@2", "blend(half,half)", "wt:t3:1"]:
        with pytest.raises(ValueError):
            parse_tournamenton(bad)


def test_random_generators_are_seeded():
    a = [random_step(random.Random(5)) for _ in range(3)]
    b = [random_step(random.Random(5)) for _ in range(3)]
    assert a == b
    rng = random.Random(9)
    for _ in range(20):
        w = random_step(rng)
        assert 1 <= w.k <= 5
        assert all(x.denominator <= 16 for x in w.weights)
        assert all(x.denominator <= 16 for row in w.values for x in row)
        assert is_regular(random_regular_step(rng))


def test_degree_mean_and_induced_density():
    rng = random.Random(4)
    for _ in range(10):
        w = random_step(rng)
        rep = degrees(w)
        assert sum(x * d for x, d in zip(w.weights, rep.out_degrees)) == HALF
        assert all(a + b == 1 for a, b in zip(rep.out_degrees, in_degrees(w)))
        j = cyclic4()
        assert induced_density(j, w) == factorial(4) // 1 * t_step(j, w)  # aut(C4) = 1
        vec = density_vector(w, 4)
        assert sum(vec.values()) == 1


def test_sink_source_example():
    w = from_tournament(TT3)
    lhs = 2 * t_step(c3_plus_sink(), w) + 6 * t_step(Tournament.transitive(4), w)
    assert lhs == sum(x * d**3 for x, d in zip(w.weights, in_degrees(w)))
    lhs = 2 * t_step(c3_plus_source(), w) + 6 * t_step(Tournament.transitive(4), w)
    assert lhs == sum(x * d**3 for x, d in zip(w.weights, degrees(w).out_degrees))


def test_t_to_tinj_small():
    w = random_step(random.Random(2))
    d5 = density_vector(w, 5)
    assert t_step(C3, w) == sum(t_inj(C3, j) * v for j, v in d5.items())
