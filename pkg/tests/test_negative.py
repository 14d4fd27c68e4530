from fractions import Fraction
from math import factorial

import pytest

from oracles import regular_count_labelled_brute, t_blowup_brute, t_step_brute
from qrt.catalog import resolve_catalog
from qrt.exact import poly_eval
from qrt.negative import (
    THRESHOLD,
    NoSignChange,
    decimal_matches,
    find_crossing,
    h9_check,
    h9_hand_count,
    reference_tournament,
    reference_data,
    regular7_search,
    regular_classes,
    regular_labelled,
    uz_polynomial,
    uz_report,
)
from qrt.tournamenton import blend, constant_half, from_tournament, t_step, u_blend
from qrt.tournaments import Tournament, automorphism_count, canonical, is_regular


def test_h9_value_three_ways():
    cat = resolve_catalog()
    c3 = Tournament.cyclic3()
    assert h9_check() == THRESHOLD
    assert h9_hand_count() == THRESHOLD
    assert t_blowup_brute(cat["H9"].adj.tolist(), c3.adj.tolist()) == THRESHOLD
    # W_C3 is not the constant 1/2 tournamenton
    c4 = resolve_catalog()["H6"]
    assert t_step(c4, from_tournament(c3)) != t_step(c4, constant_half())


def test_uz_polynomials():
    rep = uz_report(check=True)
    assert set(rep.polynomials) == {"H12", "H18", "H19"}
    u = u_blend()
    cat = resolve_catalog()
    for name, poly in rep.polynomials.items():
        assert poly == uz_polynomial(name)
        # independent evaluation at a few rational z through the brute oracle
        for z in (Fraction(0), Fraction(1, 5), Fraction(1, 2)):
            w = u.specialize(z)
            assert poly_eval(poly, z) == t_step_brute(cat[name].adj.tolist(), w.weights, w.values)
        # the random value at z = 0
        assert poly_eval(poly, 0) == THRESHOLD
    assert len(rep.evaluations) == 5 and all(e.ok for e in rep.evaluations)
    sides = {e.above_threshold for e in rep.evaluations}
    assert sides == {True, False}


def test_regular_labelled_count_small():
    for n in (3, 5):
        assert sum(1 for _ in regular_labelled(n)) == regular_count_labelled_brute(n)
    assert all(is_regular(t) for t in regular_labelled(5))


def test_orbit_sum_over_regular7_classes():
    classes = regular_classes(7)
    labelled = sum(1 for _ in regular_labelled(7))
    assert sum(factorial(7) // automorphism_count(c) for c in classes) == labelled
    assert len(classes) == 3


def test_regular7_search():
    results = regular7_search("H18")
    h18 = resolve_catalog()["H18"].adj.tolist()
    for r in results:
        assert r.density == t_blowup_brute(h18, r.tournament.adj.tolist())
    winners = [r for r in results if r.exceeds_threshold]
    assert len(winners) == 1
    ref = reference_data()["regular7"]
    best = winners[0]
    assert canonical(reference_tournament()) == best.tournament
    assert is_regular(reference_tournament())
    assert best.density == Fraction(439, 351232)
    assert decimal_matches(best.density, ref["decimal"], ref["decimal_tolerance"])
    assert not decimal_matches(best.density, ref["decimal"], "1e-12")


def test_find_crossing():
    cat = resolve_catalog()
    w0, w1 = u_blend().specialize(Fraction(1, 3)), u_blend().specialize(Fraction(1, 2))
    tol = Fraction(1, 10**9)
    z = find_crossing(cat["H12"], w0, w1, tol)
    assert 0 < z < 1
    assert abs(t_step(cat["H12"], blend(w0, w1, z)) - THRESHOLD) <= tol
    assert z == Fraction(18257, 32768)


def test_find_crossing_without_sign_change():
    cat = resolve_catalog()
    c3 = from_tournament(Tournament.cyclic3())
    with pytest.raises(NoSignChange) as err:
        find_crossing(cat["H9"], constant_half(), c3)
    assert err.value.code == "NO_SIGN_CHANGE"
