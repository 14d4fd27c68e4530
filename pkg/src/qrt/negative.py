"""Explicit regular tournamentons on which some 5-vertex densities miss 1/1024.

* ``t(H9, W_C3)`` equals the random value 2**-10 although ``W_C3`` is not 1/2.
* ``U_z`` densities of ``H12``, ``H18``, ``H19`` are polynomials in ``z`` that
  cross 1/1024.
* A regular 7-vertex tournament ``T`` with ``t(H18, W_T) > 1/1024``, found by
  exhaustive search over all regular 7-vertex tournaments.
* A bisection demonstrator for the crossing point of a two-block blend.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import combinations

import numpy as np

from .catalog import resolve_catalog
from .density import as_lincomb, t_half
from .exact import Polynomial, as_rational, format_rational, poly_eval
from .tournamenton import StepTournamenton, blend, from_tournament, t_blowup, t_step, u_blend
from .tournaments import Tournament, canonical, is_regular

THRESHOLD = Fraction(1, 1024)


class VerificationFailure(AssertionError):
    """A recomputed value differs from the reference data."""


class NoSignChange(ValueError):
    code = "NO_SIGN_CHANGE"

    def __init__(self, detail: str):
        super().__init__(f"NO_SIGN_CHANGE: {detail}")


@lru_cache(maxsize=None)
def reference_data() -> dict:
    return json.loads(resources.files("qrt").joinpath("data", "negative.json").read_text())


# ---------------------------------------------------------------- W_C3 and H9


def h9_check() -> Fraction:
    """``t(H9, W_C3)``; equals 1/1024."""
    h9 = resolve_catalog().get("H9")
    return t_step(h9, from_tournament(Tournament.cyclic3()))


def h9_hand_count() -> Fraction:
    """The case analysis by hand: three intervals for the cyclic triple, then
    the three admissible placements of the sink and its predecessor."""
    third, half = Fraction(1, 3), Fraction(1, 2)
    return 3 * third**3 * half**3 * third**2 * (half**7 + half**3 + half**1)


# ---------------------------------------------------------------- U_z


@dataclass(frozen=True)
class UzEvaluation:
    pattern: str
    z: Fraction
    value: Fraction
    expected: Fraction

    @property
    def ok(self) -> bool:
        return self.value == self.expected

    @property
    def above_threshold(self) -> bool:
        return self.value > THRESHOLD


@dataclass(frozen=True)
class UzReport:
    polynomials: dict  # name -> Polynomial
    evaluations: tuple


def uz_polynomial(name: str) -> Polynomial:
    return t_step(resolve_catalog().get(name), u_blend())


def uz_report(check: bool = True) -> UzReport:
    """Recompute the three ``U_z`` polynomials and the five evaluations.

    With ``check`` any difference from the reference data raises
    :class:`VerificationFailure` naming the coefficient or evaluation.
    """
    ref = reference_data()
    polys = {}
    for name, coeffs in ref["uz_polynomials"].items():
        got = uz_polynomial(name)
        want = Polynomial(as_rational(c) for c in coeffs)
        if check and got != want:
            for i in range(max(len(got.coeffs), len(want.coeffs))):
                if got.coeff(i) != want.coeff(i):
                    raise VerificationFailure(
                        f"t({name}, U_z): coefficient of z^{i} is {format_rational(got.coeff(i))}, "
                        f"expected {format_rational(want.coeff(i))}"
                    )
        polys[name] = got
    evals = []
    for item in ref["uz_evaluations"]:
        z = as_rational(item["z"])
        ev = UzEvaluation(item["pattern"], z, poly_eval(polys[item["pattern"]], z), as_rational(item["value"]))
        if check and not ev.ok:
            raise VerificationFailure(
                f"t({ev.pattern}, U_{format_rational(z)}) = {format_rational(ev.value)}, "
                f"expected {format_rational(ev.expected)}"
            )
        evals.append(ev)
    return UzReport(polys, tuple(evals))


# ---------------------------------------------------------------- 7-vertex search


@dataclass(frozen=True)
class SearchResult:
    tournament: Tournament
    density: Fraction

    @property
    def exceeds_threshold(self) -> bool:
        return self.density > THRESHOLD


def regular_labelled(n: int):
    """Yield every labelled regular tournament on ``n`` (odd) vertices.

    Pairs are oriented in row-major order; a branch is cut as soon as some
    vertex exceeds out-degree ``(n-1)/2`` or can no longer reach it.
    """
    if n % 2 == 0:
        return
    d = (n - 1) // 2
    pairs = list(combinations(range(n), 2))
    remaining = [n - 1] * n  # undecided pairs per vertex
    out = [0] * n
    adj = np.zeros((n, n), dtype=np.uint8)

    def rec(p):
        if p == len(pairs):
            yield Tournament(adj.copy())
            return
        i, j = pairs[p]
        remaining[i] -= 1
        remaining[j] -= 1
        for i_wins in (True, False):
            a, b = (i, j) if i_wins else (j, i)
            out[a] += 1
            adj[a, b] = 1
            if out[a] <= d and out[i] + remaining[i] >= d and out[j] + remaining[j] >= d:
                yield from rec(p + 1)
            adj[a, b] = 0
            out[a] -= 1
        remaining[i] += 1
        remaining[j] += 1

    yield from rec(0)


def regular_classes(n: int) -> list:
    """Canonical representatives of the regular ``n``-vertex classes."""
    seen = {}
    for t in regular_labelled(n):
        c = canonical(t)
        seen.setdefault(c, None)
    return sorted(seen, key=lambda t: -t.code())


def reference_tournament() -> Tournament:
    rows = reference_data()["regular7"]["matrix"]
    return Tournament([[int(ch) for ch in row] for row in rows])


def regular7_search(pattern: str = "H18") -> list:
    """Exact ``t(pattern, W_T)`` for every regular 7-vertex class ``T``."""
    h = resolve_catalog().get(pattern)
    return [SearchResult(t, t_blowup(h, t)) for t in regular_classes(7)]


def decimal_matches(value: Fraction, decimal: str, tol: str) -> bool:
    return abs(Decimal(value.numerator) / Decimal(value.denominator) - Decimal(decimal)) <= Decimal(tol)


# ---------------------------------------------------------------- crossing


def find_crossing(h, w0: StepTournamenton, w1: StepTournamenton, tol=Fraction(1, 10**9), max_iter: int = 200) -> Fraction:
    """Bisect for ``z`` with ``|t(H, blend(W0, W1, z)) - t(H, 1/2)| <= tol``.

    ``t(H, W0)`` and ``t(H, W1)`` must lie strictly on opposite sides of the
    random value; the blend tends to ``W0`` as ``z -> 0`` and ``W1`` as ``z -> 1``.
    """
    h = as_lincomb(h)
    tol = as_rational(tol)
    target = t_half(h)
    f0 = t_step(h, w0) - target
    f1 = t_step(h, w1) - target
    if not isinstance(f0, Fraction) or not isinstance(f1, Fraction):
        raise TypeError("find_crossing needs rational-valued tournamentons")
    if f0 * f1 >= 0:
        raise NoSignChange(
            f"t(H,W0) - t(H,1/2) = {format_rational(f0)} and t(H,W1) - t(H,1/2) = {format_rational(f1)}"
        )
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(max_iter):
        mid = (lo + hi) / 2
        fm = t_step(h, blend(w0, w1, mid)) - target
        if abs(fm) <= tol:
            return mid
        if (fm < 0) == (f0 < 0):
            lo = mid
        else:
            hi = mid
    raise RuntimeError("bisection did not reach the tolerance")  # pragma: no cover
