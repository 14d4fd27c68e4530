"""Homomorphism counts and densities between finite tournaments."""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from math import comb, perm
from typing import Iterable, Mapping, Union

from . import _kernels
from .exact import as_rational, format_rational
from .tournaments import (
    Tournament,
    canonical,
    enumerate_tournaments,
    parse_tournament,
)


class LinComb:
    """Formal linear combination of tournaments with rational coefficients.

    Tournaments are stored as canonical representatives, so isomorphic terms
    merge; zero coefficients are dropped.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable = ()):
        acc: dict = {}
        for coeff, t in terms:
            key = canonical(t)
            acc[key] = acc.get(key, Fraction(0)) + as_rational(coeff)
        self._terms = {t: c for t, c in acc.items() if c != 0}

    @classmethod
    def of(cls, t: Union["LinComb", Tournament]) -> "LinComb":
        return t if isinstance(t, LinComb) else cls([(1, t)])

    @property
    def terms(self) -> list:
        """``(coefficient, tournament)`` pairs, larger tournaments first."""
        return [(c, t) for t, c in sorted(self._terms.items(), key=lambda kv: (-kv[0].n, -kv[0].code()))]

    def max_order(self) -> int:
        return max((t.n for t in self._terms), default=0)

    def __add__(self, other):
        other = LinComb.of(other)
        return LinComb(list(self.items()) + list(other.items()))

    def __neg__(self):
        return LinComb((-c, t) for c, t in self.items())

    def __sub__(self, other):
        return self + (-LinComb.of(other))

    def __mul__(self, scalar):
        s = as_rational(scalar)
        return LinComb((s * c, t) for c, t in self.items())

    __rmul__ = __mul__

    def items(self):
        return [(c, t) for t, c in self._terms.items()]

    def __eq__(self, other):
        return isinstance(other, LinComb) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        return f"LinComb({format_lincomb(self)!r})"


def format_lincomb(h: LinComb, names: Mapping | None = None) -> str:
    if not len(h):
        return "0"
    out = []
    for i, (c, tour) in enumerate(h.terms):
        label = names.get(tour, tour.encode()) if names else tour.encode()
        term = f"{format_rational(abs(c))}*{label}"
        if i == 0:
            out.append(("-" if c < 0 else "") + term)
        else:
            out.append(f" {'-' if c < 0 else '+'} {term}")
    return "".join(out)


_TERM_RE = re.compile(r"\s*([+-])?\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*\s*)?([A-Za-z0-9_:{}]+)\s*")


def parse_lincomb(text: str) -> LinComb:
    """Parse ``"8*C3 + 256*H10"``; a bare name or encoding has coefficient 1."""
    s = text.strip()
    if not s:
        raise ValueError("empty linear combination")
    pos = 0
    terms = []
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse linear combination at column {pos + 1}: {s[pos:]!r}")
        sign, coeff, name = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing '+' or '-' before {name!r}")
        c = as_rational(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        terms.append((c, parse_tournament(name)))
        pos = m.end()
        first = False
    return LinComb(terms)


def as_lincomb(h) -> LinComb:
    if isinstance(h, LinComb):
        return h
    if isinstance(h, Tournament):
        return LinComb.of(h)
    if isinstance(h, str):
        return parse_lincomb(h)
    raise TypeError(f"expected a tournament or linear combination, got {type(h).__name__}")


# ---------------------------------------------------------------- counting


def hom_count(h: Tournament, t: Tournament) -> int:
    """Number of arc-preserving maps ``V(h) -> V(t)``.

    A map out of a tournament that preserves arcs is automatically injective,
    since ``t`` has no loops.
    """
    if h.n > t.n:
        return 0
    return _kernels.hom_count(h.adj, t.adj)


def t(h, host: Tournament) -> Fraction:
    """Homomorphism density ``hom(H, T) / v(T)**v(H)``, linear in ``h``."""
    total = Fraction(0)
    for c, pattern in as_lincomb(h).items():
        total += c * Fraction(hom_count(pattern, host), host.n**pattern.n)
    return total


def t_inj(h, host: Tournament) -> Fraction:
    """Injective homomorphism density; zero when the pattern is larger."""
    total = Fraction(0)
    for c, pattern in as_lincomb(h).items():
        if pattern.n > host.n:
            continue
        total += c * Fraction(hom_count(pattern, host), perm(host.n, pattern.n))
    return total


def t_half(h) -> Fraction:
    """Density in the constant-1/2 tournamenton."""
    return sum(
        (c * Fraction(1, 2 ** comb(p.n, 2)) for c, p in as_lincomb(h).items()),
        Fraction(0),
    )


def degree_identity_check(host: Tournament) -> bool:
    """``v(v-1)^2 == 2 hom(C3) + 6 hom(TT3) + 2 hom(TT2)`` for the host."""
    n = host.n
    lhs = n * (n - 1) ** 2
    rhs = (
        2 * hom_count(Tournament.cyclic3(), host)
        + 6 * hom_count(Tournament.transitive(3), host)
        + 2 * hom_count(Tournament.transitive(2), host)
    )
    return lhs == rhs


def induced_densities(host: Tournament, m: int) -> dict:
    """Probability that a uniform ``m``-subset of ``host`` induces each class."""
    if not 1 <= m <= host.n:
        raise ValueError("m must be between 1 and v(T)")
    counts = {j: 0 for j in enumerate_tournaments(m)}
    for subset in combinations(range(host.n), m):
        counts[canonical(host.induced(subset))] += 1
    total = comb(host.n, m)
    return {j: Fraction(c, total) for j, c in counts.items()}
