"""Rooted flags, flag families and flag-product coefficients.

A flag is a tournament on ``0..k-1`` whose first ``r`` vertices are roots.
The product coefficient ``b_r(F1, F2; J)`` is computed combinatorially: glue
the two flags along their roots, orient every pair of non-roots coming from
different flags both ways, and add up the injective densities of the
resulting tournaments in ``J``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import combinations
from math import comb

import numpy as np

from .density import t_inj
from .exact import format_rational
from .tournaments import Tournament, canonical, enumerate_tournaments, parse_tournament

MAX_FLAG_K = 6
MAX_PRODUCT_M = 6


class CompatibilityError(ValueError):
    """Raised when two flags do not share the same root tournament."""


class AppendixMismatch(AssertionError):
    """A recomputed coefficient differs from the embedded reference table."""

    def __init__(self, j, family, i, k, got, expected):
        self.j, self.family, self.i, self.k = j, family, i, k
        self.got, self.expected = got, expected
        super().__init__(
            f"MISMATCH({j}, {family}, {i + 1}, {k + 1}, got={format_rational(got)}, "
            f"expected={format_rational(expected)})"
        )


@dataclass(frozen=True)
class Flag:
    body: Tournament
    r: int

    def __post_init__(self):
        if not 0 <= self.r <= self.body.n:
            raise ValueError(f"root count {self.r} out of range for a {self.body.n}-vertex flag")

    @property
    def k(self) -> int:
        return self.body.n

    @property
    def root(self) -> Tournament | None:
        return self.body.induced(range(self.r)) if self.r else None

    def encode(self) -> str:
        return f"f{self.r}:{self.body.encode()}"

    def arcs(self, one_based: bool = True) -> list:
        off = 1 if one_based else 0
        return [(u + off, v + off) for u, v in self.body.arcs()]

    def __repr__(self):
        return f"Flag({self.encode()!r})"


def parse_flag(text: str) -> Flag:
    s = text.strip()
    if not s.startswith("f") or ":" not in s:
        raise ValueError(f"flag must look like f<r>:<tournament>, got {text!r}")
    head, body = s[1:].split(":", 1)
    try:
        r = int(head)
    except ValueError:
        raise ValueError(f"bad root count in flag {text!r}") from None
    return Flag(parse_tournament(body), r)


@dataclass(frozen=True)
class FlagFamily:
    """All flags of a fixed size over a fixed root tournament, in a fixed order."""

    root: Tournament
    k: int
    members: tuple
    name: str = ""

    @property
    def r(self) -> int:
        return self.root.n

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def label(self) -> str:
        return self.name or f"F_{self.k}({self.root.encode()})"


def family_size(r: int, k: int) -> int:
    return 2 ** (r * (k - r) + comb(k - r, 2))


def enumerate_family(root: Tournament, k: int) -> FlagFamily:
    """Every flag of size ``k`` extending ``root``.

    Order: the orientation bits of the non-root pairs, read in the row-major
    pair order of the text encoding, count upwards in binary.  Bit ``1`` on
    pair ``(i, j)``, ``i < j``, means ``i -> j``.
    """
    r = root.n
    if not 1 <= r <= k <= MAX_FLAG_K:
        raise ValueError(f"need 1 <= v(R) <= k <= {MAX_FLAG_K}, got v(R)={r}, k={k}")
    free = [(i, j) for i, j in combinations(range(k), 2) if j >= r]
    base = np.zeros((k, k), dtype=np.uint8)
    base[:r, :r] = root.adj
    members = []
    for mask in range(1 << len(free)):
        a = base.copy()
        for pos, (i, j) in enumerate(free):
            if (mask >> (len(free) - 1 - pos)) & 1:
                a[i, j] = 1
            else:
                a[j, i] = 1
        members.append(Flag(Tournament(a), r))
    return FlagFamily(root, k, tuple(members))


def _load_json(name: str):
    return json.loads(resources.files("qrt").joinpath("data", name).read_text())


@lru_cache(maxsize=None)
def pictured_family(name: str) -> FlagFamily:
    """The families ``F1 = F_3(TT_2)``, ``F2 = F_4(TT_3)``, ``F3 = F_4(C_3)``.

    Members come from the arc lists in ``data/flag_figures.json``; each must
    extend the stated root and together they must exhaust the family.
    """
    figures = _load_json("flag_figures.json")
    key = name.upper().replace("^", "")
    if key not in figures:
        raise KeyError(f"unknown pictured family {name!r}; expected one of {sorted(figures)}")
    spec = figures[key]
    root = parse_tournament(spec["root"])
    k = spec["k"]
    members = []
    for arc_list in spec["members"]:
        arcs = [tuple(int(x) for x in a.split("->")) for a in arc_list]
        flag = Flag(Tournament.from_arcs(k, arcs, one_based=True), root.n)
        if flag.root != root:
            raise ValueError(f"{key}: member {flag.encode()} does not extend root {root.encode()}")
        members.append(flag)
    if set(members) != set(enumerate_family(root, k).members) or len(members) != family_size(root.n, k):
        raise ValueError(f"{key}: pictured members do not form the whole family")
    return FlagFamily(root, k, tuple(members), key)


def glue_completions(f1: Flag, f2: Flag) -> list:
    """All tournaments obtained by gluing ``f1`` and ``f2`` along their roots."""
    if f1.r != f2.r or f1.root != f2.root:
        raise CompatibilityError(f"flags {f1.encode()} and {f2.encode()} have different roots")
    r, k1, k2 = f1.r, f1.k, f2.k
    n = k1 + k2 - r
    base = np.zeros((n, n), dtype=np.uint8)
    base[:k1, :k1] = f1.body.adj
    idx2 = list(range(r)) + list(range(k1, n))
    base[np.ix_(idx2, idx2)] = f2.body.adj
    free = [(a, b) for a in range(r, k1) for b in range(k1, n)]
    out = []
    for mask in range(1 << len(free)):
        a = base.copy()
        for pos, (u, v) in enumerate(free):
            if (mask >> (len(free) - 1 - pos)) & 1:
                a[u, v], a[v, u] = 1, 0
            else:
                a[u, v], a[v, u] = 0, 1
        out.append(Tournament(a))
    return out


@lru_cache(maxsize=None)
def _t_inj_cached(c: Tournament, j: Tournament) -> Fraction:
    return t_inj(c, j)


@lru_cache(maxsize=65536)
def product_coefficients(f1: Flag, f2: Flag, m: int) -> dict:
    """``{J: b_r(F1, F2; J)}`` over the ``m``-vertex classes ``J``."""
    need = f1.k + f2.k - f1.r
    if not need <= m <= MAX_PRODUCT_M:
        raise ValueError(f"m must lie in {need}..{MAX_PRODUCT_M} for these flags, got {m}")
    comps = [canonical(c) for c in glue_completions(f1, f2)]
    out = {}
    for j in enumerate_tournaments(m):
        out[j] = sum((_t_inj_cached(c, j) for c in comps), Fraction(0))
    return out


@dataclass(frozen=True)
class CoefficientTable:
    """``b(F_i, F_j; J)`` for one family and every ``m``-vertex class ``J``."""

    family: FlagFamily
    m: int

    def entry(self, i: int, j: int) -> dict:
        return product_coefficients(self.family[i], self.family[j], self.m)

    def matrix(self, target: Tournament) -> list:
        """The ``|family| x |family|`` matrix ``B(J)`` for one class ``J``."""
        key = canonical(target)
        t = len(self.family)
        return [[self.entry(i, j)[key] for j in range(t)] for i in range(t)]


def coefficient_table(family: FlagFamily, m: int = 5) -> CoefficientTable:
    return CoefficientTable(family, m)


# ---------------------------------------------------------------- reference tables

APPENDIX_FAMILIES = {"B21": "F1", "B32": "F2", "B33": "F3"}


@lru_cache(maxsize=None)
def load_appendix() -> dict:
    """``{name: {table: matrix}}`` with exact Fraction entries."""
    raw = _load_json("appendix.json")
    scale = Fraction(raw["scale"])
    return {
        name: {key: [[scale * x for x in row] for row in rows] for key, rows in tabs.items()}
        for name, tabs in raw["tables"].items()
    }


def recomputed_tables(j: Tournament) -> dict:
    """``{"B21": B(F1; J), "B32": B(F2; J), "B33": B(F3; J)}``."""
    return {
        key: coefficient_table(pictured_family(fam), 5).matrix(j)
        for key, fam in APPENDIX_FAMILIES.items()
    }


def appendix_tables(check: bool = True) -> dict:
    """Recompute all 36 reference matrices, keyed ``{table: {name: matrix}}``.

    With ``check`` every entry is compared with the embedded reference data
    and the first difference raises :class:`AppendixMismatch`.
    """
    from .catalog import resolve_catalog

    cat = resolve_catalog()
    ref = load_appendix()
    out: dict = {key: {} for key in APPENDIX_FAMILIES}
    for name in ref:
        got = recomputed_tables(cat.get(name))
        for key in APPENDIX_FAMILIES:
            out[key][name] = got[key]
            if check:
                _compare(name, key, got[key], ref[name][key])
    return out


def _compare(name, key, got, expected):
    for i, (grow, erow) in enumerate(zip(got, expected)):
        for k, (g, e) in enumerate(zip(grow, erow)):
            if g != e:
                raise AppendixMismatch(name, key, i, k, g, e)
    if len(got) != len(expected):
        raise AppendixMismatch(name, key, len(expected), 0, Fraction(len(got)), Fraction(len(expected)))


# ---------------------------------------------------------------- semantic side


def root_flag(root: Tournament) -> Flag:
    return Flag(root, root.n)


def integrated_product(f1: Flag, f2: Flag, w):
    """``int t_r(F1 . F2, W)`` over the roots, by direct block enumeration.

    ``t_r(F1 . F2)`` is ``t_r(F1) t_r(F2) / t_r(R)`` where ``t_r(R) != 0`` and
    zero elsewhere.  Independent of the glue/``t_inj`` route.
    """
    from itertools import product

    from .tournamenton import rooted_t

    if f1.r != f2.r or f1.root != f2.root:
        raise CompatibilityError("flags have different roots")
    rf = root_flag(f1.root)
    total = Fraction(0)
    for blocks in product(range(w.k), repeat=f1.r):
        base = rooted_t(rf, w, blocks)
        if not base:
            continue
        weight = Fraction(1)
        for b in blocks:
            weight *= w.weights[b]
        total += weight * rooted_t(f1, w, blocks) * rooted_t(f2, w, blocks) / base
    return total
