"""Finite labelled tournaments, canonical forms and exhaustive enumeration.

Vertices are 0-based internally.  The text encoding ``t<n>:<bits>`` lists the
pairs ``(i, j)``, ``i < j``, in row-major order; bit ``1`` means ``i -> j``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

MAX_ENUM_N = 7

_ENC_RE = re.compile(r"^t(\d+):([01]*)$")
_TT_RE = re.compile(r"^TT_?(\d+)$", re.IGNORECASE)


class Tournament:
    """Immutable tournament given by a 0/1 adjacency matrix."""

    __slots__ = ("_adj", "_key")

    def __init__(self, adj):
        a = np.array(adj, dtype=np.uint8)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError("adjacency must be a non-empty square matrix")
        if a.max(initial=0) > 1:
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diag(a)):
            raise ValueError("tournaments have no loops")
        if not np.array_equal(a + a.T, 1 - np.eye(a.shape[0], dtype=np.uint8)):
            raise ValueError("exactly one arc is required between every pair of vertices")
        a.setflags(write=False)
        self._adj = a
        self._key = (a.shape[0], a.tobytes())

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Sequence[int]], one_based: bool = False) -> "Tournament":
        a = np.zeros((n, n), dtype=np.uint8)
        off = 1 if one_based else 0
        for u, v in arcs:
            a[u - off, v - off] = 1
        return cls(a)

    @classmethod
    def from_bits(cls, n: int, bits: str) -> "Tournament":
        if len(bits) != n * (n - 1) // 2:
            raise ValueError(f"t{n} encoding needs {n * (n - 1) // 2} bits, got {len(bits)}")
        a = np.zeros((n, n), dtype=np.uint8)
        for (i, j), b in zip(combinations(range(n), 2), bits):
            if b == "1":
                a[i, j] = 1
            elif b == "0":
                a[j, i] = 1
            else:
                raise ValueError(f"bad bit {b!r}")
        return cls(a)

    @classmethod
    def from_code(cls, n: int, code: int) -> "Tournament":
        m = n * (n - 1) // 2
        return cls.from_bits(n, format(code, f"0{m}b") if m else "")

    @classmethod
    def transitive(cls, n: int) -> "Tournament":
        return cls(np.triu(np.ones((n, n), dtype=np.uint8), k=1))

    @classmethod
    def cyclic3(cls) -> "Tournament":
        return cls.from_arcs(3, [(0, 1), (1, 2), (2, 0)])

    # -- basic queries ----------------------------------------------------

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adj(self) -> np.ndarray:
        return self._adj

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def arcs(self) -> list:
        return [(int(u), int(v)) for u, v in zip(*np.nonzero(self._adj))]

    def num_arcs(self) -> int:
        return self.n * (self.n - 1) // 2

    def out_degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1).astype(np.int64)

    def in_degrees(self) -> np.ndarray:
        return self._adj.sum(axis=0).astype(np.int64)

    def bits(self) -> str:
        n = self.n
        return "".join("1" if self._adj[i, j] else "0" for i, j in combinations(range(n), 2))

    def code(self) -> int:
        b = self.bits()
        return int(b, 2) if b else 0

    def encode(self) -> str:
        return f"t{self.n}:{self.bits()}"

    def relabel(self, perm: Sequence[int]) -> "Tournament":
        """Tournament whose vertex ``i`` is vertex ``perm[i]`` of ``self``."""
        p = np.asarray(perm, dtype=np.int64)
        return Tournament(self._adj[np.ix_(p, p)])

    def induced(self, vertices: Sequence[int]) -> "Tournament":
        return self.relabel(list(vertices))

    def __eq__(self, other):
        return isinstance(other, Tournament) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.n <= 12:
            return f"Tournament({self.encode()!r})"
        return f"Tournament(n={self.n})"


# ---------------------------------------------------------------- operations


def reverse(t: Tournament) -> Tournament:
    return Tournament(t.adj.T)


def is_regular(t: Tournament) -> bool:
    if t.n % 2 == 0:
        return False
    return bool(np.all(t.out_degrees() == (t.n - 1) // 2))


def _check_canon_size(n: int) -> None:
    if n > _kernels.MAX_CANON_N:
        raise ValueError(f"exhaustive canonical labelling is limited to n <= {_kernels.MAX_CANON_N}")


def canonical_code(t: Tournament) -> int:
    _check_canon_size(t.n)
    if t.n < 2:
        return 0
    return _kernels.canon_code(t.adj, _kernels.perm_table(t.n))


def canonical_form(t: Tournament) -> str:
    """Lexicographically largest pair-bit string over all relabellings."""
    m = t.n * (t.n - 1) // 2
    return format(canonical_code(t), f"0{m}b") if m else ""


def canonical(t: Tournament) -> Tournament:
    """The canonical representative of the isomorphism class of ``t``."""
    return _canonical_cached(t)


@lru_cache(maxsize=65536)
def _canonical_cached(t: Tournament) -> Tournament:
    return Tournament.from_code(t.n, canonical_code(t))


def is_isomorphic(a: Tournament, b: Tournament) -> bool:
    return a.n == b.n and canonical_code(a) == canonical_code(b)


def automorphism_count(t: Tournament) -> int:
    _check_canon_size(t.n)
    return _aut_cached(t)


@lru_cache(maxsize=65536)
def _aut_cached(t: Tournament) -> int:
    return _kernels.aut_count(t.adj, _kernels.perm_table(t.n))


def enumerate_tournaments(n: int) -> list:
    """One canonical tournament per isomorphism class on ``n`` vertices.

    Classes on ``n`` vertices are obtained by adding a vertex to every class
    on ``n - 1`` vertices in all ``2**(n-1)`` ways and canonicalising.  The
    result is ordered by decreasing canonical encoding, so ``TT_n`` is first.
    """
    if not isinstance(n, int) or not 1 <= n <= MAX_ENUM_N:
        raise ValueError(f"n must be an integer in 1..{MAX_ENUM_N}, got {n!r}")
    return list(_enumerate_cached(n))


@lru_cache(maxsize=None)
def _enumerate_cached(n: int) -> tuple:
    if n == 1:
        return (Tournament(np.zeros((1, 1), dtype=np.uint8)),)
    perms = _kernels.perm_table(n)
    codes = set()
    for base in _enumerate_cached(n - 1):
        a = np.zeros((n, n), dtype=np.uint8)
        a[: n - 1, : n - 1] = base.adj
        for mask in range(1 << (n - 1)):
            for u in range(n - 1):
                if (mask >> u) & 1:
                    a[u, n - 1], a[n - 1, u] = 1, 0
                else:
                    a[u, n - 1], a[n - 1, u] = 0, 1
            codes.add(_kernels.canon_code(a, perms))
    return tuple(Tournament.from_code(n, c) for c in sorted(codes, reverse=True))


def score_sequence(t: Tournament) -> tuple:
    return tuple(sorted(int(d) for d in t.out_degrees()))


# ---------------------------------------------------------------- named tournaments


def cyclic4() -> Tournament:
    """The unique 4-vertex tournament containing a spanning cycle."""
    return canonical(Tournament.from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]))


def c3_plus_sink() -> Tournament:
    return canonical(Tournament.from_arcs(4, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)]))


def c3_plus_source() -> Tournament:
    return canonical(Tournament.from_arcs(4, [(0, 1), (1, 2), (2, 0), (3, 0), (3, 1), (3, 2)]))


def structural_name(name: str):
    """Resolve the catalog-independent names ``TT<k>``, ``C3`` and ``C4``."""
    m = _TT_RE.match(name)
    if m:
        k = int(m.group(1))
        if k < 1:
            raise ValueError("TT_k needs k >= 1")
        return Tournament.transitive(k)
    key = name.upper().replace("_", "")
    if key == "C3":
        return Tournament.cyclic3()
    if key == "C4":
        return cyclic4()
    return None


def parse_tournament(text: str) -> Tournament:
    """Parse ``t<n>:<bits>`` or a name (``TT3``, ``C3``, ``C4``, ``H0``..``H19``)."""
    s = text.strip()
    m = _ENC_RE.match(s)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ValueError("tournaments need at least one vertex")
        return Tournament.from_bits(n, m.group(2))
    named = structural_name(s)
    if named is not None:
        return named
    if re.match(r"^H_?\{?\d+\}?$", s, re.IGNORECASE):
        from .catalog import resolve_catalog

        return resolve_catalog().get(s)
    raise ValueError(f"cannot parse tournament {text!r}")


def labelled_count(n: int) -> int:
    """Number of labelled tournaments on ``n`` vertices."""
    return 2 ** comb(n, 2)


def orbit_size(t: Tournament) -> int:
    return factorial(t.n) // automorphism_count(t)
