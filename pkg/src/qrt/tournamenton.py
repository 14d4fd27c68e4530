"""Step tournamentons: block-constant limit objects over an exact ring.

Values live in :class:`fractions.Fraction` or, for the symbolic family
``U_z``, in :class:`qrt.exact.Polynomial`.  Diagonal blocks are fixed at 1/2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Sequence, Union

from . import _kernels
from .density import LinComb, as_lincomb
from .exact import Polynomial, as_rational, format_rational, poly_eval
from .tournaments import Tournament, automorphism_count, enumerate_tournaments, parse_tournament

HALF = Fraction(1, 2)
Ring = Union[Fraction, Polynomial]


class StepTournamenton:
    """Block weights plus a complementary ``k x k`` value matrix."""

    __slots__ = ("weights", "values", "_rational")

    def __init__(self, weights: Sequence, values: Sequence[Sequence]):
        w = tuple(as_rational(x) for x in weights)
        k = len(w)
        if k == 0:
            raise ValueError("a step tournamenton needs at least one block")
        if any(x <= 0 for x in w):
            raise ValueError("block weights must be positive")
        if sum(w) != 1:
            raise ValueError(f"block weights sum to {format_rational(sum(w))}, not 1")
        vals = tuple(tuple(_ring(x) for x in row) for row in values)
        if len(vals) != k or any(len(row) != k for row in vals):
            raise ValueError("value matrix shape does not match the number of blocks")
        for i in range(k):
            for j in range(i, k):
                if vals[i][j] + vals[j][i] != 1:
                    raise ValueError(f"W({i + 1},{j + 1}) + W({j + 1},{i + 1}) != 1")
        rational = all(isinstance(x, Fraction) for row in vals for x in row)
        if rational and any(not 0 <= x <= 1 for row in vals for x in row):
            raise ValueError("tournamenton values must lie in [0, 1]")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_rational", rational)

    def __setattr__(self, name, value):
        raise AttributeError("StepTournamenton is immutable")

    @property
    def k(self) -> int:
        return len(self.weights)

    @property
    def is_rational(self) -> bool:
        return self._rational

    def specialize(self, z) -> "StepTournamenton":
        """Evaluate polynomial values at ``z``."""
        z = as_rational(z)
        vals = [[poly_eval(x, z) if isinstance(x, Polynomial) else x for x in row] for row in self.values]
        return StepTournamenton(self.weights, vals)

    def __eq__(self, other):
        return isinstance(other, StepTournamenton) and (self.weights, self.values) == (other.weights, other.values)

    def __hash__(self):
        return hash((self.weights, self.values))

    def __repr__(self):
        return f"StepTournamenton(k={self.k})"


def _ring(x) -> Ring:
    if isinstance(x, Polynomial):
        return x.coeffs[0] if x.degree == 0 else (Fraction(0) if x.degree < 0 else x)
    return as_rational(x)


@dataclass(frozen=True)
class RegularityReport:
    is_regular: bool
    out_degrees: tuple


# ---------------------------------------------------------------- constructions


def constant_half() -> StepTournamenton:
    return StepTournamenton([1], [[HALF]])


def from_tournament(t: Tournament) -> StepTournamenton:
    """Equal-weight blow-up: 1 on arc blocks, 0 on reversed blocks, 1/2 inside."""
    k = t.n
    vals = [[HALF if i == j else Fraction(int(t.adj[i, j])) for j in range(k)] for i in range(k)]
    return StepTournamenton([Fraction(1, k)] * k, vals)


def u_blend() -> StepTournamenton:
    """``1/2 + z (2 W_C3 - 1)`` with ``z`` symbolic."""
    c3 = from_tournament(Tournament.cyclic3())
    z = Polynomial.z()
    vals = [[HALF + z * (2 * x - 1) for x in row] for row in c3.values]
    return StepTournamenton(c3.weights, vals)


def blend(w0: StepTournamenton, w1: StepTournamenton, z) -> StepTournamenton:
    """``w1`` rescaled onto ``[0, z]``, ``w0`` onto ``(z, 1]``, 1/2 across."""
    z = as_rational(z)
    if not 0 < z < 1:
        raise ValueError(f"blend parameter must lie in (0, 1), got {format_rational(z)}")
    k1, k0 = w1.k, w0.k
    weights = [z * x for x in w1.weights] + [(1 - z) * x for x in w0.weights]
    vals = []
    for i in range(k1 + k0):
        row = []
        for j in range(k1 + k0):
            if i < k1 and j < k1:
                row.append(w1.values[i][j])
            elif i >= k1 and j >= k1:
                row.append(w0.values[i - k1][j - k1])
            else:
                row.append(HALF)
        vals.append(row)
    return StepTournamenton(weights, vals)


# ---------------------------------------------------------------- densities


def _back_arcs(d: Tournament):
    """For each vertex ``v``, the earlier vertices ``u`` with ``u -> v`` flag."""
    return [[(u, bool(d.adj[u, v])) for u in range(v)] for v in range(d.n)]


def _assignment_sum(back, nvert, weights, values, pinned=()):
    """Sum over block assignments of (free-vertex weights) x (arc values).

    ``pinned`` fixes the blocks of the first ``len(pinned)`` vertices; their
    weights are not included.
    """
    k = len(weights)
    blocks = [0] * nvert
    npin = len(pinned)
    for i, b in enumerate(pinned):
        blocks[i] = b
    zero = 0 * weights[0]

    def factor(v, b):
        f = None
        for u, fwd in back[v]:
            val = values[blocks[u]][b] if fwd else values[b][blocks[u]]
            if not val:
                return zero
            f = val if f is None else f * val
        return f

    # arcs among pinned vertices
    root = None
    for v in range(npin):
        f = factor(v, blocks[v])
        if f is not None:
            if not f:
                return zero
            root = f if root is None else root * f

    def rec(v, acc):
        if v == nvert:
            return acc
        total = zero
        for b in range(k):
            blocks[v] = b
            f = factor(v, b)
            if f is not None and not f:
                continue
            term = weights[b] if f is None else weights[b] * f
            nxt = term if acc is None else acc * term
            total = total + rec(v + 1, nxt)
        return total

    if npin == nvert:
        return root if root is not None else 1 + zero
    return rec(npin, root)


def _scaled(w: StepTournamenton):
    """Integer weights/values with their common denominators (rational ``w``)."""
    s = lcm(*(x.denominator for x in w.weights))
    q = lcm(*(x.denominator for row in w.values for x in row))
    ints_w = [int(x * s) for x in w.weights]
    ints_v = [[int(x * q) for x in row] for row in w.values]
    return s, q, ints_w, ints_v


def _single(d: Tournament, w: StepTournamenton, pinned=()) -> Ring:
    back = _back_arcs(d)
    nfree = d.n - len(pinned)
    if w.is_rational:
        s, q, iw, iv = _scaled(w)
        num = _assignment_sum(back, d.n, iw, iv, pinned)
        return Fraction(num, s**nfree * q ** d.num_arcs())
    return _normalise(_assignment_sum(back, d.n, list(w.weights), w.values, pinned))


def _normalise(x) -> Ring:
    if isinstance(x, Polynomial):
        return _ring(x)
    return as_rational(x)


def t_step(d, w: StepTournamenton) -> Ring:
    """Exact homomorphism density ``t(D, W)`` by block-assignment enumeration."""
    total: Ring = Fraction(0)
    for c, pattern in as_lincomb(d).items():
        total = total + c * _single(pattern, w)
    return _normalise(total)


def t_blowup(d, host: Tournament) -> Fraction:
    """``t(D, W_T)`` via a histogram of block maps by same-block arc count.

    A map into the blocks of ``W_T`` contributes ``2**-s`` where ``s`` is the
    number of pattern arcs landing inside one block, or zero if some arc is
    reversed by ``T``.  Agrees with ``t_step(D, from_tournament(T))``.
    """
    total = Fraction(0)
    for c, pattern in as_lincomb(d).items():
        hist = _kernels.wt_histogram(pattern.adj, host.adj)
        top = len(hist) - 1
        num = sum(int(h) << (top - s) for s, h in enumerate(hist))
        total += c * Fraction(num, (1 << top) * host.n**pattern.n)
    return total


def rooted_t(flag, w: StepTournamenton, root_blocks: Sequence[int]) -> Ring:
    """``t_r(F, W)`` with the root variables pinned to the given blocks."""
    body, r = flag.body, flag.r
    if len(root_blocks) != r:
        raise ValueError(f"flag has {r} roots but {len(root_blocks)} blocks were given")
    if any(not 0 <= b < w.k for b in root_blocks):
        raise ValueError("root block index out of range")
    return _single(body, w, tuple(root_blocks))


def induced_density(j: Tournament, w: StepTournamenton) -> Ring:
    """Probability that a ``W``-random ``v(J)``-vertex tournament is ``J``."""
    coeff = Fraction(factorial(j.n), automorphism_count(j))
    return _normalise(coeff * _single(j, w))


def density_vector(w: StepTournamenton, m: int) -> dict:
    return {j: induced_density(j, w) for j in enumerate_tournaments(m)}


def degrees(w: StepTournamenton) -> RegularityReport:
    out = tuple(
        _normalise(sum((w.weights[j] * w.values[i][j] for j in range(w.k)), Fraction(0)))
        for i in range(w.k)
    )
    return RegularityReport(all(d == HALF for d in out), out)


def in_degrees(w: StepTournamenton) -> tuple:
    return tuple(
        _normalise(sum((w.weights[j] * w.values[j][i] for j in range(w.k)), Fraction(0)))
        for i in range(w.k)
    )


def is_regular(w: StepTournamenton) -> bool:
    return degrees(w).is_regular


# ---------------------------------------------------------------- text form


def parse_tournamenton(text: str) -> StepTournamenton:
    """Parse ``half``, ``wt:<tournament>``, ``uz@<p/q>`` or ``blend(<W1>,<W0>,<p/q>)``."""
    s = text.strip()
    low = s.lower()
    if low == "half":
        return constant_half()
    if low.startswith("wt:"):
        return from_tournament(parse_tournament(s[3:]))
    if low.startswith("uz@"):
        z = as_rational(s[3:])
        if not 0 <= z <= Fraction(1, 2):
            raise ValueError("U_z is defined for 0 <= z <= 1/2")
        return u_blend().specialize(z)
    if low.startswith("blend(") and s.endswith(")"):
        args = _split_top(s[6:-1])
        if len(args) != 3:
            raise ValueError("blend(...) takes three arguments: W1, W0, z")
        w1, w0 = parse_tournamenton(args[0]), parse_tournamenton(args[1])
        return blend(w0, w1, as_rational(args[2]))
    raise ValueError(f"cannot parse tournamenton {text!r}")


def _split_top(s: str) -> list:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


# ---------------------------------------------------------------- random instances


def random_step(rng: random.Random, max_blocks: int = 5, max_den: int = 16) -> StepTournamenton:
    """Random rational step tournamenton.

    Block count uniform in ``1..max_blocks``; weights are a uniformly random
    composition of a denominator ``<= max_den``; each off-diagonal value is
    ``p/q`` with ``q <= max_den`` and its transpose is the complement.
    """
    k = rng.randint(1, max_blocks)
    den = rng.randint(k, max_den)
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    weights = [Fraction(p, den) for p in parts]
    vals = [[HALF] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            q = rng.randint(1, max_den)
            x = Fraction(rng.randint(0, q), q)
            vals[i][j], vals[j][i] = x, 1 - x
    return StepTournamenton(weights, vals)


def random_regular_step(rng: random.Random, max_blocks: int = 7, max_den: int = 16) -> StepTournamenton:
    """Random regular step tournamenton with equal block weights.

    Starts from the constant 1/2 and pushes flow ``delta`` around random
    directed cycles of blocks; each push keeps every row sum fixed.
    """
    k = rng.randint(3, max_blocks)
    vals = [[HALF] * k for _ in range(k)]
    for _ in range(rng.randint(1, 2 * k)):
        length = rng.randint(3, k)
        cycle = rng.sample(range(k), length)
        delta = Fraction(rng.randint(1, max_den), 2 * max_den) * rng.choice((1, -1))
        arcs = list(zip(cycle, cycle[1:] + cycle[:1]))
        if all(0 <= vals[a][b] + delta <= 1 for a, b in arcs):
            for a, b in arcs:
                vals[a][b] += delta
                vals[b][a] -= delta
    return StepTournamenton([Fraction(1, k)] * k, vals)


def combination_value(h: LinComb, w: StepTournamenton) -> Ring:
    return t_step(h, w)
