"""Brute-force reference implementations used only by the tests.

Nothing here calls into the package's counting kernels; everything is plain
itertools over small objects.
"""

from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial, gcd


def arcs_of(adj):
    n = len(adj)
    return [(i, j) for i in range(n) for j in range(n) if adj[i][j]]


def hom_brute(h_adj, t_adj):
    """Arc-preserving maps by listing all ``n**k`` maps (no injectivity)."""
    k, n = len(h_adj), len(t_adj)
    arcs = arcs_of(h_adj)
    return sum(1 for f in product(range(n), repeat=k) if all(t_adj[f[u]][f[v]] for u, v in arcs))


def inj_hom_brute(h_adj, t_adj):
    k, n = len(h_adj), len(t_adj)
    arcs = arcs_of(h_adj)
    return sum(1 for f in permutations(range(n), k) if all(t_adj[f[u]][f[v]] for u, v in arcs))


def min_code(adj):
    """Smallest pair-bit string over all relabellings (opposite extreme)."""
    n = len(adj)
    pairs = list(combinations(range(n), 2))
    return min("".join("1" if adj[p[i]][p[j]] else "0" for i, j in pairs) for p in permutations(range(n)))


def aut_brute(adj):
    n = len(adj)
    return sum(
        1 for p in permutations(range(n)) if all(adj[p[i]][p[j]] == adj[i][j] for i in range(n) for j in range(n))
    )


def odd_partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for part in range(min(n, largest), 0, -1):
        if part % 2:
            for rest in odd_partitions(n - part, part):
                yield [part] + rest


def burnside_class_count(n):
    """Isomorphism classes of ``n``-vertex tournaments via Burnside's lemma.

    A permutation fixes some tournament only if all its cycles are odd; then
    it fixes ``2**(sum (l-1)/2 + sum_{i<j} gcd(l_i, l_j))`` of them.
    """
    total = 0
    for parts in odd_partitions(n):
        size = factorial(n)
        for p in parts:
            size //= p
        for p in set(parts):
            size //= factorial(parts.count(p))
        exp = sum((p - 1) // 2 for p in parts)
        exp += sum(gcd(a, b) for a, b in combinations(parts, 2))
        total += size * 2**exp
    assert total % factorial(n) == 0
    return total // factorial(n)


def t_step_brute(h_adj, weights, values):
    """``t(H, W)`` summing over every block assignment with ``itertools.product``."""
    k = len(h_adj)
    arcs = arcs_of(h_adj)
    total = Fraction(0)
    for blocks in product(range(len(weights)), repeat=k):
        term = Fraction(1)
        for b in blocks:
            term *= weights[b]
        for u, v in arcs:
            term *= values[blocks[u]][blocks[v]]
        total += term
    return total


def t_blowup_brute(h_adj, t_adj):
    """``t(H, W_T)`` as ``n**-k`` times the sum of arc values over all maps."""
    n = len(t_adj)
    half = Fraction(1, 2)
    val = [[half if i == j else Fraction(t_adj[i][j]) for j in range(n)] for i in range(n)]
    return t_step_brute(h_adj, [Fraction(1, n)] * n, val)


def regular_count_labelled_brute(n):
    """Labelled regular tournaments on ``n`` vertices by listing all of them."""
    pairs = list(combinations(range(n), 2))
    d = (n - 1) // 2
    count = 0
    for bits in product((0, 1), repeat=len(pairs)):
        out = [0] * n
        for (i, j), b in zip(pairs, bits):
            out[i if b else j] += 1
        count += all(x == d for x in out)
    return count
