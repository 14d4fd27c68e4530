"""Integer kernels behind canonical forms, automorphisms and map counting.

Every kernel exists twice: a loop version compiled with numba (``*_nb``) and a
vectorised numpy version (``*_np``).  The unsuffixed names dispatch according
to :mod:`qrt._accel`.  Both versions are exercised by the test-suite and timed
against each other by ``benchmarks/bench_kernels.py``.

Adjacency matrices are ``uint8`` arrays with ``adj[i, j] == 1`` iff ``i -> j``.
"""

from functools import lru_cache
from itertools import permutations

import numpy as np

from ._accel import USE_NUMBA, njit

MAX_CANON_N = 8


@lru_cache(maxsize=None)
def perm_table(n: int) -> np.ndarray:
    """All permutations of ``range(n)`` in lexicographic order, shape ``(n!, n)``."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    table = np.array(list(permutations(range(n))), dtype=np.int64)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def pair_index(n: int):
    """Row-major upper-triangular pair index arrays ``(I, J)``."""
    iu = np.triu_indices(n, k=1)
    return iu[0].astype(np.int64), iu[1].astype(np.int64)


def neighbour_masks(adj: np.ndarray):
    """Out- and in-neighbourhood bitmasks (``n <= 62``)."""
    n = adj.shape[0]
    if n > 62:
        raise ValueError("bitmask kernels support at most 62 host vertices")
    weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    a = adj.astype(np.int64)
    out = a @ weights
    inn = a.T @ weights
    return out.astype(np.int64), inn.astype(np.int64)


# ---------------------------------------------------------------- canonical code


def _canon_code_loop(adj, perms):
    n = adj.shape[0]
    best = -1
    for p in range(perms.shape[0]):
        code = 0
        for i in range(n):
            pi = perms[p, i]
            for j in range(i + 1, n):
                code = (code << 1) | adj[pi, perms[p, j]]
        if code > best:
            best = code
    return best


def canon_code_np(adj: np.ndarray, perms: np.ndarray) -> int:
    n = adj.shape[0]
    if n < 2:
        return 0
    I, J = pair_index(n)
    bits = adj[perms[:, I], perms[:, J]].astype(np.int64)
    weights = np.left_shift(np.int64(1), np.arange(len(I) - 1, -1, -1, dtype=np.int64))
    return int((bits @ weights).max())


# ---------------------------------------------------------------- automorphisms


def _aut_count_loop(adj, perms):
    n = adj.shape[0]
    count = 0
    for p in range(perms.shape[0]):
        ok = True
        for i in range(n):
            pi = perms[p, i]
            for j in range(n):
                if adj[pi, perms[p, j]] != adj[i, j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count


def aut_count_np(adj: np.ndarray, perms: np.ndarray) -> int:
    permuted = adj[perms[:, :, None], perms[:, None, :]]
    return int(np.all(permuted == adj[None, :, :], axis=(1, 2)).sum())


# ---------------------------------------------------------------- homomorphisms


def _lowest_bit(x):
    i = 0
    while (x >> i) & 1 == 0:
        i += 1
    return i


def _hom_count_loop(hadj, tout, tin):
    k = hadj.shape[0]
    n = tout.shape[0]
    full = (np.int64(1) << n) - 1
    img = np.zeros(k, dtype=np.int64)
    cand = np.zeros(k, dtype=np.int64)
    cand[0] = full
    depth = 0
    count = 0
    while depth >= 0:
        c = cand[depth]
        if c == 0:
            depth -= 1
            continue
        low = c & -c
        cand[depth] = c ^ low
        img[depth] = _lowest_bit(low)
        if depth == k - 1:
            count += 1
            continue
        nxt = depth + 1
        m = full
        for u in range(nxt):
            if hadj[u, nxt]:
                m &= tout[img[u]]
            else:
                m &= tin[img[u]]
        depth = nxt
        cand[depth] = m
    return count


def hom_count_np(hadj: np.ndarray, tadj: np.ndarray) -> int:
    k, n = hadj.shape[0], tadj.shape[0]
    states = np.arange(n, dtype=np.int64).reshape(n, 1)
    for d in range(1, k):
        m = states.shape[0]
        x = np.tile(np.arange(n, dtype=np.int64), m)
        s = np.repeat(states, n, axis=0)
        ok = np.ones(len(x), dtype=bool)
        for u in range(d):
            if hadj[u, d]:
                ok &= tadj[s[:, u], x] == 1
            else:
                ok &= tadj[x, s[:, u]] == 1
        states = np.concatenate([s[ok], x[ok, None]], axis=1)
        if states.shape[0] == 0:
            return 0
    return int(states.shape[0])


# ------------------------------------------------- blow-up (W_T) map histogram


def _wt_hist_loop(hadj, tout, tin, hist):
    # maps V(H) -> blocks; an arc landing inside one block contributes a factor 1/2
    k = hadj.shape[0]
    n = tout.shape[0]
    full = (np.int64(1) << n) - 1
    img = np.zeros(k, dtype=np.int64)
    diag = np.zeros(k + 1, dtype=np.int64)
    cand = np.zeros(k, dtype=np.int64)
    cand[0] = full
    depth = 0
    while depth >= 0:
        c = cand[depth]
        if c == 0:
            depth -= 1
            continue
        low = c & -c
        cand[depth] = c ^ low
        x = _lowest_bit(low)
        img[depth] = x
        same = 0
        for u in range(depth):
            if img[u] == x:
                same += 1
        diag[depth + 1] = diag[depth] + same
        if depth == k - 1:
            hist[diag[depth + 1]] += 1
            continue
        nxt = depth + 1
        m = full
        for u in range(nxt):
            own = np.int64(1) << img[u]
            if hadj[u, nxt]:
                m &= tout[img[u]] | own
            else:
                m &= tin[img[u]] | own
        depth = nxt
        cand[depth] = m
    return hist


def wt_histogram_np(hadj: np.ndarray, tadj: np.ndarray) -> np.ndarray:
    k, n = hadj.shape[0], tadj.shape[0]
    reach = (tadj == 1) | np.eye(n, dtype=bool)
    states = np.arange(n, dtype=np.int64).reshape(n, 1)
    diag = np.zeros(n, dtype=np.int64)
    for d in range(1, k):
        m = states.shape[0]
        x = np.tile(np.arange(n, dtype=np.int64), m)
        s = np.repeat(states, n, axis=0)
        dg = np.repeat(diag, n)
        ok = np.ones(len(x), dtype=bool)
        for u in range(d):
            if hadj[u, d]:
                ok &= reach[s[:, u], x]
            else:
                ok &= reach[x, s[:, u]]
            dg = dg + (s[:, u] == x)
        states = np.concatenate([s[ok], x[ok, None]], axis=1)
        diag = dg[ok]
    hist = np.bincount(diag, minlength=k * (k - 1) // 2 + 1)
    return hist.astype(np.int64)


# ---------------------------------------------------------------- compilation

_canon_code_nb = njit(_canon_code_loop)
_aut_count_nb = njit(_aut_count_loop)
_lowest_bit = njit(_lowest_bit)
_hom_count_nb = njit(_hom_count_loop)
_wt_hist_nb = njit(_wt_hist_loop)


def canon_code_nb(adj: np.ndarray, perms: np.ndarray) -> int:
    return int(_canon_code_nb(np.ascontiguousarray(adj, dtype=np.int64), perms))


def aut_count_nb(adj: np.ndarray, perms: np.ndarray) -> int:
    return int(_aut_count_nb(np.ascontiguousarray(adj, dtype=np.int64), perms))


def hom_count_nb(hadj: np.ndarray, tadj: np.ndarray) -> int:
    tout, tin = neighbour_masks(tadj)
    return int(_hom_count_nb(np.ascontiguousarray(hadj, dtype=np.int64), tout, tin))


def wt_histogram_nb(hadj: np.ndarray, tadj: np.ndarray) -> np.ndarray:
    k = hadj.shape[0]
    tout, tin = neighbour_masks(tadj)
    hist = np.zeros(k * (k - 1) // 2 + 1, dtype=np.int64)
    return _wt_hist_nb(np.ascontiguousarray(hadj, dtype=np.int64), tout, tin, hist)


if USE_NUMBA:
    canon_code, aut_count = canon_code_nb, aut_count_nb
    hom_count, wt_histogram = hom_count_nb, wt_histogram_nb
else:
    canon_code, aut_count = canon_code_np, aut_count_np
    hom_count, wt_histogram = hom_count_np, wt_histogram_np


def warm_up() -> None:
    """Trigger JIT compilation so later timings measure steady-state work."""
    adj = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=np.uint8)
    perms = perm_table(3)
    canon_code(adj, perms)
    aut_count(adj, perms)
    hom_count(adj, adj)
    wt_histogram(adj, adj)
