"""Time the numba kernels against their pure-numpy counterparts.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are imported side by side from ``qrt._kernels`` regardless of
``QRT_DISABLE_NUMBA``; the compiled versions are warmed up first so the
numbers measure steady-state work, not JIT compilation.
"""

import argparse
import time

import numpy as np

from qrt import _accel, _kernels
from qrt.catalog import resolve_catalog
from qrt.negative import reference_tournament
from qrt.tournaments import Tournament, enumerate_tournaments


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    perms7 = _kernels.perm_table(7)
    t7 = reference_tournament().adj
    h18 = resolve_catalog().get("H18").adj
    upper = np.triu(rng.integers(0, 2, size=(9, 9)), 1)
    t9 = (upper + np.triu(1 - upper, 1).T).astype(np.uint8)
    classes6 = [t.adj for t in enumerate_tournaments(6)]
    perms6 = _kernels.perm_table(6)
    return [
        ("canon_code, 56 classes n=6", lambda k: [k["canon"](a, perms6) for a in classes6]),
        ("canon_code, n=7", lambda k: k["canon"](t7, perms7)),
        ("aut_count, n=7", lambda k: k["aut"](t7, perms7)),
        ("hom_count H18 -> 9-vertex host", lambda k: k["hom"](h18, t9)),
        ("wt_histogram H18 -> 7 blocks", lambda k: k["hist"](h18, t7)),
    ]


BACKENDS = {
    "numpy": {
        "canon": _kernels.canon_code_np,
        "aut": _kernels.aut_count_np,
        "hom": _kernels.hom_count_np,
        "hist": _kernels.wt_histogram_np,
    },
    "numba": {
        "canon": _kernels.canon_code_nb,
        "aut": _kernels.aut_count_nb,
        "hom": _kernels.hom_count_nb,
        "hist": _kernels.wt_histogram_nb,
    },
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; only the numpy column is meaningful")
    c3 = Tournament.cyclic3().adj
    for k in BACKENDS.values():  # compile and warm caches
        k["canon"](c3, _kernels.perm_table(3))
        k["aut"](c3, _kernels.perm_table(3))
        k["hom"](c3, c3)
        k["hist"](c3, c3)
    print(f"{'case':<34} {'numpy [ms]':>12} {'numba [ms]':>12} {'speed-up':>9}")
    for label, fn in cases():
        t_np = best_of(lambda: fn(BACKENDS["numpy"]), args.repeat)
        t_nb = best_of(lambda: fn(BACKENDS["numba"]), args.repeat)
        print(f"{label:<34} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
