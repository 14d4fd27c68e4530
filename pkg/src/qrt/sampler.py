"""W-random tournaments and Monte Carlo statistics.

Random source: numpy's PCG64 bit generator.  ``SeedSequence(seed).spawn(2)``
gives two independent streams: the first draws the block labels, the second
orients the pairs.  Probabilities are exact rationals; every Bernoulli draw
compares a uniform integer below the common denominator with a scaled
numerator, so no float rounding enters the sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .exact import as_rational
from .tournamenton import StepTournamenton
from .tournaments import Tournament

TRIAL_CHUNK = 1 << 18


@dataclass(frozen=True)
class SampleConfig:
    source: StepTournamenton
    n: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sample order must be at least 1")
        if not self.source.is_rational:
            raise ValueError("sampling needs a rational-valued step tournamenton")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _streams(seed: int):
    labels, pairs = np.random.SeedSequence(seed).spawn(2)
    return np.random.Generator(np.random.PCG64(labels)), np.random.Generator(np.random.PCG64(pairs))


def sample_labels(w: StepTournamenton, n: int, rng: np.random.Generator) -> np.ndarray:
    den = lcm(*(x.denominator for x in w.weights))
    cum = np.cumsum([int(x * den) for x in w.weights])
    u = rng.integers(0, den, size=n)
    return np.searchsorted(cum, u, side="right").astype(np.int64)


def sample(cfg: SampleConfig) -> Tournament:
    """A ``W``-random tournament on ``cfg.n`` vertices, determined by the seed."""
    w, n = cfg.source, cfg.n
    lab_rng, pair_rng = _streams(cfg.seed)
    blocks = sample_labels(w, n, lab_rng)
    q = lcm(*(x.denominator for row in w.values for x in row))
    num = np.array([[int(x * q) for x in row] for row in w.values], dtype=np.int64)
    iu, ju = np.triu_indices(n, k=1)
    p = num[blocks[iu], blocks[ju]]
    u = pair_rng.integers(0, q, size=len(iu))
    forward = u < p
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[iu[forward], ju[forward]] = 1
    adj[ju[~forward], iu[~forward]] = 1
    return Tournament(adj)


def empirical_density(h: Tournament, t: Tournament, trials: int, seed: int) -> float:
    """Fraction of ``trials`` uniform maps ``V(H) -> V(T)`` that preserve arcs."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    arcs = h.arcs()
    adj = t.adj
    hits = 0
    left = trials
    while left:
        m = min(left, TRIAL_CHUNK)
        img = rng.integers(0, t.n, size=(m, h.n))
        ok = np.ones(m, dtype=bool)
        for u, v in arcs:
            ok &= adj[img[:, u], img[:, v]] == 1
        hits += int(ok.sum())
        left -= m
    return hits / trials


def near_regularity_defect(t: Tournament, eps) -> Fraction:
    """Share of vertices with out-degree outside ``[(1/2-eps) n, (1/2+eps) n]``."""
    eps = as_rational(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must lie strictly between 0 and 1/2")
    n = t.n
    lo, hi = (Fraction(1, 2) - eps) * n, (Fraction(1, 2) + eps) * n
    bad = sum(1 for d in t.out_degrees().tolist() if d < lo or d > hi)
    return Fraction(bad, n)


def cyclic_triangle_density(t: Tournament) -> Fraction:
    """Exact ``t(C3, T)`` from the score sequence (any size).

    ``hom(C3, T) = 3 (C(n,3) - sum_v C(d+(v), 2))``.
    """
    n = t.n
    deg = t.out_degrees().tolist()
    cyc = n * (n - 1) * (n - 2) // 6 - sum(d * (d - 1) // 2 for d in deg)
    return Fraction(3 * cyc, n**3)
