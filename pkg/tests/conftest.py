import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from qrt.tournaments import Tournament  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def tournaments(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    m = n * (n - 1) // 2
    bits = draw(st.lists(st.sampled_from("01"), min_size=m, max_size=m))
    return Tournament.from_bits(n, "".join(bits))


def random_tournament(rng: np.random.Generator, n: int) -> Tournament:
    upper = np.triu(rng.integers(0, 2, size=(n, n)), 1)
    adj = upper + np.triu(1 - upper, 1).T
    return Tournament(adj.astype(np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
