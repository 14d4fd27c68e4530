"""The numba kernels and the numpy fallback must agree exactly."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given

from conftest import tournaments
from oracles import hom_brute
from qrt import _accel, _kernels

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


@given(tournaments(min_n=1, max_n=6))
def test_canon_and_aut_agree(t):
    perms = _kernels.perm_table(t.n)
    if t.n >= 2:
        assert _kernels.canon_code_nb(t.adj, perms) == _kernels.canon_code_np(t.adj, perms)
    assert _kernels.aut_count_nb(t.adj, perms) == _kernels.aut_count_np(t.adj, perms)


@given(tournaments(min_n=1, max_n=4), tournaments(min_n=1, max_n=7))
def test_hom_and_hist_agree(h, t):
    nb = _kernels.hom_count_nb(h.adj, t.adj)
    assert nb == _kernels.hom_count_np(h.adj, t.adj)
    assert nb == hom_brute(h.adj.tolist(), t.adj.tolist())
    assert np.array_equal(_kernels.wt_histogram_nb(h.adj, t.adj), _kernels.wt_histogram_np(h.adj, t.adj))


def test_bitmask_limit():
    with pytest.raises(ValueError):
        _kernels.neighbour_masks(np.zeros((63, 63), dtype=np.uint8))


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, QRT_DISABLE_NUMBA="1")
    code = (
        "from qrt import _accel, _kernels; "
        "print(_accel.backend_name(), _kernels.hom_count is _kernels.hom_count_np)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]
