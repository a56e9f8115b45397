"""Compiled kernels against the pure-Python reference."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from femtoreuse import _pykernels as py
from femtoreuse import kernels

ck = pytest.importorskip("femtoreuse._ckernels")


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_choose_edge_exhaustive():
    for k in range(5):
        for foes in itertools.product(range(6), repeat=k):
            a, da = py.choose_edge(list(foes))
            b, db = ck.choose_edge(list(foes))
            assert (a, sorted(da)) == (b, sorted(db)), foes


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-100, 100), st.floats(-100, 100)), max_size=60),
       st.floats(0.5, 80))
def test_pairs_within_matches(points, threshold):
    xy = np.array(points, dtype=np.float64).reshape(-1, 2)
    a = py.pairs_within(xy[:, 0], xy[:, 1], threshold)
    b = ck.pairs_within(xy[:, 0], xy[:, 1], threshold)
    assert sorted(zip(*map(list, a))) == sorted(zip(*map(list, b)))


def _csr(n, rng, side, threshold=60.0):
    xy = rng.uniform(0, side, size=(n, 2))
    ii, jj = py.pairs_within(xy[:, 0], xy[:, 1], threshold)
    nbrs = [[] for _ in range(n)]
    for i, j in zip(ii.tolist(), jj.tolist()):
        d = float(np.hypot(*(xy[i] - xy[j])))
        nbrs[i].append((j, d))
        nbrs[j].append((i, d))
    ptr = np.zeros(n + 1, dtype=np.int64)
    nbr, dist = [], []
    for i in range(n):
        nbrs[i].sort()
        ptr[i + 1] = ptr[i] + len(nbrs[i])
        nbr += [j for j, _ in nbrs[i]]
        dist += [d for _, d in nbrs[i]]
    return ptr, np.array(nbr, dtype=np.int64), np.array(dist)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 120), st.floats(50, 600), st.integers(0, 2**32 - 1))
def test_run_dynamic_matches(n, side, seed):
    ptr, nbr, dist = _csr(n, np.random.default_rng(seed), side)
    r1 = np.full(n, 10.0)
    r2 = r1.copy()
    l1, u1 = py.run_dynamic(ptr, nbr, dist, r1, 60.0, 10.0, 0.8, 4.0, 4)
    l2, u2 = ck.run_dynamic(ptr, nbr, dist, r2, 60.0, 10.0, 0.8, 4.0, 4)
    np.testing.assert_array_equal(l1, l2)
    np.testing.assert_array_equal(u1, u2)
    np.testing.assert_array_equal(r1, r2)


def test_fallback_selected_by_environment():
    import subprocess
    import sys
    code = "import femtoreuse.kernels as k; print(k.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"FEMTOREUSE_PURE_PYTHON": "1", "PATH": ""}).stdout.strip()
    assert out == "python"
