"""Backend parity: the compiled kernels and the NumPy fallback must agree exactly."""

import numpy as np
import pytest

from chordspec import _kernels_py as py_kernels
from chordspec.pairings import classify, enumerate_pairings

c_kernels = pytest.importorskip(
    "chordspec._ckernels", reason="compiled extension not built"
)


@pytest.mark.parametrize("k", range(1, 7))
def test_census_parity(k):
    cr_c, part_c = c_kernels.census_counts(k)
    cr_py, part_py = py_kernels.census_counts(k)
    assert np.array_equal(cr_c, cr_py)
    assert np.array_equal(part_c, part_py)


@pytest.mark.parametrize("k", [2, 3, 8, 40])
def test_crossing_count_parity(k):
    rng = np.random.default_rng(k)
    perms = np.argsort(rng.random((300, 2 * k)), axis=1).astype(np.int64)
    assert np.array_equal(
        c_kernels.crossing_vertex_counts(perms), py_kernels.crossing_vertex_counts(perms)
    )


@pytest.mark.parametrize(
    "N,k,mode,block",
    [(3, 4, 0, 0), (4, 4, 1, 0), (4, 4, 2, 0), (4, 3, 3, 2), (5, 5, 1, 0), (8, 4, 3, 4)],
)
def test_tuple_count_parity(N, k, mode, block):
    table_c = c_kernels.tuple_moment_counts(N, k, mode, block)
    table_py = py_kernels.tuple_moment_counts(N, k, mode, block)
    assert set(table_c) == set(table_py)
    for key in table_c:
        assert np.array_equal(table_c[key], table_py[key])


@pytest.mark.parametrize("kernels", [py_kernels, c_kernels], ids=["python", "c"])
@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_batch_counts_match_reference_classifier(kernels, k):
    """Both kernels must reproduce the readable per-pairing classifier."""
    pairings = list(enumerate_pairings(k))
    perms = np.array(
        [[v for edge in p.edges() for v in edge] for p in pairings], dtype=np.int64
    )
    expected = np.array([classify(p).crossing_vertices for p in pairings])
    assert np.array_equal(kernels.crossing_vertex_counts(perms), expected)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_census_matches_reference_classifier(k):
    """Census cells equal direct tallies of the reference classifier."""
    cr, part = c_kernels.census_counts(k)
    totals = {}
    blocks = {}
    for p in enumerate_pairings(k):
        cl = classify(p)
        m = cl.crossing_vertices // 2
        totals[m] = totals.get(m, 0) + 1
        blocks[(m, cl.partition_count)] = blocks.get((m, cl.partition_count), 0) + 1
    for m in range(k + 1):
        assert cr[m] == totals.get(m, 0)
        for i in range(k // 2 + 1):
            assert part[m][i] == blocks.get((m, i), 0)
