"""Pure NumPy implementations of the hot kernels.

This module is the fallback backend used when the compiled extension
(``chordspec._ckernels``) is unavailable.  Both backends expose the same
three functions and return bit-identical results; all randomness is drawn
by the caller so the kernels themselves are exact integer computations.

Kernel contracts
----------------
``census_counts(k)``
    Exhaustively enumerates all (2k-1)!! perfect matchings of 2k circle
    vertices and tallies them by the number of mutually crossing chord
    pairs and by how many blocks the crossing chords are split into by
    dividing chords.

``crossing_vertex_counts(perms)``
    For each row of ``perms`` (a permutation of 0..2k-1 read as k
    consecutive chords) returns the number of vertices that belong to at
    least one crossing chord.

``tuple_moment_counts(N, k, mode, block)``
    Walks all N**k cyclic index tuples of a trace expansion and counts
    them by (multiset of matrix-variable multiplicities, number of sign
    variables appearing an odd number of times).  Tuples in which some
    matrix variable appears an odd number of times are skipped: every
    supported base distribution is symmetric, so those terms vanish.
"""

from __future__ import annotations

import itertools

import numpy as np

BACKEND_NAME = "python"

# int64 census counters are safe through k = 16: (2*16 - 1)!! < 2**63.
MAX_CENSUS_K = 16

# Variable-identification modes for tuple_moment_counts.
MODE_FULL_SYMMETRIC = 0
MODE_TOEPLITZ = 1
MODE_PALINDROMIC = 2
MODE_HIGHLY_PALINDROMIC = 3


def _enumerate_partners(k: int):
    """Iterative enumeration of partner vectors (tuples) in canonical order."""
    n = 2 * k
    partner = [-1] * n
    anchor = [0] * k
    chosen = [0] * k
    depth = 0
    anchor[0] = 0
    chosen[0] = 0
    while depth >= 0:
        a = anchor[depth]
        j = chosen[depth]
        if j:
            partner[a] = -1
            partner[j] = -1
            start = j + 1
        else:
            start = a + 1
        nxt = -1
        for t in range(start, n):
            if partner[t] == -1:
                nxt = t
                break
        if nxt == -1:
            chosen[depth] = 0
            depth -= 1
            continue
        partner[a] = nxt
        partner[nxt] = a
        chosen[depth] = nxt
        if depth == k - 1:
            yield tuple(partner)
        else:
            depth += 1
            for t in range(n):
                if partner[t] == -1:
                    anchor[depth] = t
                    break
            chosen[depth] = 0


def classify_batch(partners: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Classify a batch of partner vectors.

    Parameters
    ----------
    partners : (B, 2k) int64 array, each row a fixed-point-free involution.

    Returns
    -------
    (crossing_edges, dividing_edges, partition_count) : three (B,) int64 arrays.
    ``crossing_edges[r]`` is the number of chords involved in at least one
    crossing (half the number of crossing vertices).
    """
    partners = np.ascontiguousarray(partners, dtype=np.int64)
    bsz, n = partners.shape
    k = n // 2
    idx = np.arange(n, dtype=np.int64)
    mask = partners > idx
    a = np.broadcast_to(idx, partners.shape)[mask].reshape(bsz, k)
    b = partners[mask].reshape(bsz, k)
    return _classify_edge_batch(a, b)


def _classify_edge_batch(a: np.ndarray, b: np.ndarray):
    bsz, k = a.shape
    a_i = a[:, :, None]
    b_i = b[:, :, None]
    a_j = a[:, None, :]
    b_j = b[:, None, :]
    in_a = (a_j > a_i) & (a_j < b_i)
    in_b = (b_j > a_i) & (b_j < b_i)
    cross = in_a ^ in_b  # chord j has exactly one endpoint strictly inside chord i
    edge_crossing = cross.any(axis=2)
    m = edge_crossing.sum(axis=1, dtype=np.int64)

    inside = in_a & in_b  # chord j strictly inside chord i
    n_inside_cross = (inside & edge_crossing[:, None, :]).sum(axis=2, dtype=np.int64)
    dividing = (~edge_crossing) & (n_inside_cross > 0) & (n_inside_cross < m[:, None])
    div_count = dividing.sum(axis=1, dtype=np.int64)

    # Partition signature of each crossing chord: on which side of every
    # dividing chord it lies.  Two crossing chords share a block iff no
    # dividing chord separates them, i.e. their signatures coincide.
    weights = np.int64(1) << np.arange(k, dtype=np.int64)
    sig_bits = inside & dividing[:, :, None]  # [r, divider i, chord j]
    sig = (sig_bits.transpose(0, 2, 1) * weights).sum(axis=2)
    sig = np.where(edge_crossing, sig, np.int64(-1))
    sig.sort(axis=1)
    prev = np.concatenate([np.full((bsz, 1), -2, dtype=np.int64), sig[:, :-1]], axis=1)
    parts = ((sig >= 0) & (sig != prev)).sum(axis=1, dtype=np.int64)
    return m, div_count, parts


def census_counts(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact census of all matchings of 2k vertices.

    Returns ``(cr, part)`` where ``cr[m]`` counts matchings with exactly m
    crossing chords (2m crossing vertices) and ``part[m, i]`` refines that by
    the number of blocks i the crossing chords form under dividing chords.
    """
    if not 1 <= k <= MAX_CENSUS_K:
        raise ValueError(f"census kernel supports 1 <= k <= {MAX_CENSUS_K}, got {k}")
    cr = np.zeros(k + 1, dtype=np.int64)
    part = np.zeros((k + 1, k // 2 + 1), dtype=np.int64)
    batch: list[tuple[int, ...]] = []
    batch_size = 20000

    def flush():
        arr = np.array(batch, dtype=np.int64)
        m, _, parts = classify_batch(arr)
        np.add.at(cr, m, 1)
        np.add.at(part, (m, parts), 1)
        batch.clear()

    for tup in _enumerate_partners(k):
        batch.append(tup)
        if len(batch) >= batch_size:
            flush()
    if batch:
        flush()
    return cr, part


def crossing_vertex_counts(perms: np.ndarray) -> np.ndarray:
    """Number of crossing vertices for each permutation row.

    ``perms`` has shape (B, 2k); row entries are a permutation of 0..2k-1 and
    consecutive entries (2t, 2t+1) form the chords.  Only the crossing test
    is evaluated (no dividing/partition work), in sub-batches sized to keep
    the (B, k, k) boolean intermediates around 50 MB.
    """
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    bsz, n = perms.shape
    if n % 2:
        raise ValueError("rows must have even length")
    k = n // 2
    pairs = perms.reshape(bsz, k, 2)
    a = pairs.min(axis=2)
    b = pairs.max(axis=2)
    out = np.empty(bsz, dtype=np.int64)
    step = max(1, 50_000_000 // (k * k))
    for lo in range(0, bsz, step):
        hi = min(bsz, lo + step)
        a_i = a[lo:hi, :, None]
        b_i = b[lo:hi, :, None]
        a_j = a[lo:hi, None, :]
        b_j = b[lo:hi, None, :]
        cross = (a_j > a_i) & (a_j < b_i)
        cross ^= (b_j > a_i) & (b_j < b_i)
        out[lo:hi] = 2 * cross.any(axis=2).sum(axis=1, dtype=np.int64)
    return out


def tuple_moment_counts(N: int, k: int, mode: int, block: int) -> dict[tuple[int, ...], np.ndarray]:
    """Count trace-expansion index tuples by variable-multiplicity profile.

    For each cyclic tuple (i_0, ..., i_{k-1}) in [0, N)^k, the k consecutive
    index pairs select k matrix variables (identified according to ``mode``)
    and k sign variables (identified by unordered index pair).  The tuple is
    binned by the sorted multiset of matrix-variable multiplicities and by
    the number of sign variables of odd multiplicity.

    Returns a dict mapping profile tuples to int64 arrays of length k + 1
    (index = odd sign-variable count).  Profiles containing an odd matrix
    multiplicity are omitted; they contribute nothing for symmetric bases.
    """
    if N < 1 or k < 1:
        raise ValueError("N and k must be positive")
    if mode == MODE_HIGHLY_PALINDROMIC and (block < 2 or N % block):
        raise ValueError("highly palindromic mode needs block | N, block >= 2")
    table: dict[tuple[int, ...], np.ndarray] = {}
    for tup in itertools.product(range(N), repeat=k):
        b_ids: dict[int, int] = {}
        e_ids: dict[int, int] = {}
        for t in range(k):
            u = tup[t]
            v = tup[(t + 1) % k]
            lo, hi = (u, v) if u <= v else (v, u)
            e_key = lo * N + hi
            e_ids[e_key] = e_ids.get(e_key, 0) + 1
            if mode == MODE_FULL_SYMMETRIC:
                b_key = e_key
            else:
                d = hi - lo
                if mode == MODE_TOEPLITZ:
                    b_key = d
                elif mode == MODE_PALINDROMIC:
                    b_key = min(d, N - 1 - d)
                else:
                    dm = d % block
                    b_key = min(dm, block - 1 - dm)
            b_ids[b_key] = b_ids.get(b_key, 0) + 1
        mults = sorted(b_ids.values())
        if any(mult % 2 for mult in mults):
            continue
        odd_eps = sum(1 for mult in e_ids.values() if mult % 2)
        key = tuple(mults)
        row = table.get(key)
        if row is None:
            row = np.zeros(k + 1, dtype=np.int64)
            table[key] = row
        row[odd_eps] += 1
    return table
