# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: pairing census, crossing counts, trace-expansion counting.

Same contracts and bit-identical results as chordspec._kernels_py; see that
module's docstring for the semantics.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "c"
MAX_CENSUS_K = 16

DEF MAXV = 32          # 2k for the census (k <= 16)
DEF MAXK = 16
DEF MAXPROF = 64       # distinct multiplicity profiles (p(8) = 22, plenty)
DEF MAXTUPLE = 12      # k cap for tuple_moment_counts


cdef void _classify_edges(int k, const int* ea, const int* eb, int* out) noexcept nogil:
    """Crossing-chord count, dividing count and partition count for one pairing."""
    cdef int i, j, m = 0, divcnt = 0, nseen = 0, inside_cross, bit = 0
    cdef bint ina, inb, found
    cdef unsigned char crossing[MAXK]
    cdef unsigned int sig[MAXK]
    cdef unsigned int seen[MAXK]

    for i in range(k):
        crossing[i] = 0
        sig[i] = 0
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            ina = ea[j] > ea[i] and ea[j] < eb[i]
            inb = eb[j] > ea[i] and eb[j] < eb[i]
            if ina != inb:
                crossing[i] = 1
                break
    for i in range(k):
        if crossing[i]:
            m += 1

    for i in range(k):
        if crossing[i]:
            continue
        inside_cross = 0
        for j in range(k):
            if crossing[j] and ea[j] > ea[i] and eb[j] < eb[i]:
                inside_cross += 1
        if 0 < inside_cross < m:
            divcnt += 1
            for j in range(k):
                if crossing[j] and ea[j] > ea[i] and eb[j] < eb[i]:
                    sig[j] |= 1u << bit
            bit += 1

    for j in range(k):
        if not crossing[j]:
            continue
        found = False
        for i in range(nseen):
            if seen[i] == sig[j]:
                found = True
                break
        if not found:
            seen[nseen] = sig[j]
            nseen += 1

    out[0] = m
    out[1] = divcnt
    out[2] = nseen


def census_counts(int k):
    """Exact (crossing chords, partition blocks) census over all matchings of 2k points."""
    if k < 1 or k > MAX_CENSUS_K:
        raise ValueError(f"census kernel supports 1 <= k <= {MAX_CENSUS_K}, got {k}")
    cr_arr = np.zeros(k + 1, dtype=np.int64)
    part_arr = np.zeros((k + 1, k // 2 + 1), dtype=np.int64)
    cdef long long[::1] cr = cr_arr
    cdef long long[:, ::1] part = part_arr
    cdef int n = 2 * k
    cdef int partner[MAXV]
    cdef int anchor[MAXK]
    cdef int chosen[MAXK]
    cdef int ea[MAXK]
    cdef int eb[MAXK]
    cdef int out[3]
    cdef int depth, a, j, start, nxt, t, ne, i

    with nogil:
        for i in range(n):
            partner[i] = -1
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
                ne = 0
                for i in range(n):
                    if partner[i] > i:
                        ea[ne] = i
                        eb[ne] = partner[i]
                        ne += 1
                _classify_edges(k, ea, eb, out)
                cr[out[0]] += 1
                part[out[0], out[2]] += 1
            else:
                depth += 1
                for t in range(n):
                    if partner[t] == -1:
                        anchor[depth] = t
                        break
                chosen[depth] = 0
    return cr_arr, part_arr


def crossing_vertex_counts(perms):
    """Number of crossing vertices per row; rows are permutations of 0..2k-1."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] p = np.ascontiguousarray(
        perms, dtype=np.int64
    )
    cdef Py_ssize_t bsz = p.shape[0]
    cdef int n = <int> p.shape[1]
    if n % 2:
        raise ValueError("rows must have even length")
    cdef int k = n // 2
    out_arr = np.empty(bsz, dtype=np.int64)
    cdef long long[::1] out = out_arr
    ea_arr = np.empty(k, dtype=np.int32)
    eb_arr = np.empty(k, dtype=np.int32)
    cdef int[::1] ea = ea_arr
    cdef int[::1] eb = eb_arr
    cdef Py_ssize_t r
    cdef int t, u, v, i, j, m
    cdef bint ina, inb, is_cross

    with nogil:
        for r in range(bsz):
            for t in range(k):
                u = <int> p[r, 2 * t]
                v = <int> p[r, 2 * t + 1]
                if u <= v:
                    ea[t] = u
                    eb[t] = v
                else:
                    ea[t] = v
                    eb[t] = u
            m = 0
            for i in range(k):
                is_cross = False
                for j in range(k):
                    if i == j:
                        continue
                    ina = ea[j] > ea[i] and ea[j] < eb[i]
                    inb = eb[j] > ea[i] and eb[j] < eb[i]
                    if ina != inb:
                        is_cross = True
                        break
                if is_cross:
                    m += 1
            out[r] = 2 * m
    return out_arr


def tuple_moment_counts(int N, int k, int mode, int block):
    """Trace-expansion tuple counts; see the fallback module for the contract."""
    if N < 1 or k < 1:
        raise ValueError("N and k must be positive")
    if k > MAXTUPLE:
        raise ValueError(f"tuple kernel supports k <= {MAXTUPLE}")
    if mode == 3 and (block < 2 or N % block):
        raise ValueError("highly palindromic mode needs block | N, block >= 2")

    counts_arr = np.zeros((MAXPROF, k + 1), dtype=np.int64)
    cdef long long[:, ::1] counts = counts_arr
    cdef long long keys[MAXPROF]
    cdef int nkeys = 0

    cdef int idx[MAXTUPLE]
    cdef long long b_id[MAXTUPLE]
    cdef long long e_id[MAXTUPLE]
    cdef long long b_keys[MAXTUPLE]
    cdef int b_mult[MAXTUPLE]
    cdef long long e_keys[MAXTUPLE]
    cdef int e_mult[MAXTUPLE]
    cdef int mults[MAXTUPLE]
    cdef int t, u, v, lo, hi, d, dm, nb, ne_, g, pos, odd_eps, tmp, i
    cdef long long key, packed
    cdef bint done = False, found, odd_b

    for t in range(k):
        idx[t] = 0

    while not done:
        # variable ids for the k cyclic consecutive pairs
        for t in range(k):
            u = idx[t]
            v = idx[t + 1] if t + 1 < k else idx[0]
            if u <= v:
                lo = u
                hi = v
            else:
                lo = v
                hi = u
            e_id[t] = (<long long> lo) * N + hi
            if mode == 0:
                b_id[t] = e_id[t]
            else:
                d = hi - lo
                if mode == 1:
                    b_id[t] = d
                elif mode == 2:
                    b_id[t] = d if d < N - 1 - d else N - 1 - d
                else:
                    dm = d % block
                    b_id[t] = dm if dm < block - 1 - dm else block - 1 - dm

        # group matrix variables
        nb = 0
        for t in range(k):
            key = b_id[t]
            found = False
            for g in range(nb):
                if b_keys[g] == key:
                    b_mult[g] += 1
                    found = True
                    break
            if not found:
                b_keys[nb] = key
                b_mult[nb] = 1
                nb += 1
        odd_b = False
        for g in range(nb):
            if b_mult[g] & 1:
                odd_b = True
                break

        if not odd_b:
            # group sign variables, count odd multiplicities
            ne_ = 0
            for t in range(k):
                key = e_id[t]
                found = False
                for g in range(ne_):
                    if e_keys[g] == key:
                        e_mult[g] += 1
                        found = True
                        break
                if not found:
                    e_keys[ne_] = key
                    e_mult[ne_] = 1
                    ne_ += 1
            odd_eps = 0
            for g in range(ne_):
                if e_mult[g] & 1:
                    odd_eps += 1

            # sorted multiplicity profile, packed 4 bits per entry
            for g in range(nb):
                mults[g] = b_mult[g]
            for g in range(1, nb):
                tmp = mults[g]
                pos = g
                while pos > 0 and mults[pos - 1] > tmp:
                    mults[pos] = mults[pos - 1]
                    pos -= 1
                mults[pos] = tmp
            packed = 0
            for g in range(nb):
                packed = (packed << 4) | mults[g]

            found = False
            for g in range(nkeys):
                if keys[g] == packed:
                    counts[g, odd_eps] += 1
                    found = True
                    break
            if not found:
                if nkeys >= MAXPROF:
                    raise AssertionError("profile table overflow")
                keys[nkeys] = packed
                counts[nkeys, odd_eps] += 1
                nkeys += 1

        # odometer increment
        t = k - 1
        while t >= 0:
            idx[t] += 1
            if idx[t] < N:
                break
            idx[t] = 0
            t -= 1
        if t < 0:
            done = True

    # unpack profile keys into python tuples (ascending multiplicities)
    result = {}
    for g in range(nkeys):
        packed = keys[g]
        prof = []
        while packed:
            prof.append(packed & 0xF)
            packed >>= 4
        prof.reverse()
        result[tuple(int(x) for x in prof)] = counts_arr[g].copy()
    return result
