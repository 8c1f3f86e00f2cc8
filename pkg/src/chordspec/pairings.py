"""Chord-diagram pairings: enumeration, crossing classification and censuses.

A pairing is a perfect matching of 2k labeled vertices on a circle; there
are (2k-1)!! of them.  Drawing each matched pair as a chord, every chord is
either *crossing* (it intersects some other chord), *dividing* (it does not
cross anything, but each of the two arcs it cuts off contains a pair of
mutually crossing chords) or plain non-crossing non-dividing.  The census
operations count pairings by the number of crossing vertices and by how
many blocks the crossing chords form, and the closed-form helpers give the
exact counts for small crossing numbers (the leading coefficients 1, 4, 31,
288 are OEIS A081054).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator

from chordspec._backend import kernels

DEFAULT_ENUMERATION_CAP = 10
_CAP_ENV_VAR = "CHORDSPEC_MAX_ENUM_K"

# Hard ceiling: the census kernels count in int64 and (2k-1)!! overflows
# 64 bits at k = 17.
KERNEL_CAP = kernels.MAX_CENSUS_K


class CapExceededError(ValueError):
    """Raised when an exhaustive-enumeration operation exceeds the cap."""


class UnsupportedFormulaError(ValueError):
    """Raised when no closed form exists for the requested parameters."""


def enumeration_cap(cap: int | None = None) -> int:
    """Resolve the enumeration cap: explicit argument, else env override, else 10."""
    if cap is None:
        cap = int(os.environ.get(_CAP_ENV_VAR, DEFAULT_ENUMERATION_CAP))
    return min(cap, KERNEL_CAP)


def _check_cap(k: int, cap: int | None, what: str) -> None:
    if k < 1:
        raise ValueError(f"{what} needs k >= 1, got {k}")
    limit = enumeration_cap(cap)
    if k > limit:
        raise CapExceededError(
            f"{what} at k={k} exceeds the enumeration cap {limit} "
            f"(override with cap= or {_CAP_ENV_VAR})"
        )


# ---------------------------------------------------------------------------
# integer helpers
# ---------------------------------------------------------------------------


def binom_or_zero(n: int, r: int) -> int:
    """Binomial coefficient with out-of-range lower index mapped to 0."""
    if r < 0 or r > n:
        return 0
    return math.comb(n, r)


def double_factorial(n: int) -> int:
    """n!! = n (n-2) (n-4) ... ; by convention 1 for n <= 0."""
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def catalan(k: int) -> int:
    """k-th Catalan number, the count of non-crossing matchings of 2k points."""
    if k < 0:
        raise ValueError("catalan needs k >= 0")
    return math.comb(2 * k, k) // (k + 1)


def matching_count(x: int) -> int:
    """Number of perfect matchings of x points: 0 for odd x, 1 for x=0, else (x-1)!!."""
    if x < 0:
        raise ValueError("matching_count needs x >= 0")
    if x % 2:
        return 0
    if x == 0:
        return 1
    return double_factorial(x - 1)


# ---------------------------------------------------------------------------
# pairings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pairing:
    """A perfect matching of 2k circle vertices, stored as a partner vector.

    ``partner[i]`` is the vertex matched to vertex i; the vector is a
    fixed-point-free involution of 0..2k-1.
    """

    partner: tuple[int, ...]

    def __post_init__(self):
        n = len(self.partner)
        if n < 2 or n % 2:
            raise ValueError("partner vector must have positive even length")
        for i, j in enumerate(self.partner):
            if not 0 <= j < n:
                raise ValueError(f"partner[{i}]={j} out of range")
            if j == i:
                raise ValueError(f"vertex {i} matched to itself")
            if self.partner[j] != i:
                raise ValueError("partner vector is not an involution")

    @property
    def k(self) -> int:
        return len(self.partner) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Chords as (min, max) vertex pairs, ordered by smaller endpoint."""
        return [(i, j) for i, j in enumerate(self.partner) if j > i]

    def rotated(self, shift: int) -> "Pairing":
        """Relabel vertices by i -> i + shift (mod 2k)."""
        n = len(self.partner)
        shift %= n
        rotated = [0] * n
        for i, j in enumerate(self.partner):
            rotated[(i + shift) % n] = (j + shift) % n
        return Pairing(tuple(rotated))

    @classmethod
    def from_edges(cls, edges, k: int | None = None) -> "Pairing":
        edges = list(edges)
        if k is None:
            k = len(edges)
        partner = [-1] * (2 * k)
        for a, b in edges:
            if partner[a] != -1 or partner[b] != -1:
                raise ValueError("repeated vertex in edge list")
            partner[a] = b
            partner[b] = a
        if -1 in partner:
            raise ValueError("edge list does not cover all 2k vertices")
        return cls(tuple(partner))


def enumerate_pairings(k: int, cap: int | None = None) -> Iterator[Pairing]:
    """Stream every pairing of 2k vertices exactly once.

    Order is deterministic: the smallest unmatched vertex is matched to each
    larger free vertex in increasing order, recursively.  Streams for
    distinct first edges are disjoint, so work can be sharded by the first
    partner choice.
    """
    _check_cap(k, cap, "enumerate_pairings")
    for tup in kernels_enumerate(k):
        yield Pairing(tup)


def kernels_enumerate(k: int):
    """Raw partner-tuple enumeration (no Pairing objects), same order."""
    from chordspec._kernels_py import _enumerate_partners

    return _enumerate_partners(k)


class EdgeKind(Enum):
    CROSSING = "crossing"
    DIVIDING = "dividing"
    NON_CROSSING_NON_DIVIDING = "non_crossing_non_dividing"


@dataclass(frozen=True)
class EdgeClassification:
    """Per-chord labels plus the derived crossing/dividing statistics."""

    edges: tuple[tuple[int, int], ...]
    edge_class: tuple[EdgeKind, ...]
    crossing_vertices: int  # number of vertices on crossing chords; even, never 2
    dividing_count: int
    partition_count: int


def classify(pairing: Pairing) -> EdgeClassification:
    """Classify every chord of a pairing.

    A chord (a, b) is crossing iff some other chord has exactly one endpoint
    strictly between a and b.  A non-crossing chord is dividing iff at least
    one crossing chord lies strictly inside the arc (a, b) and at least one
    lies strictly outside.  Two crossing chords belong to the same partition
    block iff they lie on the same side of every dividing chord.

    This is the readable reference implementation; the census and Monte
    Carlo paths use the batch kernels, which are tested against it.
    """
    edges = pairing.edges()
    k = len(edges)
    crossing = [False] * k
    for i, (a, b) in enumerate(edges):
        for j, (x, y) in enumerate(edges):
            if i == j:
                continue
            if (a < x < b) != (a < y < b):
                crossing[i] = True
                break
    total_crossing = sum(crossing)

    inside = [
        [x > a and y < b for (x, y) in edges] for (a, b) in edges
    ]  # inside[i][j]: chord j strictly inside chord i
    dividing = [False] * k
    for i in range(k):
        if crossing[i]:
            continue
        n_in = sum(1 for j in range(k) if crossing[j] and inside[i][j])
        dividing[i] = 0 < n_in < total_crossing

    signatures: dict[int, frozenset[int]] = {}
    for j in range(k):
        if crossing[j]:
            signatures[j] = frozenset(
                i for i in range(k) if dividing[i] and inside[i][j]
            )
    partition_count = len(set(signatures.values()))

    kinds = tuple(
        EdgeKind.CROSSING
        if crossing[i]
        else (EdgeKind.DIVIDING if dividing[i] else EdgeKind.NON_CROSSING_NON_DIVIDING)
        for i in range(k)
    )
    return EdgeClassification(
        edges=tuple(edges),
        edge_class=kinds,
        crossing_vertices=2 * total_crossing,
        dividing_count=sum(dividing),
        partition_count=partition_count,
    )


# ---------------------------------------------------------------------------
# censuses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossingCensus:
    """Exact pairing counts for one k.

    ``totals[m]`` is the number of pairings with exactly 2m crossing
    vertices; ``partitions[(m, i)]`` refines totals[m] by the number of
    partition blocks i (only nonzero entries are stored).  All counts are
    Python ints.
    """

    k: int
    totals: dict[int, int]
    partitions: dict[tuple[int, int], int]

    def total_pairings(self) -> int:
        return sum(self.totals.values())

    def to_json(self) -> str:
        payload = {
            "k": self.k,
            "totals": {str(m): str(c) for m, c in sorted(self.totals.items())},
            "partitions": {
                str(m): {
                    str(i): str(self.partitions[(m, i)])
                    for (mm, i) in sorted(self.partitions)
                    if mm == m
                }
                for m in range(2, self.k + 1)
            },
            "double_factorial": str(double_factorial(2 * self.k - 1)),
        }
        return json.dumps(payload, indent=2)


@lru_cache(maxsize=None)
def _census_cached(k: int) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    cr, part = kernels.census_counts(k)
    return tuple(int(c) for c in cr), tuple(tuple(int(c) for c in row) for row in part)


def crossing_census(k: int, cap: int | None = None) -> CrossingCensus:
    """Exhaustively enumerate and classify all pairings of 2k vertices."""
    _check_cap(k, cap, "crossing_census")
    cr, part = _census_cached(k)
    totals = {m: cr[m] for m in range(k + 1)}
    partitions = {
        (m, i): part[m][i]
        for m in range(2, k + 1)
        for i in range(len(part[m]))
        if part[m][i]
    }
    return CrossingCensus(k=k, totals=totals, partitions=partitions)


def closed_form_cr(k: int, m: int) -> int:
    """Closed-form count of pairings of 2k vertices with exactly 2m crossing vertices.

    Known for m <= 5:

        m=0: C_k            m=1: 0              m=2: C(2k, k-2)
        m=3: 4 C(2k, k-3)
        m=4: 31 C(2k, k-4) + sum_{d>=1} C(2k, k-4-d) (4+d)
        m=5: 288 C(2k, k-5) + 8 sum_{d>=1} C(2k, k-5-d) (5+d)

    Binomials with a negative lower index are 0, so the formulas are total
    in k.  No closed form is known for m > 5.
    """
    if k < 1:
        raise ValueError("closed_form_cr needs k >= 1")
    if m < 0:
        raise ValueError("closed_form_cr needs m >= 0")
    if m > 5:
        raise UnsupportedFormulaError(f"no closed form for m={m} (> 5)")
    n = 2 * k
    if m == 0:
        return catalan(k)
    if m == 1:
        return 0
    if m == 2:
        return binom_or_zero(n, k - 2)
    if m == 3:
        return 4 * binom_or_zero(n, k - 3)
    if m == 4:
        return 31 * binom_or_zero(n, k - 4) + sum(
            binom_or_zero(n, k - 4 - d) * (4 + d) for d in range(1, k - 3)
        )
    return 288 * binom_or_zero(n, k - 5) + 8 * sum(
        binom_or_zero(n, k - 5 - d) * (5 + d) for d in range(1, k - 4)
    )


@lru_cache(maxsize=None)
def all_crossing_count(m: int, cap: int | None = None) -> int:
    """Count of pairings of 2m vertices in which every vertex is crossing.

    For m <= 6 this follows recursively from the closed forms and the total
    count (2m-1)!!; larger m falls back to the census (cap applies).
    """
    if m < 0:
        raise ValueError("all_crossing_count needs m >= 0")
    if m == 0:
        return 1
    if m <= 6:
        return double_factorial(2 * m - 1) - sum(
            closed_form_cr(m, l) for l in range(min(m, 6))
        )
    _check_cap(m, cap, "all_crossing_count")
    return crossing_census(m, cap=cap).totals[m]


def partition_formula(k: int, m: int, i: int, cap: int | None = None) -> int:
    """Closed-form count of pairings with 2m crossing vertices in i blocks.

    i=1: all-crossing count on 2m vertices times C(2k, k-m).
    i=2: sum over dividing-chord counts d of C(2k, k-m-d) (m+d) times the
    two-block splittings of the crossing vertices.
    No formula is known for i >= 3.
    """
    if i not in (1, 2):
        raise UnsupportedFormulaError(f"no partition formula for i={i}")
    if not 2 <= m <= k:
        raise ValueError("partition_formula needs 2 <= m <= k")
    if i == 1:
        return all_crossing_count(m, cap) * binom_or_zero(2 * k, k - m)
    split = sum(
        all_crossing_count(a, cap) * all_crossing_count(m - a, cap)
        for a in range(1, m)
    )
    return sum(
        binom_or_zero(2 * k, k - m - d) * (m + d) * split for d in range(1, k - m + 1)
    )


# ---------------------------------------------------------------------------
# configurations (rotation classes)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfigurationClass:
    """A rotation orbit of pairings: canonical representative and orbit size."""

    canonical: Pairing
    multiplicity: int


def _rotate_tuple(partner: tuple[int, ...], shift: int) -> tuple[int, ...]:
    n = len(partner)
    rotated = [0] * n
    for i, j in enumerate(partner):
        rotated[(i + shift) % n] = (j + shift) % n
    return tuple(rotated)


def _canonical_rotation(partner: tuple[int, ...]) -> tuple[int, ...]:
    n = len(partner)
    return min(_rotate_tuple(partner, s) for s in range(n))


def configuration_classes(k: int, cap: int | None = None) -> list[ConfigurationClass]:
    """Partition all pairings of 2k vertices into rotation orbits.

    The orbit size (multiplicity) always divides 2k; multiplicities sum to
    (2k-1)!!.  Classes are returned in first-seen enumeration order.
    """
    _check_cap(k, cap, "configuration_classes")
    counts: dict[tuple[int, ...], int] = {}
    for tup in kernels_enumerate(k):
        canon = _canonical_rotation(tup)
        counts[canon] = counts.get(canon, 0) + 1
    return [
        ConfigurationClass(canonical=Pairing(canon), multiplicity=mult)
        for canon, mult in counts.items()
    ]


# ---------------------------------------------------------------------------
# placements of non-crossing non-dividing chords
# ---------------------------------------------------------------------------


def _validate_skeleton(v: int, partial: Pairing) -> None:
    if partial.k != v:
        raise ValueError(f"partial pairing must cover 2v={2*v} vertices")
    if v == 1:
        # A single chord cannot be crossing or dividing; the placement count
        # C(2k, k-1) still holds, with the lone chord floating freely.
        return
    labels = classify(partial).edge_class
    if any(kind is EdgeKind.NON_CROSSING_NON_DIVIDING for kind in labels):
        raise ValueError(
            "every vertex of the partial pairing must be crossing or dividing"
        )


def nc_nd_placement_count(k: int, v: int, partial: Pairing) -> int:
    """Ways to fill 2k-2v remaining vertices with non-crossing non-dividing chords.

    The count is C(2k, k-v) regardless of the internal structure of the
    partial pairing, provided all its vertices are crossing or dividing.
    """
    if v < 1:
        raise ValueError("placement count needs v >= 1")
    if v > k:
        raise ValueError("placement count needs v <= k")
    _validate_skeleton(v, partial)
    return binom_or_zero(2 * k, k - v)


@lru_cache(maxsize=None)
def _non_crossing_matchings(s: int) -> int:
    """Count matchings of 2s points with no crossings, by brute enumeration."""
    if s == 0:
        return 1
    count = 0
    for tup in kernels_enumerate(s):
        edges = [(i, j) for i, j in enumerate(tup) if j > i]
        if not any(
            (a < x < b) != (a < y < b)
            for (a, b) in edges
            for (x, y) in edges
            if (a, b) != (x, y)
        ):
            count += 1
    return count


def nc_nd_placement_verify(k: int, v: int, partial: Pairing, cap: int | None = None) -> int:
    """Brute-force insertion count for nc_nd_placement_count.

    Distributes the 2k-2v new vertices over the 2v gaps between consecutive
    placed vertices, enumerates the non-crossing matchings inside each gap,
    and multiplies by the 2k/2v labeled circular placements of the pattern.
    """
    if v < 1:
        raise ValueError("placement verifier needs v >= 1")
    if v > k:
        raise ValueError("placement verifier needs v <= k")
    _check_cap(k, cap, "nc_nd_placement_verify")
    _validate_skeleton(v, partial)
    free = k - v
    gaps = 2 * v
    total = 0
    for comp in _compositions(free, gaps):
        ways = 1
        for s in comp:
            ways *= _non_crossing_matchings(s)
        total += ways
    scaled = 2 * k * total
    if scaled % gaps:
        raise AssertionError("circular placement factor must divide evenly")
    return scaled // gaps


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# Catalan convolution identity
# ---------------------------------------------------------------------------

CONVOLUTION_SUM_CAP = 20


def catalan_convolution(n: int, r: int) -> tuple[int, int]:
    """Both sides of the Catalan self-convolution identity.

    lhs: sum over compositions (i_1, ..., i_r) of n with parts >= 1 of the
    product C_{i_1 - 1} ... C_{i_r - 1}, computed by explicit enumeration.
    rhs: r/(2n - r) * C(2n - r, n).
    """
    if not 1 <= r <= n:
        raise ValueError("catalan_convolution needs 1 <= r <= n")
    if n > CONVOLUTION_SUM_CAP:
        raise CapExceededError(
            f"explicit composition sum capped at n <= {CONVOLUTION_SUM_CAP}"
        )
    lhs = 0
    for comp in _compositions(n - r, r):
        prod = 1
        for extra in comp:
            prod *= catalan(extra)
        lhs += prod
    numerator = r * math.comb(2 * n - r, n)
    if numerator % (2 * n - r):
        raise AssertionError("convolution rhs must be an integer")
    rhs = numerator // (2 * n - r)
    return lhs, rhs
