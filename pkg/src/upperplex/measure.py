"""Exact upper- and lower-model probabilities of a complex.

Probabilities are dimension-homogeneous rationals; everything here is
computed with :class:`fractions.Fraction`.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, inf, log
from typing import Sequence

from .complex import (
    SimplicialComplex,
    faces,
    maximal_simplices,
    minimal_missing,
)
from .errors import DimensionOverflowError, ResourceCapError

#: hypergraph enumeration is limited to 2**ENUMERATION_BITS subsets
ENUMERATION_BITS = 20


@dataclass(frozen=True)
class ProbabilityAssignment:
    n: int
    r: int
    p: tuple[Fraction, ...]

    def __post_init__(self):
        p = tuple(Fraction(x) for x in self.p)
        object.__setattr__(self, "p", p)
        if len(p) != self.r + 1:
            raise ValueError(f"need {self.r + 1} probabilities, got {len(p)}")
        if not 0 <= self.r <= self.n:
            raise ValueError(f"require 0 <= r <= n, got r={self.r}, n={self.n}")
        for x in p:
            if not 0 <= x <= 1:
                raise ValueError(f"probability {x} outside [0, 1]")

    @property
    def q(self) -> tuple[Fraction, ...]:
        return tuple(1 - x for x in self.p)

    @classmethod
    def parse(cls, n: int, r: int, text: str) -> "ProbabilityAssignment":
        return cls(n, r, tuple(Fraction(tok.strip()) for tok in text.split(",")))


def canonical_simplices(n: int, r: int) -> list[tuple[int, ...]]:
    """All simplices of dimension <= r on {0..n}, dimension-major then lexicographic."""
    return [c for d in range(r + 1) for c in combinations(range(n + 1), d + 1)]


def _check(Y: SimplicialComplex, P: ProbabilityAssignment) -> None:
    if Y.dim > P.r:
        raise DimensionOverflowError(f"complex has dimension {Y.dim} > r={P.r}")
    top = max((s[-1] for s in Y.simplices), default=-1)
    if top > P.n:
        raise ValueError(f"vertex {top} outside {{0..{P.n}}}")


def upper_probability(Y: SimplicialComplex, P: ProbabilityAssignment) -> Fraction:
    """Probability that the closure of the random hypergraph equals ``Y``."""
    _check(Y, P)
    q = P.q
    out = Fraction(1)
    for j in range(P.r + 1):
        out *= q[j] ** (comb(P.n + 1, j + 1) - Y.count(j))
    for s in maximal_simplices(Y):
        out *= P.p[len(s) - 1]
    return out


def lower_probability(Y: SimplicialComplex, P: ProbabilityAssignment) -> Fraction:
    """Probability that the largest complex inside the random hypergraph equals ``Y``."""
    _check(Y, P)
    q = P.q
    out = Fraction(1)
    for j in range(P.r + 1):
        out *= P.p[j] ** Y.count(j)
    for s in minimal_missing(Y, P.n, P.r):
        out *= q[len(s) - 1]
    return out


@dataclass
class MeasureCheck:
    total: Fraction
    distribution: dict[SimplicialComplex, Fraction]
    mismatches: list[SimplicialComplex]

    @property
    def ok(self) -> bool:
        return self.total == 1 and not self.mismatches


def total_measure_check(n: int, r: int, P: ProbabilityAssignment,
                        model: str = "upper") -> MeasureCheck:
    """Enumerate every hypergraph on {0..n} up to dimension r.

    Each hypergraph's mass is pushed onto its closure (``model="upper"``) or
    its lower complex (``model="lower"``).  The grouped masses are compared
    against the closed-form probabilities; ``mismatches`` lists every complex
    where they differ.
    """
    if model not in ("upper", "lower"):
        raise ValueError(f"unknown model {model!r}")
    if (P.n, P.r) != (n, r):
        raise ValueError("assignment does not match (n, r)")
    S = canonical_simplices(n, r)
    N = len(S)
    if N > ENUMERATION_BITS:
        raise ResourceCapError(
            f"{N} simplices would need 2^{N} hypergraphs (limit 2^{ENUMERATION_BITS})")
    index = {s: i for i, s in enumerate(S)}
    face_mask = [sum(1 << index[f] for f in faces(s)) for s in S]
    dim_masks = [sum(1 << i for i, s in enumerate(S) if len(s) == j + 1)
                 for j in range(r + 1)]

    # result complex mask -> Counter of per-dimension selection counts
    groups: dict[int, Counter] = defaultdict(Counter)
    if model == "upper":
        image = [0] * (1 << N)
        for mask in range(1, 1 << N):
            low = mask & -mask
            image[mask] = image[mask ^ low] | face_mask[low.bit_length() - 1]
    for mask in range(1 << N):
        if model == "upper":
            out = image[mask]
        else:
            out = 0
            for i in range(N):
                if face_mask[i] & ~mask == 0:
                    out |= 1 << i
        groups[out][tuple((mask & dm).bit_count() for dm in dim_masks)] += 1

    sizes = [comb(n + 1, j + 1) for j in range(r + 1)]
    q = P.q
    weight_cache: dict[tuple[int, ...], Fraction] = {}

    def weight(counts):
        w = weight_cache.get(counts)
        if w is None:
            w = Fraction(1)
            for j, c in enumerate(counts):
                w *= P.p[j] ** c * q[j] ** (sizes[j] - c)
            weight_cache[counts] = w
        return w

    distribution: dict[SimplicialComplex, Fraction] = {}
    mismatches = []
    total = Fraction(0)
    closed_form = upper_probability if model == "upper" else lower_probability
    for out, counter in groups.items():
        mass = sum((cnt * weight(c) for c, cnt in counter.items()), Fraction(0))
        Y = SimplicialComplex([S[i] for i in range(N) if out >> i & 1], n=n, r=r,
                              check=False)
        total += mass
        if mass:
            distribution[Y] = mass
        if closed_form(Y, P) != mass:
            mismatches.append(Y)
    return MeasureCheck(total, distribution, mismatches)


def distribution_to_json(distribution: dict[SimplicialComplex, Fraction]) -> list[dict]:
    rows = []
    for Y, mass in distribution.items():
        rows.append({
            "complex": [list(s) for s in Y],
            "mass_num": mass.numerator,
            "mass_den": mass.denominator,
        })
    rows.sort(key=lambda row: (len(row["complex"]), row["complex"]))
    return rows


def alpha_for_probabilities(n: int, p: Sequence[float]) -> list[float]:
    """Exponents with n**-alpha_j == p_j (up to rounding); p_j = 0 maps to inf."""
    if n < 2:
        raise ValueError("n >= 2 needed to encode probabilities as exponents")
    return [inf if x == 0 else -log(float(x)) / log(n) for x in p]
