"""Seeded sampling of the random hypergraph X.

Each simplex of dimension i on {0..n} is included independently with
probability n**-alpha_i.  Inclusion of the simplex at canonical rank x is
decided by a counter-based hash of (stream key, dimension, x), so the
result does not depend on how the ranks are traversed or chunked.
Probabilities are double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, inf
from typing import Sequence

import numpy as np

from .combinatorics import unrank_many
from .complex import MAX_DIM, Hypergraph

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_CHUNK = 1 << 22
#: "auto" switches to gap sampling above this many candidate simplices
GEOMETRIC_THRESHOLD = 1 << 24


def parse_alpha(text: str) -> tuple[float, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        out.append(inf if tok in ("inf", "infinity", "oo", "∞") else float(tok))
    return tuple(out)


@dataclass(frozen=True)
class ModelParams:
    n: int
    r: int
    alpha: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.r <= self.n:
            raise ValueError(f"require 0 <= r <= n, got r={self.r}, n={self.n}")
        if self.r > MAX_DIM:
            raise ValueError(f"r={self.r} exceeds the supported limit {MAX_DIM}")
        if len(self.alpha) != self.r + 1:
            raise ValueError(f"need {self.r + 1} exponents, got {len(self.alpha)}")
        if any(math.isnan(a) or a < 0 for a in self.alpha):
            raise ValueError(f"exponents must lie in [0, inf]: {self.alpha}")

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(0.0 if a == inf else float(self.n) ** -a for a in self.alpha)

    def expected_g(self) -> tuple[float, ...]:
        """Mean number of i-simplices in X."""
        return tuple(comb(self.n + 1, i + 1) * p for i, p in enumerate(self.probabilities))


def _splitmix(x: int) -> int:
    z = (x + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SampleSeed:
    master: int
    trial: int = 0

    @property
    def stream(self) -> int:
        return _splitmix(_splitmix(self.master & _MASK) ^ (self.trial & _MASK))

    def dimension_key(self, i: int) -> int:
        return _splitmix((self.stream + (i + 1) * 0xD1B54A32D192ED03) & _MASK)


def _uniforms(key: int, start: int, count: int) -> np.ndarray:
    """Uniforms in [0, 1) for ranks start .. start+count-1 of one stream."""
    x = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(key) + x * np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def bernoulli_ranks(key: int, total: int, p: float) -> np.ndarray:
    """Ranks in [0, total) selected by independent draws with probability p."""
    if p <= 0.0 or total == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    hits = []
    for start in range(0, total, _CHUNK):
        count = min(_CHUNK, total - start)
        hits.append(np.flatnonzero(_uniforms(key, start, count) < p) + start)
    return np.concatenate(hits).astype(np.int64)


def geometric_ranks(key: int, total: int, p: float) -> np.ndarray:
    """Same distribution as :func:`bernoulli_ranks`, drawn by skipping gaps."""
    if p <= 0.0 or total == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    rng = np.random.Generator(np.random.Philox(key=key))
    batch = max(16, int(total * p + 6 * math.sqrt(total * p) + 16))
    out = []
    pos = -1
    while True:
        gaps = rng.geometric(p, size=batch)
        ranks = pos + np.cumsum(gaps)
        if ranks[-1] >= total:
            out.append(ranks[ranks < total])
            break
        out.append(ranks)
        pos = int(ranks[-1])
    return np.concatenate(out).astype(np.int64)


def sample_ranks(params: ModelParams, seed: SampleSeed, i: int,
                 method: str = "auto") -> np.ndarray:
    total = comb(params.n + 1, i + 1)
    p = params.probabilities[i]
    if method == "auto":
        method = "geometric" if total > GEOMETRIC_THRESHOLD else "bernoulli"
    if method == "bernoulli":
        return bernoulli_ranks(seed.dimension_key(i), total, p)
    if method == "geometric":
        return geometric_ranks(seed.dimension_key(i), total, p)
    raise ValueError(f"unknown sampling method {method!r}")


def sample_hypergraph(params: ModelParams, seed: SampleSeed,
                      method: str = "auto") -> Hypergraph:
    """Draw X; the result is a pure function of (params, seed, method)."""
    members = []
    for i in range(params.r + 1):
        ranks = sample_ranks(params, seed, i, method)
        members.extend(unrank_many(ranks, params.n + 1, i + 1))
    return Hypergraph(members, n=params.n, r=params.r)


def g_counts(X: Hypergraph) -> tuple[int, ...]:
    return tuple(X.count(i) for i in range(X.r + 1))


def weighted_count(X: Hypergraph, k: int, weights: Sequence) -> int:
    """sum_{i=k}^{r} weights[i-k] * g_i."""
    if not 0 <= k <= X.r:
        raise ValueError(f"k={k} outside [0, {X.r}]")
    if len(weights) != X.r - k + 1:
        raise ValueError("one weight per dimension k..r required")
    return sum(w * X.count(i) for i, w in zip(range(k, X.r + 1), weights))


def g_hat(X: Hypergraph, k: int) -> int:
    """Number of pairs (k-face, simplex of X containing it), counted with multiplicity."""
    return weighted_count(X, k, [comb(i + 1, k + 1) for i in range(k, X.r + 1)])


def g_prime(X: Hypergraph, ell: int) -> int:
    return weighted_count(X, ell, [comb(i, ell) for i in range(ell, X.r + 1)])
