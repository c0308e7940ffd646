"""Face choosers and the Linial-Meshulam style modified complex.

A face chooser maps every i-simplex on {0..n} to one of its ell-faces so
that each ell-simplex is chosen by many i-simplices.  Feeding the i-simplices
of X through the chooser, on top of the complete (ell-1)-skeleton, gives a
complex whose ell-simplices appear independently.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .asymptotics import AsymptoticProfile
from .combinatorics import rank_combination, unrank_combination
from .complex import Hypergraph, Simplex, SimplicialComplex, full_skeleton
from .errors import RetryBudgetExhausted
from .sampler import SampleSeed

DEFAULT_BUDGET = 10


def preimage_bound(n: int, ell: int, i: int) -> Fraction:
    """Required minimum number of i-simplices choosing each ell-simplex."""
    if i == ell:
        return Fraction(1, 2)
    return Fraction(comb(n - ell, i - ell), 2 * comb(i + 1, ell + 1))


@dataclass(frozen=True)
class FaceChooser:
    n: int
    ell: int
    i: int
    seed: int
    choice: tuple[int, ...]   # i-simplex rank -> chosen ell-face rank
    preimage_min: int

    def face_of(self, tau: Simplex) -> Simplex:
        if self.i == self.ell:
            return tuple(tau)
        rank = self.choice[rank_combination(tuple(tau), self.n + 1)]
        return unrank_combination(rank, self.n + 1, self.ell + 1)

    def preimage_counts(self) -> np.ndarray:
        return _counts(self.choice, comb(self.n + 1, self.ell + 1))


def _counts(choice, size: int) -> np.ndarray:
    return np.bincount(np.asarray(choice, dtype=np.int64), minlength=size)


def _face_ranks(n: int, ell: int, i: int) -> list[list[int]]:
    """For each i-simplex (by rank) the ranks of its ell-faces."""
    face_rank = {f: j for j, f in enumerate(combinations(range(n + 1), ell + 1))}
    return [[face_rank[f] for f in combinations(tau, ell + 1)]
            for tau in combinations(range(n + 1), i + 1)]


def _draw(options: list[list[int]], size: int, rng: np.random.Generator,
          strategy: str) -> list[int]:
    if strategy == "uniform":
        picks = rng.integers(0, len(options[0]), size=len(options))
        return [opts[j] for opts, j in zip(options, picks.tolist())]
    if strategy != "balanced":
        raise ValueError(f"unknown strategy {strategy!r}")
    # random order, each tau takes its currently least-chosen face
    load = [0] * size
    choice = [0] * len(options)
    noise = rng.random((len(options), len(options[0])))
    for t in rng.permutation(len(options)).tolist():
        opts = options[t]
        best = min(range(len(opts)), key=lambda j: (load[opts[j]], noise[t, j]))
        choice[t] = opts[best]
        load[opts[best]] += 1
    return choice


def build_face_chooser(n: int, ell: int, i: int, seed: int = 0,
                       budget: int = DEFAULT_BUDGET, strategy: str = "balanced"
                       ) -> FaceChooser:
    """Draw a chooser and verify the preimage bound, redrawing up to ``budget`` times.

    ``strategy="uniform"`` picks each face uniformly at random;
    ``"balanced"`` visits the i-simplices in random order and picks the
    face with the fewest choices so far (random tie-break).
    """
    if not 0 <= ell <= i <= n:
        raise ValueError(f"require 0 <= ell <= i <= n, got ell={ell}, i={i}, n={n}")
    size = comb(n + 1, ell + 1)
    if i == ell:
        return FaceChooser(n, ell, i, seed, tuple(range(size)), 1)
    bound = preimage_bound(n, ell, i)
    options = _face_ranks(n, ell, i)
    worst = None
    for attempt in range(budget):
        rng = np.random.default_rng([seed & (2**64 - 1), attempt])
        choice = _draw(options, size, rng, strategy)
        counts = _counts(choice, size)
        low = int(counts.min())
        if low >= bound:
            return FaceChooser(n, ell, i, seed, tuple(choice), low)
        if worst is None or low < worst[1]:
            worst = (unrank_combination(int(counts.argmin()), n + 1, ell + 1), low)
    raise RetryBudgetExhausted(
        f"no chooser for n={n}, ell={ell}, i={i} within {budget} attempts: "
        f"{worst[0]} chosen {worst[1]} times, need >= {bound}",
        worst_face=worst[0], worst_count=worst[1])


def save_chooser(chooser: FaceChooser, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# n={chooser.n} ell={chooser.ell} i={chooser.i} "
                 f"seed={chooser.seed} preimage_min={chooser.preimage_min}\n")
        if chooser.i != chooser.ell:
            fh.writelines(f"{c}\n" for c in chooser.choice)


def load_chooser(path: str | os.PathLike) -> FaceChooser:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        fields = dict(tok.split("=") for tok in header.lstrip("#").split())
        n, ell, i = int(fields["n"]), int(fields["ell"]), int(fields["i"])
        seed = int(fields["seed"])
        size = comb(n + 1, ell + 1)
        if i == ell:
            return FaceChooser(n, ell, i, seed, tuple(range(size)), 1)
        choice = tuple(int(line) for line in fh if line.strip())
    if len(choice) != comb(n + 1, i + 1):
        raise ValueError(f"{path}: expected {comb(n + 1, i + 1)} entries, got {len(choice)}")
    for rank, c in enumerate(choice):
        tau = set(unrank_combination(rank, n + 1, i + 1))
        if not tau.issuperset(unrank_combination(c, n + 1, ell + 1)):
            raise ValueError(f"{path}: entry {rank} is not a face of its simplex")
    low = int(_counts(choice, size).min())
    if low != int(fields["preimage_min"]):
        raise ValueError(f"{path}: preimage_min mismatch")
    return FaceChooser(n, ell, i, seed, choice, low)


def cached_face_chooser(n: int, ell: int, i: int, seed: int, cache_dir: str | os.PathLike,
                        budget: int = DEFAULT_BUDGET) -> FaceChooser:
    """Build once per (n, ell, i, seed) and reuse the persisted table afterwards."""
    path = os.path.join(cache_dir, f"chooser_n{n}_l{ell}_i{i}_s{seed}.txt")
    if os.path.exists(path):
        return load_chooser(path)
    chooser = build_face_chooser(n, ell, i, seed, budget)
    os.makedirs(cache_dir, exist_ok=True)
    save_chooser(chooser, path)
    return chooser


def stratum_index(profile: AsymptoticProfile) -> int:
    """Smallest i with beta_i = beta."""
    if profile.regime != "U_ell":
        raise ValueError(f"no stratum index in regime {profile.regime}")
    return min(profile.stratum)


def modified_complex(X: Hypergraph, chooser: FaceChooser, ell: int) -> SimplicialComplex:
    """Complete (ell-1)-skeleton plus the chosen ell-face of each i-simplex of X."""
    if chooser.ell != ell:
        raise ValueError("chooser was built for a different ell")
    if chooser.n != X.n:
        raise ValueError("chooser was built for a different n")
    K = full_skeleton(X.n, ell - 1) if ell > 0 else SimplicialComplex([], n=X.n, r=0)
    added = {chooser.face_of(t) for t in X.of_dim(chooser.i)}
    return SimplicialComplex(K.simplices | added, n=X.n, r=ell, check=False)
