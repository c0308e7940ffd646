"""Good simplices and the cone collapse of the upper-model complex.

A simplex tau of X with dim tau >= k is k-good when every other simplex of
X of dimension >= k meets it in dimension < k.  A good simplex with least
good level k (>= ell) is collapsed from its smallest vertex v0 onto the cone
v0 * (k-1)-skeleton of the opposite face, removing free pairs
(rho, v0 + rho) from the top down.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .complex import Hypergraph, Simplex, SimplicialComplex, closure
from .errors import LawViolation
from .sampler import g_counts, g_hat, g_prime

#: free-pair verification is on by default up to this many vertices
VERIFY_MAX_N = 30


@dataclass
class GoodnessTable:
    ell: int
    flags: dict[Simplex, dict[int, bool]]
    level: dict[Simplex, int | None]
    B: dict[int, int]

    def good(self) -> list[tuple[Simplex, int]]:
        """Good simplices with their level, by decreasing dimension then lexicographic."""
        items = [(t, g) for t, g in self.level.items() if g is not None]
        items.sort(key=lambda item: (-len(item[0]), item[0]))
        return items


def classify_goodness(X: Hypergraph, ell: int) -> GoodnessTable:
    if ell < 0:
        raise ValueError("ell must be >= 0")
    flags: dict[Simplex, dict[int, bool]] = {}
    B = {}
    for k in range(ell, X.r + 1):
        upper = [t for d in range(k, X.r + 1) for t in X.of_dim(d)]
        # multiplicity of each k-face among simplices of dimension >= k
        mult = Counter(f for t in upper for f in combinations(t, k + 1))
        bad = 0
        for t in upper:
            ok = all(mult[f] == 1 for f in combinations(t, k + 1))
            flags.setdefault(t, {})[k] = ok
            bad += not ok
        B[k] = bad
    level = {t: next((k for k in sorted(fl) if fl[k]), None) for t, fl in flags.items()}
    return GoodnessTable(ell, flags, level, B)


def _cone_pairs(tau: Simplex, low: int):
    """Free pairs (rho, v0+rho) collapsing tau onto v0 * skeleton_{low-1}(tau minus v0)."""
    v0, rest = tau[0], tau[1:]
    for j in range(len(tau) - 2, low - 1, -1):
        for rho in combinations(rest, j + 1):
            yield rho, (v0,) + rho


def _apply_pairs(Y: SimplicialComplex, plan, verify: bool) -> tuple[set[Simplex], Counter]:
    removed: set[Simplex] = set()
    per_dim: Counter = Counter()
    current = set(Y.simplices) if verify else None
    for tau, low in plan:
        for rho, sigma in _cone_pairs(tau, low):
            if verify:
                _check_free_pair(current, rho, sigma, Y.n)
                current.discard(rho)
                current.discard(sigma)
            removed.add(rho)
            removed.add(sigma)
            per_dim[len(rho) - 1] += 1
    return removed, per_dim


def _check_free_pair(current: set[Simplex], rho: Simplex, sigma: Simplex, n: int) -> None:
    if rho not in current or sigma not in current:
        raise LawViolation(f"pair ({rho}, {sigma}) not present at removal time")
    members = set(rho)
    cofaces = [tuple(sorted(rho + (v,))) for v in range(n + 1) if v not in members]
    cofaces = [c for c in cofaces if c in current]
    if cofaces != [sigma]:
        raise LawViolation(f"{rho} is not free: cofaces {cofaces}")


@dataclass
class CollapseReport:
    ell: int
    f: tuple[int, ...]
    f_prime: tuple[int, ...]
    g: tuple[int, ...]
    g_hat: dict[int, int]
    g_prime: int
    B: dict[int, int]
    good_inventory: list[tuple[Simplex, int]] = field(default_factory=list)
    removed_pairs: dict[int, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "f": list(self.f),
            "f_prime": list(self.f_prime),
            "g": list(self.g),
            "g_hat": {str(k): v for k, v in self.g_hat.items()},
            "g_prime": self.g_prime,
            "B": {str(k): v for k, v in self.B.items()},
            "good_inventory": [[list(t), g] for t, g in self.good_inventory],
            "removed_pairs": {str(k): v for k, v in sorted(self.removed_pairs.items())},
        }


def _auto_verify(verify: bool | None, n: int) -> bool:
    return n <= VERIFY_MAX_N if verify is None else verify


def collapse_complex(X: Hypergraph, ell: int, verify: bool | None = None
                     ) -> tuple[SimplicialComplex, CollapseReport]:
    """Collapse closure(X) along every good simplex of X.

    With ``verify`` each removal is checked to be an elementary collapse of
    the current complex; ``None`` enables it for n <= 30.
    """
    Y = closure(X)
    table = classify_goodness(X, ell)
    good = table.good()
    removed, per_dim = _apply_pairs(Y, good, _auto_verify(verify, X.n))
    Yp = SimplicialComplex(Y.simplices - removed, n=Y.n, r=Y.r, check=False)
    length = X.r + 1
    report = CollapseReport(
        ell=ell,
        f=Y.f_vector(length),
        f_prime=Yp.f_vector(length),
        g=g_counts(X),
        g_hat={k: g_hat(X, k) for k in range(X.r + 1)},
        g_prime=g_prime(X, ell) if ell <= X.r else 0,
        B=dict(table.B),
        good_inventory=good,
        removed_pairs=dict(per_dim),
    )
    return Yp, report


def collapse_report(X: Hypergraph, ell: int, verify: bool | None = False) -> CollapseReport:
    return collapse_complex(X, ell, verify)[1]


def collapse_with_deleted_dim(X: Hypergraph, k: int, ell: int, verify: bool | None = None
                              ) -> tuple[SimplicialComplex, tuple[int, ...]]:
    """Collapse closure(X) using the good simplices of X without its (k-1)-simplices.

    Only free pairs whose larger member has dimension >= k are applied, so
    some (k-1)-simplices of closure(X) may disappear but nothing lower.
    Returns the collapsed complex and its f-vector.
    """
    if not 1 <= k <= X.r:
        raise ValueError(f"k={k} outside [1, {X.r}]")
    if ell > k:
        raise ValueError("ell must not exceed k")
    Xt = Hypergraph([t for t in X if len(t) != k], n=X.n, r=X.r)
    table = classify_goodness(Xt, ell)
    plan = [(t, max(g, k - 1)) for t, g in table.good() if len(t) - 1 >= k]
    Y = closure(X)
    removed, _ = _apply_pairs(Y, plan, _auto_verify(verify, X.n))
    Yp = SimplicialComplex(Y.simplices - removed, n=Y.n, r=Y.r, check=False)
    return Yp, Yp.f_vector(X.r + 1)


def survivor_faces(tau: Simplex, Yp: SimplicialComplex) -> Counter:
    """Number of faces of ``tau`` still in ``Yp``, keyed by dimension."""
    out: Counter = Counter()
    for size in range(1, len(tau) + 1):
        out[size - 1] = sum(1 for f in combinations(tau, size) if f in Yp.simplices)
    return out


def expected_survivors(dim_tau: int, level: int) -> int:
    return comb(dim_tau, level)
