"""Reduced simplicial homology with integer coefficients.

Betti numbers default to ranks over GF(p) with p = 2**31 - 1.  The exact
mode computes Smith normal form invariant factors over Z so that torsion
can be reported.  Both reductions eliminate sparse pivots first (fewest
nonzeros in the column, then in the row); the integer reduction only
pivots on units and finishes the leftover block densely.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable

from .complex import SimplicialComplex, facets
from .errors import ResourceCapError

PRIME = 2**31 - 1
#: default limit on nonzero entries of a single boundary matrix
NNZ_CAP = 5_000_000


@dataclass
class SparseIntMatrix:
    """Column-major sparse integer matrix; ``columns[j]`` maps row -> value."""

    rows: int
    cols: int
    columns: list[dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.columns:
            self.columns = [{} for _ in range(self.cols)]
        if len(self.columns) != self.cols:
            raise ValueError("column count mismatch")

    @classmethod
    def from_entries(cls, rows: int, cols: int,
                     entries: Iterable[tuple[int, int, int]]) -> "SparseIntMatrix":
        m = cls(rows, cols)
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            if i in m.columns[j]:
                raise ValueError(f"duplicate entry at ({i}, {j})")
            if v:
                m.columns[j][i] = int(v)
        return m

    @classmethod
    def from_dense(cls, dense) -> "SparseIntMatrix":
        dense = [list(row) for row in dense]
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls.from_entries(rows, cols, ((i, j, v) for i, row in enumerate(dense)
                                             for j, v in enumerate(row) if v))

    @property
    def entries(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, v) for j, col in enumerate(self.columns) for i, v in col.items())

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for col in other.columns:
            acc: dict[int, int] = {}
            for k, b in col.items():
                for i, a in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            out.append({i: v for i, v in acc.items() if v})
        return SparseIntMatrix(self.rows, other.cols, out)


def boundary_matrix(Y: SimplicialComplex, k: int) -> SparseIntMatrix:
    """Matrix of the boundary map from k-chains to (k-1)-chains.

    Rows and columns follow the canonical order.  ``k == 0`` gives the
    augmentation map: a single row of ones.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    cols = Y.of_dim(k)
    if k == 0:
        return SparseIntMatrix(1, len(cols), [{0: 1} for _ in cols])
    row_index = {s: i for i, s in enumerate(Y.of_dim(k - 1))}
    columns = []
    for s in cols:
        columns.append({row_index[f]: (-1) ** j for j, f in enumerate(facets(s))})
    return SparseIntMatrix(len(row_index), len(cols), columns)


class _Eliminator:
    """Sparse pivoted elimination by column operations.

    ``cols[c]`` holds column c as {row: value}; ``rows[r]`` is the set of
    columns with a nonzero in row r.
    """

    def __init__(self, columns: list[dict[int, int]], modulus: int | None):
        self.p = modulus
        self.cols: dict[int, dict[int, int]] = {}
        self.rows: dict[int, set[int]] = {}
        for c, col in enumerate(columns):
            col = {r: (v % modulus if modulus else v) for r, v in col.items()}
            col = {r: v for r, v in col.items() if v}
            if not col:
                continue
            self.cols[c] = col
            for r in col:
                self.rows.setdefault(r, set()).add(c)
        self.heap = [(len(col), c) for c, col in self.cols.items()]
        heapq.heapify(self.heap)
        self.deferred: set[int] = set()

    def _is_pivot(self, v: int) -> bool:
        return True if self.p else v in (1, -1)

    def _inverse(self, v: int) -> int:
        return pow(v, -1, self.p) if self.p else v  # units are self-inverse over Z

    def pivot_count(self) -> int:
        count = 0
        while self.heap:
            size, c = heapq.heappop(self.heap)
            col = self.cols.get(c)
            if col is None or len(col) != size:
                continue
            best = None
            for r, v in col.items():
                if self._is_pivot(v) and (best is None or len(self.rows[r]) < len(self.rows[best])):
                    best = r
            if best is None:
                self.deferred.add(c)
                continue
            self._eliminate(best, c)
            count += 1
        return count

    def _eliminate(self, r0: int, c0: int) -> None:
        p = self.p
        pivot_col = self.cols.pop(c0)
        self.deferred.discard(c0)
        inv = self._inverse(pivot_col[r0])
        for c in list(self.rows[r0]):
            if c == c0:
                continue
            col = self.cols[c]
            factor = col[r0] * inv
            if p:
                factor %= p
            for r, v in pivot_col.items():
                new = col.get(r, 0) - factor * v
                if p:
                    new %= p
                if new:
                    if r not in col:
                        self.rows[r].add(c)
                    col[r] = new
                elif r in col:
                    del col[r]
                    self.rows[r].discard(c)
            if col:
                self.deferred.discard(c)
                heapq.heappush(self.heap, (len(col), c))
            else:
                del self.cols[c]
                self.deferred.discard(c)
        for r in pivot_col:
            self.rows[r].discard(c0)
        del self.rows[r0]

    def remainder(self) -> list[list[int]]:
        """Dense copy of whatever was not eliminated."""
        cols = sorted(self.cols)
        rows = sorted({r for c in cols for r in self.cols[c]})
        ri = {r: i for i, r in enumerate(rows)}
        dense = [[0] * len(cols) for _ in rows]
        for j, c in enumerate(cols):
            for r, v in self.cols[c].items():
                dense[ri[r]][j] = v
        return dense


def _check_cap(M: SparseIntMatrix, cap: int | None) -> None:
    if cap is not None and M.nnz > cap:
        raise ResourceCapError(
            f"matrix has {M.nnz} nonzeros (cap {cap}); collapse the complex first")


def rank_mod_p(M: SparseIntMatrix, p: int = PRIME, cap: int | None = NNZ_CAP) -> int:
    _check_cap(M, cap)
    return _Eliminator(M.columns, p).pivot_count()


def _dense_invariants(A: list[list[int]]) -> list[int]:
    """Nonzero Smith invariants of a small dense integer matrix."""
    A = [row[:] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            clean = True
            a = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // a
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // a
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        clean = False
            if not clean:
                # smaller remainder becomes the new pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                A[t], A[i] = A[i], A[t]
                for row in A:
                    row[t], row[j] = row[j], row[t]
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % a), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
        t += 1
    return _normalise_chain(diag)


def _normalise_chain(diag: list[int]) -> list[int]:
    d = sorted(diag)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    return d


def smith_normal_form(M: SparseIntMatrix, cap: int | None = NNZ_CAP) -> tuple[int, list[int]]:
    """Rank and nonzero invariant factors d1 | d2 | ... of ``M`` over Z."""
    _check_cap(M, cap)
    elim = _Eliminator(M.columns, None)
    units = elim.pivot_count()
    rest = _dense_invariants(elim.remainder())
    factors = [1] * units + rest
    return len(factors), _normalise_chain(factors)


@dataclass(frozen=True)
class HomologyProfile:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...] | None
    empty: bool

    def as_dict(self) -> dict:
        return {
            "betti": list(self.betti),
            "torsion": None if self.torsion is None else [list(t) for t in self.torsion],
            "empty": self.empty,
        }


def homology_profile(Y: SimplicialComplex, mode: str = "field", top: int | None = None,
                     cap: int | None = NNZ_CAP, prime: int = PRIME) -> HomologyProfile:
    """Reduced Betti numbers (and torsion when ``mode == "exact"``) of ``Y``.

    Dimensions 0..top are reported; ``top`` defaults to the complex's r.
    """
    if mode not in ("field", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    if top is None:
        top = max(Y.r, Y.dim, 0)
    if Y.is_empty():
        torsion = tuple(() for _ in range(top + 1)) if mode == "exact" else None
        return HomologyProfile((0,) * (top + 1), torsion, True)

    ranks = [0] * (top + 2)
    factors: list[list[int]] = [[] for _ in range(top + 2)]
    for k in range(top + 2):
        if Y.count(k) == 0 or (k > 0 and Y.count(k - 1) == 0):
            continue
        M = boundary_matrix(Y, k)
        if mode == "exact":
            ranks[k], inv = smith_normal_form(M, cap)
            factors[k] = [d for d in inv if d > 1]
        else:
            ranks[k] = rank_mod_p(M, prime, cap)
    betti = tuple(Y.count(k) - ranks[k] - ranks[k + 1] for k in range(top + 1))
    torsion = tuple(tuple(factors[k + 1]) for k in range(top + 1)) if mode == "exact" else None
    return HomologyProfile(betti, torsion, False)


def reduced_euler_characteristic(f: Iterable[int]) -> int:
    return sum((-1) ** k * x for k, x in enumerate(f)) - 1


def euler_poincare_holds(Y: SimplicialComplex, profile: HomologyProfile) -> bool:
    if Y.is_empty():
        return all(b == 0 for b in profile.betti)
    f = Y.f_vector(max(Y.dim + 1, len(profile.betti)))
    return reduced_euler_characteristic(f) == sum((-1) ** k * b for k, b in enumerate(profile.betti))
