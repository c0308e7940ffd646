"""Simplices, hypergraphs and simplicial complexes on the vertex set {0, ..., n}.

A simplex is a strictly increasing tuple of vertex labels.  A
:class:`Hypergraph` is an arbitrary set of simplices; a
:class:`SimplicialComplex` is closed under taking nonempty faces.  Both are
immutable and iterate in the canonical order (dimension-major,
lexicographic within a dimension).
"""

from __future__ import annotations

import os
import re
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, TextIO

Simplex = tuple[int, ...]

#: soft limit on simplex dimension
MAX_DIM = 7


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonicalise a vertex collection into a simplex."""
    s = tuple(sorted(int(v) for v in vertices))
    if not s:
        raise ValueError("the empty set is not a simplex")
    if any(a == b for a, b in zip(s, s[1:])):
        raise ValueError(f"repeated vertex in {s}")
    if s[0] < 0:
        raise ValueError(f"negative vertex in {s}")
    return s


def dim(s: Simplex) -> int:
    return len(s) - 1


def facets(s: Simplex) -> list[Simplex]:
    """Codimension-one faces; facet j omits the j-th vertex."""
    if len(s) == 1:
        return []
    return [s[:j] + s[j + 1:] for j in range(len(s))]


def faces(s: Simplex) -> Iterator[Simplex]:
    """All nonempty faces of ``s``, including ``s`` itself."""
    for size in range(1, len(s) + 1):
        yield from combinations(s, size)


def _check_dim(d: int) -> None:
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the supported limit {MAX_DIM}")


class _SimplexSet:
    __slots__ = ("n", "r", "simplices", "_by_dim")

    def __init__(self, simplices: Iterable[Iterable[int]], n: int | None = None,
                 r: int | None = None):
        members = frozenset(simplex(s) for s in simplices)
        top_vertex = max((s[-1] for s in members), default=-1)
        top_dim = max((len(s) - 1 for s in members), default=-1)
        if n is None:
            n = max(top_vertex, 0)
        if r is None:
            r = max(top_dim, 0)
        if top_vertex > n:
            raise ValueError(f"vertex {top_vertex} outside {{0..{n}}}")
        if top_dim > r:
            raise ValueError(f"simplex of dimension {top_dim} exceeds r={r}")
        _check_dim(r)
        by_dim: dict[int, list[Simplex]] = {}
        for s in members:
            by_dim.setdefault(len(s) - 1, []).append(s)
        for lst in by_dim.values():
            lst.sort()
        self.n = int(n)
        self.r = int(r)
        self.simplices = members
        self._by_dim = by_dim

    def __contains__(self, s) -> bool:
        return tuple(s) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[Simplex]:
        for d in sorted(self._by_dim):
            yield from self._by_dim[d]

    def __eq__(self, other) -> bool:
        if not isinstance(other, _SimplexSet):
            return NotImplemented
        return self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash(self.simplices)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, r={self.r}, f={self.f_vector()})"

    @property
    def dim(self) -> int:
        """Largest simplex dimension, -1 when empty."""
        return max(self._by_dim, default=-1)

    def of_dim(self, d: int) -> list[Simplex]:
        """Simplices of dimension ``d`` in lexicographic order."""
        return list(self._by_dim.get(d, ()))

    def count(self, d: int) -> int:
        return len(self._by_dim.get(d, ()))

    def f_vector(self, length: int | None = None) -> tuple[int, ...]:
        if length is None:
            length = max(self.r, self.dim) + 1
        return tuple(self.count(d) for d in range(length))

    def is_empty(self) -> bool:
        return not self.simplices


class Hypergraph(_SimplexSet):
    """An arbitrary finite set of simplices of dimension at most ``r``."""

    __slots__ = ()


class SimplicialComplex(_SimplexSet):
    """A downward-closed set of simplices.

    Pass ``check=False`` only when closure is already guaranteed.
    """

    __slots__ = ()

    def __init__(self, simplices: Iterable[Iterable[int]], n: int | None = None,
                 r: int | None = None, check: bool = True):
        super().__init__(simplices, n=n, r=r)
        if check:
            for s in self.simplices:
                for f in facets(s):
                    if f not in self.simplices:
                        raise ValueError(f"not downward closed: {f} missing below {s}")


def f_vector(S: _SimplexSet, length: int | None = None) -> tuple[int, ...]:
    return S.f_vector(length)


def closure(X: _SimplexSet) -> SimplicialComplex:
    """Smallest complex containing every simplex of ``X``."""
    out: set[Simplex] = set()
    # top-down so shared faces are expanded once
    for d in sorted(X._by_dim, reverse=True):
        for s in X._by_dim[d]:
            if s in out:
                continue
            for f in faces(s):
                out.add(f)
    return SimplicialComplex(out, n=X.n, r=X.r, check=False)


def lower_complex(X: _SimplexSet) -> SimplicialComplex:
    """Largest complex contained in ``X``."""
    keep: set[Simplex] = set()
    for d in sorted(X._by_dim):
        for s in X._by_dim[d]:
            if d == 0 or all(f in keep for f in facets(s)):
                keep.add(s)
    return SimplicialComplex(keep, n=X.n, r=X.r, check=False)


def maximal_simplices(Y: SimplicialComplex) -> set[Simplex]:
    covered: set[Simplex] = set()
    for s in Y.simplices:
        covered.update(facets(s))
    return set(Y.simplices) - covered


def minimal_missing(Y: SimplicialComplex, n: int, r: int) -> set[Simplex]:
    """Simplices of dimension <= r not in ``Y`` whose boundary lies in ``Y``.

    Vertices of {0..n} absent from ``Y`` are included.
    """
    members = Y.simplices
    out = {(v,) for v in range(n + 1) if (v,) not in members}
    for d in range(1, r + 1):
        for rho in Y._by_dim.get(d - 1, ()):
            for v in range(rho[-1] + 1, n + 1):
                s = rho + (v,)
                if s not in members and all(f in members for f in facets(s)):
                    out.add(s)
    return out


def skeleton(Y: SimplicialComplex, k: int) -> SimplicialComplex:
    if k < 0:
        raise ValueError("skeleton dimension must be >= 0")
    keep = [s for d, lst in Y._by_dim.items() if d <= k for s in lst]
    return SimplicialComplex(keep, n=Y.n, r=min(Y.r, k), check=False)


def full_skeleton(n: int, k: int) -> SimplicialComplex:
    """Complete k-skeleton of the n-simplex."""
    _check_dim(k)
    keep = [c for d in range(min(k, n) + 1) for c in combinations(range(n + 1), d + 1)]
    return SimplicialComplex(keep, n=n, r=k, check=False)


def full_skeleton_up_to(Y: _SimplexSet) -> int:
    """Largest k such that ``Y`` contains every simplex of dimension <= k; -1 if none."""
    k = -1
    while k + 1 <= Y.n and Y.count(k + 1) == comb(Y.n + 1, k + 2):
        k += 1
    return k


# -- text format --------------------------------------------------------------

_HEADER = re.compile(r"^#\s*n=(\d+)\s+r=(\d+)\s*$")


def format_simplices(S: _SimplexSet) -> str:
    lines = [f"# n={S.n} r={S.r}"]
    lines.extend(" ".join(map(str, s)) for s in S)
    return "\n".join(lines) + "\n"


def parse_simplices(text: str) -> tuple[int | None, int | None, list[Simplex]]:
    n = r = None
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            m = _HEADER.match(stripped)
            if m and n is None:
                n, r = int(m.group(1)), int(m.group(2))
            continue
        try:
            out.append(simplex(int(tok) for tok in stripped.split()))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return n, r, out


def _read_text(source: str | os.PathLike | TextIO) -> str:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    return source.read()


def read_hypergraph(source) -> Hypergraph:
    n, r, items = parse_simplices(_read_text(source))
    return Hypergraph(items, n=n, r=r)


def read_complex(source) -> SimplicialComplex:
    n, r, items = parse_simplices(_read_text(source))
    return SimplicialComplex(items, n=n, r=r)


def write_simplices(S: _SimplexSet, dest: str | os.PathLike | TextIO) -> None:
    text = format_simplices(S)
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        dest.write(text)

