from collections import defaultdict
from itertools import combinations
from fractions import Fraction as F

import pytest

from upperplex.complex import (
    Hypergraph,
    SimplicialComplex,
    closure,
    full_skeleton,
    maximal_simplices,
)
from upperplex.errors import DimensionOverflowError, ResourceCapError
from upperplex.measure import (
    ProbabilityAssignment,
    alpha_for_probabilities,
    canonical_simplices,
    distribution_to_json,
    lower_probability,
    total_measure_check,
    upper_probability,
)

EDGE = closure(Hypergraph([(0, 1)]))
EMPTY = SimplicialComplex([], n=1, r=1)
POINTS = SimplicialComplex([(0,), (1,)])


def test_upper_examples_on_an_edge():
    p0, p1 = F(1, 3), F(2, 7)
    P = ProbabilityAssignment(1, 1, (p0, p1))
    assert upper_probability(EDGE, P) == p1
    assert upper_probability(EMPTY, P) == (1 - p0) ** 2 * (1 - p1)
    assert upper_probability(POINTS, P) == p0 ** 2 * (1 - p1)


def test_lower_examples_on_an_edge():
    p0, p1 = F(1, 3), F(2, 7)
    P = ProbabilityAssignment(1, 1, (p0, p1))
    assert lower_probability(EDGE, P) == p0 ** 2 * p1
    assert lower_probability(EMPTY, P) == (1 - p0) ** 2
    assert lower_probability(SimplicialComplex([(0,)], n=1, r=1), P) == p0 * (1 - p0)


def test_dimension_overflow():
    P = ProbabilityAssignment(2, 1, (F(1, 2), F(1, 2)))
    tri = closure(Hypergraph([(0, 1, 2)]))
    with pytest.raises(DimensionOverflowError):
        upper_probability(tri, P)
    with pytest.raises(DimensionOverflowError):
        lower_probability(tri, P)


def test_assignment_validation():
    with pytest.raises(ValueError):
        ProbabilityAssignment(1, 1, (F(3, 2), F(0)))
    with pytest.raises(ValueError):
        ProbabilityAssignment(1, 2, (F(1), F(1), F(1)))
    P = ProbabilityAssignment.parse(2, 1, "1/2,1/3")
    assert P.p == (F(1, 2), F(1, 3)) and P.q == (F(1, 2), F(2, 3))


ASSIGNMENTS = {
    (1, 1): [(F(1, 2), F(1, 2)), (F(1, 3), F(4, 5)), (F(0), F(1, 7))],
    (2, 2): [(F(1, 2), F(1, 3), F(1, 5)), (F(2, 3), F(1), F(0)), (F(1, 9), F(5, 6), F(3, 4))],
    (3, 1): [(F(1, 2), F(1, 2)), (F(3, 4), F(1, 10)), (F(1), F(2, 5))],
}


@pytest.mark.parametrize("n,r", list(ASSIGNMENTS))
@pytest.mark.parametrize("model", ["upper", "lower"])
def test_measures_are_normalised_and_match_closed_form(n, r, model):
    for p in ASSIGNMENTS[(n, r)]:
        check = total_measure_check(n, r, ProbabilityAssignment(n, r, p), model)
        assert check.total == 1
        assert check.mismatches == []
        assert check.ok


def test_deterministic_inclusion_puts_all_mass_on_skeleton():
    P = ProbabilityAssignment(2, 1, (F(1), F(1)))
    check = total_measure_check(2, 1, P)
    assert check.distribution == {full_skeleton(2, 1): F(1)}


def test_positivity_matches_support():
    P = ProbabilityAssignment(2, 2, (F(1, 2), F(0), F(1, 3)))
    check = total_measure_check(2, 2, P, "upper")
    support = set(check.distribution)
    # reachable exactly when no maximal simplex is an edge
    universe = canonical_simplices(2, 2)
    for size in range(len(universe) + 1):
        for members in combinations(universe, size):
            try:
                Y = SimplicialComplex(members, n=2, r=2)
            except ValueError:
                continue
            positive = upper_probability(Y, P) > 0
            assert positive == (Y in support)
            assert positive == all(len(m) != 2 for m in maximal_simplices(Y))


def test_enumeration_bound():
    P = ProbabilityAssignment(5, 2, (F(1, 2),) * 3)
    with pytest.raises(ResourceCapError):
        total_measure_check(5, 2, P)


def upward_closed_complement_distribution(n, r, P):
    """Law of the complement of the up-set generated by X', X' drawn with p and q swapped."""
    universe = canonical_simplices(n, r)
    N = len(universe)
    out = defaultdict(F)
    for mask in range(1 << N):
        Xp = [universe[i] for i in range(N) if mask >> i & 1]
        w = F(1)
        for i, s in enumerate(universe):
            d = len(s) - 1
            w *= P.q[d] if mask >> i & 1 else P.p[d]
        up = {t for t in universe if any(set(s) <= set(t) for s in Xp)}
        out[frozenset(set(universe) - up)] += w
    return out


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1)])
def test_duality_between_models(n, r):
    P = ProbabilityAssignment(n, r, (F(2, 5), F(1, 3)))
    dual = upward_closed_complement_distribution(n, r, P)
    lower = total_measure_check(n, r, P, "lower").distribution
    assert {Y.simplices: m for Y, m in lower.items()} == {k: v for k, v in dual.items() if v}


def test_distribution_json():
    P = ProbabilityAssignment(1, 1, (F(1, 2), F(1, 2)))
    rows = distribution_to_json(total_measure_check(1, 1, P).distribution)
    assert sum(F(r["mass_num"], r["mass_den"]) for r in rows) == 1
    assert {"complex": [[0], [1], [0, 1]], "mass_num": 1, "mass_den": 2} in rows


def test_alpha_encoding_round_trips():
    alpha = alpha_for_probabilities(2, [0.5, 1 / 3, 0.0, 1.0])
    assert [2 ** -a for a in alpha] == pytest.approx([0.5, 1 / 3, 0.0, 1.0])
