from itertools import combinations

import numpy as np
import pytest

from upperplex.combinatorics import (
    combination_table,
    rank_combination,
    unrank_combination,
    unrank_many,
)


@pytest.mark.parametrize("m,k", [(1, 1), (5, 2), (7, 3), (9, 4), (6, 6)])
def test_rank_matches_lexicographic_enumeration(m, k):
    for rank, c in enumerate(combinations(range(m), k)):
        assert rank_combination(c, m) == rank
        assert unrank_combination(rank, m, k) == c


def test_table_and_batch_unrank_agree():
    table = combination_table(12, 3)
    assert table.shape == (220, 3)
    ranks = np.array([0, 5, 219])
    assert unrank_many(ranks, 12, 3) == [tuple(table[i]) for i in ranks]
    assert unrank_many([], 12, 3) == []


def test_unrank_out_of_range():
    with pytest.raises(ValueError):
        unrank_combination(10, 5, 2)
