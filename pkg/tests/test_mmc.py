import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import brute_mmc
from rqc.mmc import cover_at_most, is_cover, minimum_message_cover


def random_message_set(rng, max_nodes=8, max_msgs=6, dest=99):
    """Random paths over at most ``max_nodes`` candidate nodes, ending at ``dest``."""
    k = int(rng.integers(1, max_msgs + 1))
    nodes = rng.choice(max_nodes, size=max_nodes, replace=False)
    paths = []
    for _ in range(k):
        length = int(rng.integers(1, 5))
        body = rng.choice(nodes, size=min(length, max_nodes), replace=False)
        paths.append(tuple(int(v) for v in body) + (dest,))
    return paths


paths_st = st.lists(
    st.lists(st.integers(0, 7), min_size=1, max_size=4, unique=True).map(lambda b: tuple(b) + (99,)),
    min_size=0,
    max_size=6,
)


class TestExamples:
    def test_empty(self):
        assert minimum_message_cover([]).cardinality == 0

    def test_shared_relay(self):
        # three messages routed through node 7
        paths = [(1, 7, 0), (2, 7, 0), (3, 7, 0)]
        r = minimum_message_cover(paths)
        assert r.cardinality == 1 and r.cover == {7}

    def test_disjoint_sources(self):
        paths = [(1, 0), (2, 0), (3, 4, 0)]
        assert minimum_message_cover(paths).cardinality == 3

    def test_destination_never_counted(self):
        assert minimum_message_cover([(5, 0)], dest=0).cover == {5}

    def test_zero_hop_rejected(self):
        with pytest.raises(ValueError):
            minimum_message_cover([(0,)], dest=0)

    def test_limit_gives_up(self):
        paths = [(1, 0), (2, 0), (3, 0)]
        r = minimum_message_cover(paths, limit=1)
        assert not r.exact and r.cardinality == 2

    def test_cover_at_most(self):
        paths = [(1, 5, 0), (2, 5, 0), (3, 0)]
        assert cover_at_most(paths, 2)
        assert not cover_at_most(paths, 1)
        assert cover_at_most([], 0)
        assert not cover_at_most(paths, -1)


@given(paths_st)
def test_matches_brute_force(paths):
    r = minimum_message_cover(paths)
    assert r.cardinality == brute_mmc(paths, 99)
    assert is_cover(r.cover, paths)
    assert 99 not in r.cover


@given(paths_st, st.integers(0, 5))
def test_cover_at_most_agrees(paths, k):
    assert cover_at_most(paths, k) == (brute_mmc(paths, 99) <= k)


@given(paths_st, paths_st)
def test_monotone_under_union(a, b):
    assert minimum_message_cover(a).cardinality <= minimum_message_cover(a + b).cardinality


@given(paths_st)
def test_bounded_by_distinct_sources(paths):
    assert minimum_message_cover(paths).cardinality <= len({p[0] for p in paths})


def test_random_sets_against_oracle():
    rng = np.random.default_rng(7)
    for _ in range(200):
        paths = random_message_set(rng)
        assert minimum_message_cover(paths).cardinality == brute_mmc(paths, 99)
