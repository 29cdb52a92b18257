import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from statrel.closure import (
    IndexOutOfRange,
    RelationEdge,
    UnionFind,
    build_relation_graph,
    closure_edges,
    equivalence_classes,
    find_chain,
    reachability_classes,
)
from statrel.verify import verify_chain


def _edges(pairs, kind="X"):
    return [RelationEdge(i, j, kind) for i, j in pairs]


def _related(classes):
    rel = set()
    for cls in classes:
        rel |= {(i, j) for i in cls for j in cls}
    return rel


# -- classes -------------------------------------------------------------------

def test_lemma5_C_edges_give_one_class(lemma5):
    edges = build_relation_graph(lemma5, ["C"])
    assert sorted((e.left, e.right) for e in edges) == [(0, 1), (0, 2)]
    assert equivalence_classes(lemma5, edges) == [[0, 1, 2]]


def test_L_graph_on_lemma5(lemma5):
    edges = build_relation_graph(lemma5, ["L"])
    assert len(edges) == 3


def test_no_edges_gives_singletons():
    assert equivalence_classes(4, []) == [[0], [1], [2], [3]]


def test_cycle_same_as_path():
    path = _edges([(0, 1), (1, 2)])
    cycle = path + _edges([(2, 0)])
    assert equivalence_classes(3, path) == equivalence_classes(3, cycle) == [[0, 1, 2]]


def test_empty_universe():
    assert equivalence_classes(0, []) == []


def test_edge_out_of_range():
    with pytest.raises(IndexOutOfRange):
        equivalence_classes(2, _edges([(0, 2)]))
    with pytest.raises(IndexOutOfRange):
        reachability_classes(2, _edges([(-1, 0)]))


def test_union_find_reports_merges():
    uf = UnionFind(3)
    assert uf.union(0, 1) and not uf.union(1, 0)
    assert uf.find(0) == uf.find(1) != uf.find(2)


def test_closure_edges():
    got = closure_edges(4, _edges([(0, 1), (1, 3)]))
    assert sorted((e.left, e.right) for e in got) == [(0, 1), (0, 3), (1, 3)]


# -- chains --------------------------------------------------------------------

def test_chain_through_table1(lemma5):
    edges = build_relation_graph(lemma5, ["C"])
    chain = find_chain(lemma5, edges, 1, 2)
    assert len(chain) == 2 and chain.kinds == ["C", "C"]
    assert chain.bases == (lemma5[1], lemma5[0], lemma5[2])
    assert verify_chain(chain).ok


def test_chain_to_self_is_empty(lemma5):
    chain = find_chain(lemma5, [], 1, 1)
    assert len(chain) == 0 and chain.bases == (lemma5[1],)


def test_chain_disconnected(lemma5):
    assert find_chain(lemma5, build_relation_graph(lemma5, ["G"]), 1, 2) is None


def test_chain_index_out_of_range(lemma5):
    with pytest.raises(IndexOutOfRange):
        find_chain(lemma5, [], 0, 5)


def test_parallel_graph_matches_serial(lemma5):
    kinds = ["L", "S", "C", "G"]
    serial = build_relation_graph(lemma5, kinds)
    parallel = build_relation_graph(lemma5, kinds, workers=2)
    assert [(e.left, e.right, e.kind) for e in serial] == [
        (e.left, e.right, e.kind) for e in parallel]


# -- closure properties on random relations --------------------------------------

def _random_relation(rng, n):
    return [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 2 * n))]


def test_closure_is_the_least_equivalence_over_100_relations():
    rng = random.Random(1)
    for _ in range(100):
        n = rng.randint(1, 8)
        pairs = _random_relation(rng, n)
        classes = equivalence_classes(n, _edges(pairs))
        rel = _related(classes)
        assert set(pairs) <= rel
        assert all((i, i) in rel for i in range(n))
        assert all((j, i) in rel for i, j in rel)
        assert all((i, k) in rel for i, j in rel for j2, k in rel if j == j2)
        # any equivalence containing the relation contains the closure
        labels = list(range(n))
        for i, j in pairs:
            a, b = labels[i], labels[j]
            labels = [a if v == b else v for v in labels]
        for extra in range(rng.randint(0, 2)):
            a, b = rng.randrange(n), rng.randrange(n)
            la, lb = labels[a], labels[b]
            labels = [la if v == lb else v for v in labels]
        assert all(labels[i] == labels[j] for i, j in rel)


@given(st.integers(1, 8), st.randoms(use_true_random=False))
def test_union_find_agrees_with_bfs(n, rnd):
    edges = _edges(_random_relation(rnd, n))
    assert equivalence_classes(n, edges) == reachability_classes(n, edges)


@given(st.integers(1, 8), st.randoms(use_true_random=False))
def test_closure_is_monotone(n, rnd):
    small = _random_relation(rnd, n)
    big = small + _random_relation(rnd, n)
    assert _related(equivalence_classes(n, _edges(small))) <= _related(
        equivalence_classes(n, _edges(big)))


@given(st.integers(2, 7), st.randoms(use_true_random=False))
def test_chain_exists_iff_same_class(n, rnd):
    from statrel.demos import lemma5_bases
    from statrel.relations import LikelihoodWitness
    universe = [lemma5_bases()[0]] * n
    edges = [RelationEdge(i, j, "L", LikelihoodWitness(1)) for i, j in _random_relation(rnd, n)]
    classes = equivalence_classes(n, edges)
    for a in range(n):
        for b in range(n):
            same = any(a in c and b in c for c in classes)
            chain = find_chain(universe, edges, a, b)
            assert (chain is not None) == same
            if chain is not None:
                assert verify_chain(chain).ok
