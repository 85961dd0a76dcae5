import random

import pytest

from actantnet.errors import DomainError
from actantnet.graph import (
    ActantGraph,
    GraphNode,
    bipartite_graph,
    compare_modes,
    connected_components,
    largest_component,
    to_graph,
)
from actantnet.matrix import extract_block
from actantnet.tokenizer import HASHTAG, MENTION
from conftest import build_cooccurrence, corpus_of, random_corpus, random_graph


def word_graph(n, edges):
    g = ActantGraph([GraphNode("word", f"n{k}", f"n{k}", 1) for k in range(n)])
    for i, j in edges:
        g.add_edge(i, j, 1)
    return g


def keyset(g):
    return {n.canonical for n in g.nodes}


def test_to_graph_tiny(tiny_corpus):
    _, _, C = build_cooccurrence(tiny_corpus)
    g = to_graph(C)
    assert [n.canonical for n in g.nodes] == ["a", "b", "x"]
    assert [n.doc_frequency for n in g.nodes] == [2, 2, 2]
    assert g.edge_list() == [(0, 1, 1), (0, 2, 2), (1, 2, 1)]


def test_to_graph_min_edge_weight(tiny_corpus):
    _, _, C = build_cooccurrence(tiny_corpus)
    g = to_graph(C, min_edge_weight=2)
    assert g.edge_list() == [(0, 2, 2)]


def test_to_graph_no_offdiagonal():
    _, _, C = build_cooccurrence(corpus_of("#a", "#b"))
    g = to_graph(C)
    assert g.n_nodes == 2 and g.n_edges == 0


def test_no_self_loops_or_duplicates():
    g = word_graph(3, [(0, 1)])
    with pytest.raises(ValueError):
        g.add_edge(1, 1, 1)
    with pytest.raises(ValueError):
        g.add_edge(1, 0, 2)  # duplicate of (0, 1)
    with pytest.raises(ValueError):
        g.add_edge(0, 2, 0)  # non-positive weight


def test_bipartite_tiny(tiny_corpus):
    _, _, C = build_cooccurrence(tiny_corpus)
    g = bipartite_graph(extract_block(C, HASHTAG, MENTION))
    got = {
        (g.nodes[i].canonical, g.nodes[j].canonical, w) for i, j, w in g.edge_list()
    }
    assert got == {("a", "x", 2), ("b", "x", 1)}
    # no within-class edge a-b
    assert all(
        {g.nodes[i].cls, g.nodes[j].cls} == {HASHTAG, MENTION} for i, j in g.edges
    )


def test_bipartite_all_zero_block():
    # hashtags and mentions never co-occur: edgeless bipartite graph
    _, _, C = build_cooccurrence(corpus_of("#a", "@x"))
    g = bipartite_graph(extract_block(C, HASHTAG, MENTION))
    assert g.n_nodes == 2 and g.n_edges == 0


def test_bipartite_same_class_rejected(tiny_corpus):
    _, _, C = build_cooccurrence(tiny_corpus)
    with pytest.raises(DomainError):
        bipartite_graph(extract_block(C, HASHTAG, HASHTAG))


def test_hashtag_only_tweet_mechanism(four_tweet_corpus):
    # {#c, #d} have a whole-matrix edge but no bipartite edges
    _, _, C = build_cooccurrence(four_tweet_corpus)
    whole = to_graph(C)
    two = bipartite_graph(extract_block(C, HASHTAG, MENTION))
    whole_pairs = {(whole.nodes[i].canonical, whole.nodes[j].canonical) for i, j in whole.edges}
    assert ("c", "d") in whole_pairs
    two_touched = {two.nodes[i].canonical for i, j in two.edges} | {
        two.nodes[j].canonical for i, j in two.edges
    }
    assert "c" not in two_touched and "d" not in two_touched
    assert {"c", "d"} <= keyset(two)  # still nodes, just isolated


# --- components ---------------------------------------------------------------


def test_largest_component_size_comparison():
    g = word_graph(5, [(0, 1), (2, 3), (3, 4)])
    lcc = largest_component(g)
    assert {n.canonical for n in lcc.nodes} == {"n2", "n3", "n4"}


def test_largest_component_identity_on_triangle():
    g = word_graph(3, [(0, 1), (1, 2), (0, 2)])
    lcc = largest_component(g)
    assert keyset(lcc) == {"n0", "n1", "n2"}
    assert lcc.edge_list() == g.edge_list()


def test_largest_component_ties_and_idempotence():
    # two components of equal size: the one with the smallest key wins
    nodes = [GraphNode("word", c, c, 1) for c in ["d", "c", "a", "b"]]
    g = ActantGraph(nodes)
    g.add_edge(0, 1, 1)  # {d, c}
    g.add_edge(2, 3, 1)  # {a, b}
    lcc = largest_component(g)
    assert keyset(lcc) == {"a", "b"}
    again = largest_component(lcc)
    assert keyset(again) == {"a", "b"} and again.edge_list() == lcc.edge_list()


def test_largest_component_empty():
    assert largest_component(ActantGraph([])).n_nodes == 0


class UnionFind:
    # test-local oracle, independent of the BFS implementation
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def test_largest_component_against_union_find_oracle():
    rng = random.Random(77)
    for _ in range(50):
        n = 50
        edges = set()
        for _k in range(rng.randint(0, 80)):
            i, j = rng.sample(range(n), 2)
            edges.add((min(i, j), max(i, j)))
        g = word_graph(n, sorted(edges))
        uf = UnionFind(n)
        for i, j in edges:
            uf.union(i, j)
        groups = {}
        for v in range(n):
            groups.setdefault(uf.find(v), set()).add(v)
        max_size = max(len(s) for s in groups.values())
        # ties break on the smallest (class, canonical), i.e. string order
        best = min(
            (s for s in groups.values() if len(s) == max_size),
            key=lambda s: min(f"n{v}" for v in s),
        )
        lcc = largest_component(g)
        assert {n_.canonical for n_ in lcc.nodes} == {f"n{v}" for v in best}


def test_components_ordering():
    g = word_graph(6, [(0, 1), (0, 2), (3, 4)])
    comps = connected_components(g)
    assert [len(c) for c in comps] == [3, 2, 1]


# --- whole vs 2-mode comparison -----------------------------------------------


def test_compare_modes_fixture(four_tweet_corpus):
    _, _, C = build_cooccurrence(four_tweet_corpus)
    whole = to_graph(C)
    two = bipartite_graph(extract_block(C, HASHTAG, MENTION))
    report = compare_modes(whole, two)
    assert report.whole_lcc_size == 3
    assert report.two_mode_lcc_size == 3
    assert report.lost_actants == [(HASHTAG, "c"), (HASHTAG, "d")]
    assert report.per_class_loss == {HASHTAG: 2}
    kv = report.to_kv()
    assert "whole_lcc=3" in kv and "lost=hashtag:c,hashtag:d" in kv


def test_compare_identical_graphs_zero_loss(tiny_corpus):
    _, _, C = build_cooccurrence(tiny_corpus)
    g = to_graph(C)
    report = compare_modes(g, g)
    assert report.lost_count == 0 and report.lost_actants == []


def test_compare_vocabulary_mismatch(tiny_corpus, four_tweet_corpus):
    _, _, C1 = build_cooccurrence(tiny_corpus)
    _, _, C2 = build_cooccurrence(four_tweet_corpus)
    with pytest.raises(DomainError):
        compare_modes(to_graph(C1), to_graph(C2))


def test_edge_superset_and_lcc_inequality():
    rng = random.Random(1234)
    for _ in range(200):
        corpus = random_corpus(rng)
        _, _, C = build_cooccurrence(corpus)
        if HASHTAG not in C.block_map or MENTION not in C.block_map:
            continue
        whole = to_graph(C)
        two = bipartite_graph(extract_block(C, HASHTAG, MENTION))
        windex = whole.node_index()
        # every bipartite edge appears in the whole graph with equal weight
        for (i, j), w in two.edges.items():
            a = windex[two.nodes[i].key]
            b = windex[two.nodes[j].key]
            key = (min(a, b), max(a, b))
            assert whole.edges.get(key) == w
        assert largest_component(whole).n_nodes >= largest_component(two).n_nodes


def test_induced_preserves_annotations():
    rng = random.Random(5)
    g = random_graph(rng, max_nodes=8, coords=True)
    g.partition = {i: 1 for i in range(g.n_nodes)}
    sub = g.induced(range(0, g.n_nodes, 2))
    assert sub.coords is not None and len(sub.coords) == sub.n_nodes
    assert sub.partition is not None and len(sub.partition) == sub.n_nodes
