import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagmod.errors import InputError, ResourceError
from raagmod.graph import Graph, complete, edgeless, parse_graph, path

from conftest import all_graphs, graph_from_edges


def lk(g, v):
    return {u for u in range(g.n) if g.adjacent(u, v)}


def test_neighborhood_examples():
    g = path(3)
    link, star = g.neighborhood(1)
    assert set(link) == {0, 2} and set(star) == {0, 1, 2}
    link, star = edgeless(3).neighborhood(2)
    assert set(link) == set() and set(star) == {2}
    link, _ = complete(4).neighborhood(0)
    assert set(link) == {1, 2, 3}


def test_unknown_vertex():
    with pytest.raises(InputError):
        path(3).neighborhood("zz")


def test_dominates_examples():
    g = parse_graph("vertices: a b c\nedges: a-b, b-c")
    assert g.dominates("b", "a") and not g.dominates("a", "b") and g.dominates("a", "c")
    e, k = edgeless(4), complete(4)
    for x, y in itertools.product(range(4), repeat=2):
        assert e.dominates(x, y) and k.dominates(x, y)


def test_dominates_matches_set_definition():
    for g in all_graphs(5):
        for x, y in itertools.product(range(g.n), repeat=2):
            assert g.dominates(x, y) == (lk(g, y) <= lk(g, x) | {x})


def test_domination_is_a_preorder():
    for g in all_graphs(6):
        r = range(g.n)
        assert all(g.dominates(x, x) for x in r)
        for x, y, z in itertools.product(r, repeat=3):
            if g.dominates(x, y) and g.dominates(y, z):
                assert g.dominates(x, z)


def test_domination_classes():
    g = path(3)
    classes = [(sorted(m), adj) for m, adj in g.domination_classes()]
    assert classes == [([0, 2], False), ([1], None)]
    assert [(sorted(m), adj) for m, adj in complete(4).domination_classes()] == [([0, 1, 2, 3], True)]
    assert [(sorted(m), adj) for m, adj in edgeless(4).domination_classes()] == [([0, 1, 2, 3], False)]


def test_equivalent_vertices_see_third_vertices_alike():
    for g in all_graphs(5):
        for x, y in itertools.combinations(range(g.n), 2):
            if g.equivalent(x, y):
                for z in set(range(g.n)) - {x, y}:
                    assert g.adjacent(x, z) == g.adjacent(y, z)


def test_components_minus_star():
    assert path(3).components_minus_star(1) == []
    assert [set(c) for c in path(4).components_minus_star(1)] == [{3}]
    assert [set(c) for c in edgeless(3).components_minus_star(0)] == [{1}, {2}]


def test_components_partition_the_complement():
    for g in all_graphs(5):
        for v in range(g.n):
            comps = g.components_minus_star(v)
            union = set()
            for c in comps:
                assert c and not (union & set(c))
                union |= set(c)
            assert union == set(range(g.n)) - lk(g, v) - {v}


def test_automorphisms_examples():
    assert path(3).automorphisms() == [(0, 1, 2), (2, 1, 0)]
    assert len(complete(5).automorphisms()) == 120
    # degrees 1, 2, 3 distinct apart from a pair that the shape separates
    g = graph_from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (1, 5), (0, 5)])
    assert g.automorphisms()[0] == tuple(range(6))


def test_automorphisms_match_brute_force():
    for g in all_graphs(5):
        brute = []
        for p in itertools.permutations(range(g.n)):
            if all(g.adjacent(p[u], p[v]) for u, v in g.edges):
                brute.append(p)
        assert sorted(g.automorphisms()) == sorted(brute)
        assert g.automorphisms()[0] == tuple(range(g.n))


def test_automorphisms_form_a_group():
    for g in all_graphs(6):
        auts = set(g.automorphisms())
        for p, q in itertools.product(list(auts)[:12], repeat=2):
            assert tuple(p[q[i]] for i in range(g.n)) in auts
        for p in auts:
            inv = [0] * g.n
            for i, j in enumerate(p):
                inv[j] = i
            assert tuple(inv) in auts


def test_automorphism_cap():
    with pytest.raises(ResourceError):
        edgeless(13).automorphisms()


def test_parse_graph():
    g = parse_graph("vertices: a b\nedges: a-b")
    assert g.n == 2 and g.adjacent(0, 1)
    g = parse_graph("vertices: a b c\nedges:")
    assert g.n == 3 and not g.edges
    with pytest.raises(InputError, match="line 1"):
        parse_graph("vertices: a a")
    with pytest.raises(InputError, match="line 2"):
        parse_graph("vertices: a b\nedges: a-z")
    with pytest.raises(InputError, match="line 2"):
        parse_graph("vertices: a b\nedges: a-a")
    g = parse_graph('{"vertices": ["a", "b", "c"], "edges": [["a", "c"]]}')
    assert g.adjacent(0, 2) and not g.adjacent(0, 1)
    with pytest.raises(InputError, match="column"):
        parse_graph('{"vertices": ["a", "b"')


def test_empty_graph_rejected():
    with pytest.raises(InputError):
        parse_graph("vertices:")


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.data())
def test_json_round_trip(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    E = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    g = graph_from_edges(n, E)
    h = parse_graph(__import__("json").dumps(g.to_json()))
    assert h.names == g.names and set(h.edges) == set(g.edges)
