import itertools
import random
from functools import lru_cache

import pytest

from raagmod.automorphisms import Automorphism, ls_generators
from raagmod.counterexample import counterexample_structure
from raagmod.graph import Graph, complete, disjoint_union, edgeless, join, path
from raagmod.symplectic import SymplecticStructure, standard_pairs


# -- graphs up to isomorphism ---------------------------------------------------

def _canon(n, adj, perms):
    best = None
    for p in perms:
        code = 0
        for u in range(n):
            m = 0
            for v in range(n):
                if adj[u] >> v & 1:
                    m |= 1 << p[v]
            code |= m << (n * p[u])
        if best is None or code < best:
            best = code
    return best


@lru_cache(maxsize=None)
def graphs_up_to_iso(n):
    """Edge lists of all simple graphs on n vertices, one per isomorphism
    class.  Built by adding a vertex to each smaller graph in every way."""
    if n == 1:
        return ((),)
    perms = list(itertools.permutations(range(n)))
    seen = set()
    out = []
    for edges in graphs_up_to_iso(n - 1):
        for nbrs in range(1 << (n - 1)):
            E = list(edges) + [(v, n - 1) for v in range(n - 1) if nbrs >> v & 1]
            adj = [0] * n
            for u, v in E:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            c = _canon(n, adj, perms)
            if c not in seen:
                seen.add(c)
                out.append(tuple(E))
    return tuple(out)


def graph_from_edges(n, edges):
    names = [f"v{i}" for i in range(n)]
    return Graph(names, [(names[u], names[v]) for u, v in edges])


def all_graphs(max_n):
    for n in range(1, max_n + 1):
        for E in graphs_up_to_iso(n):
            yield graph_from_edges(n, E)


def random_graph(rng, n, p=0.5):
    E = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return graph_from_edges(n, E)


# -- automorphisms ----------------------------------------------------------------

def pure_generators(g):
    return [a for a in ls_generators(g, cap=14) if a.tag != "graphic"]


def random_pure(g, rng, length, gens=None):
    gens = gens or pure_generators(g)
    toks = []
    for _ in range(rng.randint(0, length)):
        a = rng.choice(gens)
        toks.extend(a.factors if rng.random() < 0.5 else a.inverse().factors)
    return Automorphism(g, toks)


# -- structures -------------------------------------------------------------------

def structure(g, pairs):
    return SymplecticStructure(g, [(g.parse_letter(a), g.parse_letter(b)) for a, b in pairs])


def corpus():
    """Named symplectic structures used across tests."""
    out = {}
    for n in (2, 4, 6):
        g = edgeless(n)
        out[f"edgeless{n}"] = SymplecticStructure(g, standard_pairs(g))
        g = complete(n)
        out[f"complete{n}"] = SymplecticStructure(g, standard_pairs(g))
    g = join(complete(2, "c"), edgeless(2, "e"))
    out["join_k2_e2"] = structure(g, [("e0", "e1"), ("c0", "c1")])
    g = join(complete(4, "c"), edgeless(2, "e"))
    out["join_k4_e2"] = structure(g, [("e0", "e1"), ("c0", "c1"), ("c2", "c3")])
    g = join(complete(2, "c"), edgeless(4, "e"))
    out["join_k2_e4"] = structure(g, [("e0", "e1"), ("e2", "e3"), ("c0", "c1")])
    g = disjoint_union(complete(2, "c"), edgeless(2, "e"))
    out["union_k2_e2"] = structure(g, [("e0", "e1"), ("c0", "c1")])
    g = disjoint_union(complete(4, "c"), edgeless(2, "e"))
    out["union_k4_e2"] = structure(g, [("e0", "e1"), ("c0", "c1"), ("c2", "c3")])
    g = path(4)
    out["path4"] = structure(g, [("v0", "v2"), ("v1", "v3")])
    out["path4_mixed"] = structure(g, [("v0", "v1"), ("v2", "v3")])
    g = Graph(["b", "c", "a", "d"], [("a", "c"), ("a", "d")])
    out["star_pendant"] = structure(g, [("b", "c"), ("a", "d")])
    g = Graph(["p", "q", "r", "s", "t", "u"],
              [("p", "r"), ("r", "s"), ("s", "t"), ("t", "u"), ("q", "u"), ("p", "s")])
    out["mixed6"] = structure(g, [("p", "q"), ("r", "s"), ("t", "u")])
    out["counterexample"] = counterexample_structure()
    return out


@pytest.fixture(scope="session")
def structures():
    return corpus()


@pytest.fixture
def rng():
    return random.Random(12345)


def random_q_matrix(s, rng, length, gens=None):
    """Product of up to ``length`` Q-generator matrices and their inverses."""
    import numpy as np
    from raagmod.symplectic import enumerate_q_generators
    gens = gens if gens is not None else enumerate_q_generators(s)
    M = np.eye(s.g.n, dtype=np.int64)
    for _ in range(rng.randint(1, length)):
        q = rng.choice(gens)
        A = q.matrix if rng.random() < 0.5 else np.rint(np.linalg.inv(q.matrix)).astype(np.int64)
        M = M @ A
    return M


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
