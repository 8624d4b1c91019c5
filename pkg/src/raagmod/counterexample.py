"""A 14-vertex graph on which fixing a full symplectic form together with the
surface relator is not a finitely generated condition.

The graph was found by random search and frozen.  Vertices are a1..a7 and
b1..b7 with a3 renamed x and a4 renamed y; a_i b_i are adjacent for i >= 3.
"""

from itertools import product

from .automorphisms import Automorphism, Transvection, homology_matrix
from .graph import Graph
from .symplectic import SymplecticStructure, WedgeForm, f_of_surface_relator, wedge_act

NAMES = ["a1", "a2", "x", "y", "a5", "a6", "a7", "b1", "b2", "b3", "b4", "b5", "b6", "b7"]
EDGES = [(0, 5), (0, 10), (0, 11), (1, 3), (1, 6), (1, 7), (1, 9), (1, 10), (1, 11), (1, 13),
         (2, 5), (2, 7), (2, 9), (2, 10), (2, 11), (2, 13), (3, 5), (3, 7), (3, 8), (3, 10),
         (3, 11), (3, 12), (3, 13), (4, 7), (4, 8), (4, 9), (4, 10), (4, 11), (4, 12), (4, 13),
         (5, 6), (5, 7), (5, 8), (5, 9), (5, 12), (6, 9), (6, 10), (6, 12), (6, 13), (7, 8),
         (7, 9), (7, 13), (8, 11), (8, 13), (9, 11)]
PAIRS = [("a1", "b1"), ("a2", "b2"), ("x", "b3"), ("y", "b4"),
         ("a5", "b5"), ("a6", "b6"), ("a7", "b7")]


def counterexample_graph():
    return Graph(NAMES, [(NAMES[u], NAMES[v]) for u, v in EDGES])


def counterexample_structure():
    """(w, Q) with w = [a1,b1][a2,b2] and Q the sum over the adjacent pairs."""
    g = counterexample_graph()
    return SymplecticStructure(g, [(g.parse_letter(a), g.parse_letter(b)) for a, b in PAIRS])


def full_form(s):
    """f(w) + Q, a symplectic form on all of homology."""
    return f_of_surface_relator(s.g, s.w) + s.Q


def transvection_words(g, length):
    """All words of the given length in tau_{x,a1}^{+-1}, tau_{y,a1}^{+-1},
    as (automorphism, exponent sum in tau_x, exponent sum in tau_y)."""
    x, y, a1 = g.index["x"], g.index["y"], g.index["a1"]
    gens = [(Transvection(2 * x, 2 * a1), 1, 0), (Transvection(2 * x + 1, 2 * a1), -1, 0),
            (Transvection(2 * y, 2 * a1), 0, 1), (Transvection(2 * y + 1, 2 * a1), 0, -1)]
    for combo in product(gens, repeat=length):
        yield (Automorphism(g, [t for t, _, _ in combo]),
               sum(c[1] for c in combo), sum(c[2] for c in combo))


def fixes_full_form(alpha, form):
    return wedge_act(homology_matrix(alpha), form) == form
