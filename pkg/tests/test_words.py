import random
from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagmod.errors import ResourceError
from raagmod.graph import complete, edgeless, parse_graph, path
from raagmod.words import (conjugacy_length, conjugate, conjugator, cyclic_canonical,
                           exponent_sums, invert, is_surface_relator, multiply, normalize,
                           support)

from conftest import all_graphs, random_graph


def shuffle_oracle(g, word):
    """Least (length, lex) word reachable by commuting swaps and adjacent
    cancellations.  Exhaustive, so only for short words."""
    start = tuple(word)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            x, y = w[i], w[i + 1]
            if x == y ^ 1:
                nxt = w[:i] + w[i + 2:]
            elif x >> 1 != y >> 1 and g.adjacent(x >> 1, y >> 1):
                nxt = w[:i] + (y, x) + w[i + 2:]
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return min(seen, key=lambda w: (len(w), w))


def rotation_oracle(g, word):
    """Conjugacy length by repeated rotation and reduction."""
    best = None
    seen = set()
    queue = deque([shuffle_oracle(g, word)])
    while queue:
        w = queue.popleft()
        if w in seen:
            continue
        seen.add(w)
        if best is None or len(w) < best:
            best = len(w)
        for i in range(len(w)):
            queue.append(shuffle_oracle(g, w[i:] + w[:i]))
    return best


def random_word(rng, g, length):
    return tuple(rng.randrange(2 * g.n) for _ in range(length))


def W(g, text):
    return g.parse_word(text)


def test_normalize_examples():
    g = parse_graph("vertices: a b c\nedges: a-b, b-c")
    assert g.word_str(normalize(g, W(g, "b a b^-1"))) == "a"
    k = complete(2)
    assert normalize(k, W(k, "v0 v1 v0^-1 v1^-1")) == ()
    e = parse_graph("vertices: a b c")
    assert g.word_str(normalize(e, W(e, "a c a^-1"))) == "a c a^-1"


def test_normalize_matches_shuffle_oracle():
    rng = random.Random(1)
    for g in all_graphs(5):
        for _ in range(12):
            w = random_word(rng, g, rng.randint(0, 8))
            assert normalize(g, w) == shuffle_oracle(g, w)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**20), st.integers(1, 6), st.integers(0, 14))
def test_normalize_idempotent_and_shortening(seed, n, length):
    rng = random.Random(seed)
    g = random_graph(rng, n)
    w = random_word(rng, g, length)
    nf = normalize(g, w)
    assert normalize(g, nf) == nf
    assert len(nf) <= len(w)
    assert exponent_sums(g, nf) == exponent_sums(g, w)


def test_normalize_extreme_graphs():
    rng = random.Random(2)
    e, k = edgeless(4), complete(4)
    for _ in range(200):
        w = random_word(rng, e, rng.randint(0, 12))
        stack = []
        for l in w:
            if stack and stack[-1] == l ^ 1:
                stack.pop()
            else:
                stack.append(l)
        assert normalize(e, w) == tuple(stack)
        sums = exponent_sums(k, w)
        expect = []
        for v, c in enumerate(sums):
            expect += [2 * v + (c < 0)] * abs(c)
        assert normalize(k, w) == tuple(expect)


def test_group_laws():
    rng = random.Random(3)
    g = parse_graph("vertices: a b c\nedges: a-b, b-c")
    for _ in range(200):
        u = random_word(rng, g, rng.randint(0, 12))
        assert multiply(g, u, invert(g, u)) == ()
        assert multiply(g, (), u) == normalize(g, u)
    assert g.word_str(multiply(g, W(g, "a b"), W(g, "b^-1 c"))) == "a c"


def test_cyclic_canonical_examples():
    e = parse_graph("vertices: a b")
    assert e.word_str(cyclic_canonical(e, W(e, "a b a^-1"))) == "b"
    assert len(cyclic_canonical(e, W(e, "[a,b]"))) == 4
    assert cyclic_canonical(e, ()) == ()


def test_conjugacy_length_matches_rotation_oracle():
    rng = random.Random(4)
    for g in all_graphs(4):
        for _ in range(8):
            w = random_word(rng, g, rng.randint(0, 7))
            assert conjugacy_length(g, w) == rotation_oracle(g, w)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**20), st.integers(1, 6))
def test_cyclic_canonical_is_conjugacy_invariant(seed, n):
    rng = random.Random(seed)
    g = random_graph(rng, n)
    w = random_word(rng, g, rng.randint(0, 10))
    h = random_word(rng, g, rng.randint(0, 4))
    c = cyclic_canonical(g, w)
    assert cyclic_canonical(g, conjugate(g, w, h)) == c
    assert len(c) <= len(normalize(g, w))


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**20), st.integers(1, 6))
def test_conjugator_recovers_conjugating_element(seed, n):
    rng = random.Random(seed)
    g = random_graph(rng, n)
    w = random_word(rng, g, rng.randint(0, 10))
    h = random_word(rng, g, rng.randint(0, 5))
    target = conjugate(g, w, h)
    u = conjugator(g, w, target)
    assert u is not None
    assert conjugate(g, w, u) == target


def test_conjugator_none_for_non_conjugates():
    g = edgeless(2)
    assert conjugator(g, W(g, "v0"), W(g, "v1")) is None


def test_cyclic_canonical_cap():
    g = path(6)
    w = W(g, "v0 v2 v4 v1 v3 v5 v0 v3 v5 v2")
    with pytest.raises(ResourceError):
        cyclic_canonical(g, w, cap=3)


def test_support_examples():
    g = parse_graph("vertices: a b c\nedges: a-b, b-c")
    assert support(g, W(g, "b a b^-1")) == {0}
    assert support(g, ()) == set()
    e = parse_graph("vertices: a1 b1 a2 b2")
    assert support(e, W(e, "[a1,b1][a2,b2]")) == {0, 1, 2, 3}


def test_surface_relator_recognition():
    e = parse_graph("vertices: a b")
    assert is_surface_relator(e, W(e, "a b a^-1 b^-1")) == [(0, 2)]
    assert is_surface_relator(e, ()) == []
    assert is_surface_relator(e, W(e, "a b a b")) is None
    e4 = edgeless(4)
    w = W(e4, "[v0,v1][v2,v3]")
    pairs = is_surface_relator(e4, w)
    prod = ()
    for a, b in pairs:
        prod += (a, b, a ^ 1, b ^ 1)
    assert normalize(e4, prod) == normalize(e4, w)
    assert is_surface_relator(e4, W(e4, "[v0,v1][v0,v2]")) is None
