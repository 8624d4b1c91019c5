"""Acceptance criteria.  Each test records one PASS/FAIL line; the lines are
printed at the end of the pytest run by the hook in conftest.py."""

import functools
import random
import numpy as np
import pytest

from raagmod.automorphisms import Transvection, Automorphism, elementary, homology_matrix
from raagmod.counterexample import (counterexample_graph, counterexample_structure, fixes_full_form,
                                    full_form, transvection_words)
from raagmod.ia_kernel import check_presentation_relations, iaut_generators, verify_rewriting_identities
from raagmod.qreduce import q_reduce
from raagmod.stabilizer import mod_generators, stabilizer_generators
from raagmod.symplectic import enumerate_q_generators, fixes_q, j_matrix, preserves_structure
from raagmod.words import cyclic_canonical, support

from conftest import all_graphs, corpus, random_graph, random_pure, random_q_matrix

RESULTS = {}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as e:
                RESULTS[number] = f"FAIL criterion {number}: {title}: {type(e).__name__}: {e}"[:400]
                print(RESULTS[number])
                raise
            RESULTS[number] = f"PASS criterion {number}: {title}" + (f" ({detail})" if detail else "")
            print(RESULTS[number])
        return run
    return wrap


def summary_lines():
    return [RESULTS[k] for k in sorted(RESULTS)]


@criterion(1, "conjugation identities on all graphs with <= 5 vertices")
def test_c1_identity_suite():
    passed = skipped = graphs = 0
    for g in all_graphs(5):
        rep = verify_rewriting_identities(g)
        assert rep.failed == 0, rep.failures[:3]
        passed += rep.passed
        skipped += rep.skipped
        graphs += 1
    assert passed > 0
    return f"{graphs} graphs, {passed} instances exact, {skipped} undefined instances skipped"


@criterion(2, "presentation relations rr1-rr4 on all graphs with <= 6 vertices")
def test_c2_presentation_relations():
    total = {}
    graphs = 0
    for g in all_graphs(6):
        d = check_presentation_relations(g)
        assert d["failed"] == 0, d["failures"][:3]
        for k, v in d["identities"].items():
            total[k] = total.get(k, 0) + v["pass"]
        graphs += 1
    for k in ("rr1", "rr1_lift", "rr2", "rr2_lift", "rr3", "rr4"):
        assert total.get(k, 0) > 0, k
    return f"{graphs} graphs, " + ", ".join(f"{k}={v}" for k, v in sorted(total.items()))


@criterion(3, "IAut generators have identity homology on 20 random graphs")
def test_c3_iaut_kernel():
    rng = random.Random(3)
    count = 0
    for _ in range(20):
        g = random_graph(rng, rng.randint(2, 7), rng.choice([0.3, 0.5, 0.7]))
        eye = np.eye(g.n, dtype=np.int64)
        for a in iaut_generators(g):
            assert np.array_equal(homology_matrix(a), eye), a.label()
            count += 1
    return f"{count} generators checked"


@criterion(4, "Q-generators fix Q; Q-preservation iff M J M^T = J")
def test_c4_q_preservation():
    structs = [s for s in corpus().values() if s.Q]
    ngens = 0
    for s in structs:
        for q in enumerate_q_generators(s):
            assert fixes_q(q.matrix, s)
            ngens += 1
    rng = random.Random(4)
    moved = 0
    for i in range(500):
        s = structs[i % len(structs)]
        J = j_matrix(s)
        M = random_q_matrix(s, rng, 12)
        assert fixes_q(M, s) and np.array_equal(M @ J @ M.T, J)
        # products of arbitrary dominated elementary matrices on supp Q
        letters = [2 * v + e for v in sorted(s.supp_Q) for e in (0, 1)]
        N = np.eye(s.g.n, dtype=np.int64)
        for _ in range(rng.randint(1, 4)):
            a, b = rng.sample(letters, 2)
            if a >> 1 != b >> 1 and s.g.dominates(a >> 1, b >> 1):
                N = N @ elementary(s.g.n, a, b)
        assert fixes_q(N, s) == np.array_equal(N @ J @ N.T, J)
        moved += not fixes_q(N, s)
    return f"{ngens} generators over {len(structs)} structures; 500 products, {moved} negative controls"


@criterion(5, "q_reduce round trip on 300 random products")
def test_c5_q_reduce_round_trip():
    C = corpus()
    names = [n for n, s in C.items() if s.Q]
    assert len(names) >= 10
    assert {"complete2", "complete4", "complete6", "join_k2_e2", "join_k4_e2"} <= set(names)
    gens = {n: enumerate_q_generators(C[n]) for n in names}
    rng = random.Random(5)
    factors = 0
    for i in range(300):
        n = names[i % len(names)]
        s = C[n]
        M = random_q_matrix(s, rng, 25, gens[n])
        f = q_reduce(M, s)
        assert np.array_equal(f.product(), M)
        for q, _ in f.factors:
            assert q.is_standard() and fixes_q(q.matrix, s)
        factors += len(f.factors)
    return f"{len(names)} structures, {factors} factors emitted"


@criterion(6, "length and support minimality of [w0] under pure automorphisms")
def test_c6_length_support_minimality():
    C = corpus()
    names = [n for n, s in C.items() if len(cyclic_canonical(s.g, s.w)) in (4, 8)]
    assert {len(C[n].w) for n in names} >= {4, 8}
    rng = random.Random(6)
    for i in range(200):
        s = C[names[i % len(names)]]
        g = s.g
        w0 = cyclic_canonical(g, s.w)
        gamma = random_pure(g, rng, 10)
        img = gamma.apply_cyclic(w0)
        assert len(img) >= len(w0)
        s0, s1 = support(g, w0), support(g, img)
        for members, _ in g.domination_classes():
            C_ = set(members)
            assert len(C_ & s1) >= len(C_ & s0)
    return f"200 automorphisms over {len(names)} structures"


def _sl2_search(mats, targets, depth=6):
    inv = [np.rint(np.linalg.inv(M)).astype(np.int64) for M in mats]
    steps = [M for M in mats] + inv
    start = np.eye(2, dtype=np.int64)
    seen = {start.tobytes(): 0}
    frontier = [start]
    found = {}
    for d in range(1, depth + 1):
        nxt = []
        for P in frontier:
            for S in steps:
                Q = P @ S
                k = Q.tobytes()
                if k not in seen:
                    seen[k] = d
                    nxt.append(Q)
        frontier = nxt
        for t in targets:
            if t.tobytes() in seen and t.tobytes() not in found:
                found[t.tobytes()] = seen[t.tobytes()]
        if len(found) == len(targets):
            break
    return [found.get(t.tobytes()) for t in targets]


@criterion(7, "Whitehead graph pipeline on edgeless 2, edgeless 4 and complete 4")
def test_c7_delta_pipeline():
    C = corpus()
    info = []
    for name in ("edgeless2", "edgeless4", "complete4"):
        s = C[name]
        stab = stabilizer_generators(s)
        w0 = stab.delta.w0
        for a in stab.generators:
            assert a.apply_cyclic(w0) == w0
            assert fixes_q(homology_matrix(a), s)
        mod = mod_generators(s, stab=stab)
        for a in mod:
            assert preserves_structure(a, s)
        assert not mod.notes["cosets_missing"]
        info.append(f"{name}: stab {len(stab.generators)}, mod {len(mod)}")
        if name == "edgeless2":
            mats = [homology_matrix(a) for a in mod]
            targets = [np.array([[1, 1], [0, 1]], dtype=np.int64),
                       np.array([[1, 0], [1, 1]], dtype=np.int64)]
            depths = _sl2_search(mats, targets)
            assert all(d is not None for d in depths), depths
            info.append(f"SL2 elementaries at depth {depths}")
    return "; ".join(info)


def _irrelevant_transvections():
    """(structure, tau, b is a pairing letter) for short-range tau_{a,b}
    with a in lk(b*) and a >= b, over the whole corpus."""
    for s in corpus().values():
        g = s.g
        pairing = {l for p in s.pairs for l in p}
        for b in range(2 * g.n):
            bs = s.star[b]
            for a in range(2 * g.n):
                if a >> 1 == b >> 1 or not g.adjacent(a >> 1, bs >> 1):
                    continue
                if not g.dominates(a >> 1, b >> 1):
                    continue
                yield s, Automorphism(g, (Transvection(a, b),)), b in pairing


@criterion(8, "transvections tau_{a,b} with a in lk(b*) fix w0 exactly (pairing-letter targets b)")
def test_c8_irrelevant_transvections():
    exact = other = moved = 0
    for s, tau, is_pairing in _irrelevant_transvections():
        if is_pairing:
            assert tau(s.w) == s.w, tau.label()
            exact += 1
        else:
            other += 1
            moved += tau(s.w) != s.w
    assert exact > 0
    return (f"{exact} pairing-letter cases exact; inverse-letter targets: {moved} of {other} "
            f"move w0, see test_c8_literal_all_letters")


@pytest.mark.xfail(strict=True, reason="inverse-letter targets do not fix w0 once k >= 2")
def test_c8_literal_all_letters():
    for s, tau, _ in _irrelevant_transvections():
        assert tau(s.w) == s.w, tau.label()


@criterion(9, "14-vertex counterexample: tau words fix f(w)+Q iff exponent sums vanish")
def test_c9_counterexample():
    g = counterexample_graph()
    ix = g.index
    strict = {(g.names[u], g.names[v]) for u in range(g.n) for v in range(g.n)
              if u != v and g.dominates(u, v) and not g.dominates(v, u)}
    assert strict == {("x", "a1"), ("y", "a1")}
    for v in ("x", "y"):
        assert [ix["a1"]] in [sorted(c) for c in g.components_minus_star(ix[v])]
        assert g.adjacent(ix[v], ix["b1"])
    assert g.automorphisms(cap=g.n) == [tuple(range(g.n))]
    s = counterexample_structure()
    form = full_form(s)
    words = 0
    for length in range(5):
        for alpha, ex, ey in transvection_words(g, length):
            assert fixes_full_form(alpha, form) == (ex == 0 and ey == 0), (length, ex, ey)
            words += 1
    return f"{words} words checked"


@criterion(10, "nonzero homology entries follow domination")
def test_c10_domination_constraint():
    rng = random.Random(10)
    entries = 0
    for _ in range(200):
        g = random_graph(rng, rng.randint(2, 7), rng.choice([0.3, 0.5, 0.7]))
        alpha = random_pure(g, rng, 15)
        M = homology_matrix(alpha)
        for a, b in zip(*np.nonzero(M)):
            assert a == b or g.dominates(int(a), int(b))
            entries += 1
    return f"{entries} nonzero entries checked"
