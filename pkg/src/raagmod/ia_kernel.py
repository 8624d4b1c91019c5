"""Kernel generators K_Z, the groups G_Z, and the identities behind them.

Everything is checked by evaluating automorphisms on the vertex set, which
is how equality of automorphisms is decided throughout the package.
"""

from collections import deque
from itertools import chain, combinations, product
import random

import numpy as np

from .automorphisms import (Automorphism, CommTransvection, Inner, PartialConj,
                            Transvection, auto, elementary, homology_matrix)
from .errors import InputError, InvariantError, ResourceError


def _check_subset(g, Z):
    Z = frozenset(g._vid(z) for z in Z)
    return Z


def total_conjugations(g):
    return [auto(g, Inner((2 * v,)), tag="inner") for v in range(g.n)]


def kz_generators(g, Z):
    """Commutator transvections, one-term partial conjugations over Z, and
    the total conjugations."""
    Z = sorted(_check_subset(g, Z))
    out = []
    for c in Z:
        doms = [v for v in Z if v != c and g.dominates(v, c)]
        for vx, vy in combinations(doms, 2):
            if g.adjacent(vx, vy):
                continue
            for sx, sy in product((0, 1), repeat=2):
                tok = CommTransvection(2 * vx + sx, 2 * vy + sy, 2 * c)
                out.append(auto(g, tok, tag="commutator_transvection"))
    for x in Z:
        for c in Z:
            if c != x and not g.adjacent(x, c) and g.dominates(x, c):
                out.append(auto(g, PartialConj(2 * x, frozenset([c])), tag="one_term_conjugation"))
    out += total_conjugations(g)
    for a in out:
        if not np.array_equal(homology_matrix(a), np.eye(g.n, dtype=np.int64)):
            raise InvariantError(f"{a.label()} acts nontrivially on homology")
    return out


def gz_generators(g, Z):
    """Dominated transvections over Z and its inverses, plus total conjugations."""
    Z = sorted(_check_subset(g, Z))
    out = []
    for a in Z:
        for b in Z:
            if a != b and g.dominates(a, b):
                for sa, sb in product((0, 1), repeat=2):
                    out.append(auto(g, Transvection(2 * a + sa, 2 * b + sb), tag="transvection"))
    return out + total_conjugations(g)


def iaut_generators(g, cap=12):
    """K_X together with every partial conjugation by a single component."""
    if g.n > cap:
        raise ResourceError(f"{g.n} vertices exceeds cap {cap}")
    out = kz_generators(g, range(g.n))
    seen = {(a.factors[0].m, a.factors[0].Y) for a in out if isinstance(a.factors[0], PartialConj)}
    for x in range(g.n):
        for C in g.components_minus_star(x):
            key = (2 * x, frozenset(C))
            if key not in seen:
                seen.add(key)
                out.append(auto(g, PartialConj(2 * x, frozenset(C)), tag="partial_conjugation"))
    eye = np.eye(g.n, dtype=np.int64)
    for a in out:
        if not np.array_equal(homology_matrix(a), eye):
            raise InvariantError(f"{a.label()} acts nontrivially on homology")
    return out


# -- conjugation identities -------------------------------------------------------

def _tv(a, b):
    return Transvection(2 * a, 2 * b)


def _ctv(x, y, c):
    return CommTransvection(x, y, c)


def _pc(x, Y):
    return PartialConj(2 * x, frozenset(Y))


def _inner(x):
    return Inner((2 * x,))


def _unions(comps):
    for r in range(1, len(comps) + 1):
        for pick in combinations(comps, r):
            yield frozenset(chain.from_iterable(pick))


class IdentityReport:
    def __init__(self):
        self.counts = {}
        self.failures = []
        self.skipped = 0

    def record(self, name, ok, params):
        c = self.counts.setdefault(name, [0, 0])
        c[0 if ok else 1] += 1
        if not ok:
            self.failures.append((name, params))

    @property
    def passed(self):
        return sum(c[0] for c in self.counts.values())

    @property
    def failed(self):
        return sum(c[1] for c in self.counts.values())

    def to_json(self):
        return {"identities": {k: {"pass": v[0], "fail": v[1]} for k, v in sorted(self.counts.items())},
                "passed": self.passed, "failed": self.failed, "skipped": self.skipped,
                "failures": [{"identity": n, "params": p} for n, p in self.failures[:50]]}


def _equal(g, lhs, rhs):
    return Automorphism(g, lhs).images == Automorphism(g, rhs).images


def _conj_by(t, middle):
    """t middle t^-1 as a token tuple."""
    return (t,) + tuple(middle) + (t.inverse(),)


def verify_rewriting_identities(g, report=None, strict=False):
    """Instantiate the transvection/partial-conjugation conjugation identities
    on every admissible tuple of vertices and compare both sides on X."""
    rep = report or IdentityReport()
    n = g.n
    V = range(n)
    names = g.names
    # transvections conjugating partial conjugations
    for x in V:
        unions = list(_unions(g.components_minus_star(x)))
        for a in V:
            for b in V:
                if a == b or not g.dominates(a, b):
                    continue
                for Y in unions:
                    params = {"a": names[a], "b": names[b], "x": names[x],
                              "Y": [names[y] for y in sorted(Y)]}
                    lhs = _conj_by(_tv(a, b), [_pc(x, Y)])
                    if a == x or (a in Y and b in Y) or (a not in Y and b not in Y and x not in (a, b)):
                        rep.record("commute_tv_pc", _equal(g, lhs, (_pc(x, Y),)), params)
                    elif a in Y and b not in Y and b != x:
                        rep.record("eq_a_in_Y", _equal(g, lhs, (_pc(x, Y), _ctv(2 * x, 2 * a, 2 * b))), params)
                    elif a in Y and b == x:
                        Y2 = (Y - {a}) | {x}
                        rep.record("eq_a_in_Y_b_is_x", _equal(g, lhs, (_pc(a, Y2), _pc(x, Y))), params)
                    elif b in Y:
                        rep.record("eq_b_in_Y", _equal(g, lhs, (_pc(x, Y), _ctv(2 * x + 1, 2 * a, 2 * b))), params)
                    elif b == x:
                        rep.record("eq_b_is_x", _equal(g, lhs, (_pc(x, Y), _pc(a, Y))), params)
                    else:
                        raise InvariantError(f"unclassified case {params}")
    # transvections conjugating commutator transvections
    for a, b in product(V, V):
        if a == b or not g.dominates(a, b):
            continue
        for x, y, c in product(V, V, V):
            if len({x, y, c}) < 3 or not (g.dominates(x, c) and g.dominates(y, c)):
                continue
            params = {"a": names[a], "b": names[b], "x": names[x], "y": names[y], "c": names[c]}
            lhs = _conj_by(_tv(a, b), [_ctv(2 * x, 2 * y, 2 * c)])
            kind, rhs = _trans_case(g, a, b, x, y, c)
            if kind is None:
                rep.skipped += 1
                continue
            rep.record(kind, _equal(g, lhs, rhs), params)
    if strict and rep.failed:
        raise InvariantError(f"identity failures: {rep.failures[:5]}")
    return rep


def _inv_tokens(tokens):
    return tuple(t.inverse() for t in reversed(tokens))


def _trans_case(g, a, b, x, y, c):
    """Right-hand side for tau_{a,b} tau_{[x,y],c} tau_{a,b}^-1.

    Returns ``(case name, tokens)`` or ``(None, None)`` when a required
    one-term partial conjugation is undefined.
    """
    base = _ctv(2 * x, 2 * y, 2 * c)
    if a not in (x, y, c) and b not in (x, y, c):
        return "commute_tv_ctv", (base,)
    if c == b:
        if g.adjacent(a, b):
            return None, None
        p = _pc(a, {b})
        return "c_is_b", (p, base, p.inverse())
    if c == a and b not in (x, y):
        if g.adjacent(a, b):
            return None, None
        p = _pc(a, {b})
        return "c_is_a", (base, p, _ctv(2 * y, 2 * x, 2 * b), p.inverse())
    if c == a:
        # b is x or y; reduce b == y to b == x by swapping, then invert
        swapped = b == y
        xx, yy = (y, x) if swapped else (x, y)
        rhs = _long_formula(g, a, b, yy)
        if rhs is None:
            return None, None
        return "c_is_a_b_is_x", (_inv_tokens(rhs) if swapped else rhs)
    # c not in {a, b}
    if b in (x, y):
        swapped = b == y
        xx, yy = (y, x) if swapped else (x, y)
        if a == yy:
            return "commute_tv_ctv", (base,)
        if g.adjacent(b, c):
            return None, None
        p = _pc(b, {c})
        rhs = (p, _ctv(2 * a, 2 * yy, 2 * c), p.inverse(), _ctv(2 * b, 2 * yy, 2 * c))
        return "b_is_x", (_inv_tokens(rhs) if swapped else rhs)
    # a in {x, y}
    return "commute_tv_ctv", (base,)


def _long_formula(g, a, b, y):
    """Right-hand side when c = a and b = x, in which y >= a ~ b."""
    if g.adjacent(a, b) or g.adjacent(a, y) or g.adjacent(b, y):
        return None
    cab = _pc(a, {b})
    cba = _pc(b, {a})
    cyb = _pc(y, {b})
    cya = _pc(y, {a})
    ca = _inner(a)
    cb = _inner(b)
    return (cab, ca.inverse(), cba, cb.inverse(), cyb.inverse(),
            _ctv(2 * y, 2 * a, 2 * b), cya, _ctv(2 * y + 1, 2 * b + 1, 2 * a + 1),
            cb, cba.inverse(), ca, cab.inverse())


# -- presentation relations ---------------------------------------------------------

def _mcomm(A, B):
    return A @ B @ _minv(A) @ _minv(B)


def _minv(M):
    inv = np.rint(np.linalg.inv(M)).astype(np.int64)
    if not np.array_equal(M @ inv, np.eye(M.shape[0], dtype=np.int64)):
        raise InvariantError("matrix not unimodular")
    return inv


def _mpow(M, k):
    out = np.eye(M.shape[0], dtype=np.int64)
    for _ in range(k):
        out = out @ M
    return out


def check_presentation_relations(g, Z=None, strict=False):
    """Check the four relation families among elementary matrices E_{a,b}
    (a >= b in Z) and the automorphism lifts of the first two."""
    Z = sorted(_check_subset(g, range(g.n) if Z is None else Z))
    n = g.n
    I = np.eye(n, dtype=np.int64)
    E = {(a, b): elementary(n, 2 * a, 2 * b) for a in Z for b in Z if a != b and g.dominates(a, b)}
    rep = IdentityReport()
    flagged = 0
    for (a, b), (c, d) in product(E, E):
        if b == c:
            continue
        comm = _mcomm(E[a, b], E[c, d])
        if a == d:
            # satisfies the literal condition b != c, a != b but not a != d
            if not np.array_equal(comm, I):
                flagged += 1
            continue
        params = {"a": g.names[a], "b": g.names[b], "c": g.names[c], "d": g.names[d]}
        rep.record("rr1", np.array_equal(comm, I), params)
        lift = (Transvection(2 * a, 2 * b), Transvection(2 * c, 2 * d),
                Transvection(2 * a + 1, 2 * b), Transvection(2 * c + 1, 2 * d))
        expect = (_ctv(2 * a, 2 * c, 2 * b),) if b == d else ()
        rep.record("rr1_lift", _equal(g, lift, expect), params)
    for (a, b), (b2, d) in product(E, E):
        if b2 != b or a == d:
            continue
        params = {"a": g.names[a], "b": g.names[b], "d": g.names[d]}
        rep.record("rr2", np.array_equal(_mcomm(E[a, b], E[b, d]) @ _minv(E[a, d]), I), params)
        lift = (Transvection(2 * a, 2 * b), Transvection(2 * b, 2 * d),
                Transvection(2 * a + 1, 2 * b), Transvection(2 * b + 1, 2 * d),
                Transvection(2 * a + 1, 2 * d))
        rep.record("rr2_lift", _equal(g, lift, (_ctv(2 * b, 2 * a, 2 * d),)), params)
    classes = {}
    for members, _ in g.domination_classes():
        sub = [v for v in members if v in Z]
        for v in sub:
            classes[v] = sub
    for a, b in product(Z, Z):
        if a == b or not g.equivalent(a, b):
            continue
        params = {"a": g.names[a], "b": g.names[b]}
        S = E[a, b] @ _minv(E[b, a]) @ E[a, b]
        rep.record("rr3", np.array_equal(_mpow(S, 4), I), params)
        if len(classes[a]) == 2:
            T = S @ E[b, a]
            rep.record("rr4", np.array_equal(_mpow(S, 2) @ _minv(_mpow(T, 3)), I), params)
    out = rep.to_json()
    out["rr1_literal_condition_violations"] = flagged
    if strict and rep.failed:
        raise InvariantError(f"relation failures: {rep.failures[:5]}")
    return out


# -- normality spot check ----------------------------------------------------------

def _images_key(a):
    return a.images


def express_in(g, target, gens, depth=4, cap=200_000):
    """Search words of length <= depth in ``gens`` and inverses equal to
    ``target`` by meeting in the middle.  Returns a token tuple or None."""
    steps = []
    for a in gens:
        steps.append(a)
        steps.append(a.inverse())
    ident = Automorphism.identity(g)
    half = (depth + 1) // 2
    rest = depth - half

    def ball(r):
        layer = {ident.images: ident}
        seen = dict(layer)
        for _ in range(r):
            nxt = {}
            for a in layer.values():
                for s in steps:
                    b = a * s
                    k = b.images
                    if k not in seen:
                        seen[k] = b
                        nxt[k] = b
                        if len(seen) > cap:
                            raise ResourceError("normality search cap exceeded")
            layer = nxt
        return seen

    left = ball(half)
    if target.images in left:
        return left[target.images].factors
    tinv = target.inverse()
    right = ball(rest)
    # target = L R  <=>  L = target R^-1
    for b in right.values():
        k = (target * b.inverse()).images
        if k in left:
            return left[k].factors + b.factors
    return None


def kz_normality_spotcheck(g, Z, trials=100, seed=0, depth=4):
    """Conjugate random K_Z generators by random G_Z generators and look
    for an expression in K_Z generators.  Misses are inconclusive."""
    rng = random.Random(seed)
    K = kz_generators(g, Z)
    G = gz_generators(g, Z)
    found = inconclusive = 0
    for _ in range(trials):
        k = rng.choice(K)
        h = rng.choice(G)
        conj = h * k * h.inverse()
        if express_in(g, conj, K, depth=depth) is None:
            inconclusive += 1
        else:
            found += 1
    return {"found": found, "inconclusive": inconclusive}
