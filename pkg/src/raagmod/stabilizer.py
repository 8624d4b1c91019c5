"""Stabilizers of a symplectic structure.

Builds the graph of length-|w0| conjugacy classes connected to [w0] by
Whitehead moves, a spanning tree of the special shape needed for loop
generators, the four generator families, and finally generators for the
subgroup of Aut fixing w0 exactly and Q.
"""

from collections import deque
from itertools import combinations, product
from math import gcd

import numpy as np

from .automorphisms import (Automorphism, CommTransvection, Inner, Inversion,
                            PartialConj, Transvection, Type1, Whitehead,
                            enumerate_omega, homology_matrix, substitute,
                            trans_set, type1_elements)
from .errors import InvariantError, ResourceError, UnsupportedCase
from .graph import inverse_word
from .symplectic import enumerate_q_generators, fixes_q, preserves_structure
from .words import (conjugator, cyclic_canonical, cyclic_reduce, normalize,
                    support)

DEFAULT_DELTA_STATES = 200_000


class GeneratorSet:
    def __init__(self, name, elements=(), notes=None):
        self.name = name
        self.elements = list(elements)
        self.notes = dict(notes or {})

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def by_tag(self, tag):
        return [a for a in self.elements if a.tag == tag]

    def counts(self):
        out = {}
        for a in self.elements:
            out[a.tag] = out.get(a.tag, 0) + 1
        return dict(sorted(out.items()))

    def to_json(self, with_elements=True):
        d = {"name": self.name, "count": len(self.elements), "by_tag": self.counts()}
        d.update(self.notes)
        if with_elements:
            d["elements"] = [a.to_json() for a in self.elements]
        return d


def _dedupe(autos):
    seen = set()
    out = []
    for a in autos:
        k = a.images
        if k not in seen:
            seen.add(k)
            out.append(a)
    return out


# -- Whitehead graph -------------------------------------------------------------

def _single(g, tok):
    return Automorphism(g, (tok,))


def _is_identity_token(g, tok):
    return _single(g, tok).is_identity()


def delta_labels(g, cap_vertices=8):
    """Edge labels used to build the graph.

    Type 2 automorphisms are taken up to composition with an inner
    automorphism (which does not change their action on conjugacy classes)
    and identity-acting ones are dropped.  Permutation labels are the pure
    Type 1 automorphisms, all of them when there are few enough.
    """
    omega, _, _ = enumerate_omega(g, cap_vertices=cap_vertices)
    type2 = []
    for tok in omega:
        if not isinstance(tok, Whitehead):
            continue
        a = tok.a
        comp = frozenset(l for l in range(2 * g.n) if l >> 1 != a >> 1 and l not in tok.A) | {a ^ 1}
        twin = Whitehead(comp, a ^ 1)
        if (sorted(twin.A), twin.a) < (sorted(tok.A), tok.a):
            continue
        if _is_identity_token(g, tok) or _is_identity_token(g, twin):
            continue
        type2.append(tok)
    t1, complete = type1_elements(g, cap=max(cap_vertices, 12))
    perms = []
    for tok in t1:
        p = tok.perm
        if g.is_pure_permutation(p) and not _is_identity_token(g, tok):
            perms.append(tok)
    return perms, type2, complete


class WhiteheadGraph:
    def __init__(self, g, w0, vertices, edges, perms, type2, perm_complete):
        self.g = g
        self.w0 = w0
        self.vertices = vertices      # list of canonical cyclic words
        self.index = {w: i for i, w in enumerate(vertices)}
        self.edges = edges            # list of (src, token, dst)
        self.perms = perms
        self.type2 = type2
        self.perm_complete = perm_complete

    def to_json(self):
        g = self.g
        return {"vertices": [g.word_str(w) for w in self.vertices],
                "vertex_count": len(self.vertices),
                "edge_count": len(self.edges),
                "loop_count": sum(1 for s, _, d in self.edges if s == d)}

    def to_dot(self, max_edges=None):
        g = self.g
        lines = ["digraph delta {"]
        for i, w in enumerate(self.vertices):
            lines.append(f'  n{i} [label="{g.word_str(w) or "1"}"];')
        for k, (s, tok, d) in enumerate(self.edges):
            if max_edges is not None and k >= max_edges:
                break
            lines.append(f'  n{s} -> n{d} [label="{tok.label(g)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_delta(s, cap_vertices=8, cap_length=12, cap_states=DEFAULT_DELTA_STATES):
    g = s.g
    w0 = cyclic_canonical(g, s.w)
    if g.n > cap_vertices:
        raise ResourceError(f"{g.n} vertices exceeds cap {cap_vertices}")
    if len(w0) > cap_length:
        raise ResourceError(f"|w0| = {len(w0)} exceeds cap {cap_length}")
    perms, type2, complete = delta_labels(g, cap_vertices)
    labels = perms + type2
    autos = [_single(g, t) for t in labels]
    L = len(w0)
    vertices = [w0]
    index = {w0: 0}
    edges = []
    queue = deque([w0])
    while queue:
        w = queue.popleft()
        i = index[w]
        for tok, a in zip(labels, autos):
            r = a.apply_cyclic(w)
            if len(r) < L:
                raise InvariantError(f"{tok.label(g)} shortens {g.word_str(w)}")
            if len(r) > L:
                continue
            j = index.get(r)
            if j is None:
                j = index[r] = len(vertices)
                vertices.append(r)
                if len(vertices) > cap_states:
                    raise ResourceError(f"Whitehead graph exceeds {cap_states} vertices")
                queue.append(r)
            edges.append((i, tok, j))
    return WhiteheadGraph(g, w0, vertices, edges, perms, type2, complete)


# -- structured tree ---------------------------------------------------------------

class StructuredTree:
    """Spanning tree of the non-permutation component plus one permutation
    edge per remaining vertex, with path automorphisms on the subtree."""

    def __init__(self, delta):
        self.delta = delta
        g = delta.g
        self.g = g
        n = len(delta.vertices)
        out_edges = [[] for _ in range(n)]
        for e in delta.edges:
            out_edges[e[0]].append(e)
        supp0 = support(g, delta.w0)
        self.parent = {0: None}       # vertex -> (parent, token) in T'
        self.images = {0: tuple((2 * v,) for v in range(g.n))}
        self.inv_images = {0: self.images[0]}
        self.paths = {0: ()}
        order = [0]
        queue = deque([0])
        self.normalized_edges = 0
        while queue:
            i = queue.popleft()
            w = delta.vertices[i]
            for _, tok, j in out_edges[i]:
                if isinstance(tok, Type1) or j in self.parent:
                    continue
                tok = self._normalize_edge(tok, w, delta.vertices[j], supp0)
                self.parent[j] = (i, tok)
                one = _single(g, tok)
                inv = _single(g, tok.inverse())
                self.images[j] = tuple(substitute(g, one.images, im) for im in self.images[i])
                self.inv_images[j] = tuple(substitute(g, self.inv_images[i], im) for im in inv.images)
                self.paths[j] = (tok,) + self.paths[i]
                order.append(j)
                queue.append(j)
        self.tprime = order
        # attach the rest by a single permutation edge from T'
        self.perm_edges = {}
        self.unattached = []
        tp = set(order)
        for j in range(n):
            if j in tp:
                continue
            found = None
            for sigma in delta.perms:
                src = _single(g, sigma.inverse()).apply_cyclic(delta.vertices[j])
                i = delta.index.get(src)
                if i is not None and i in tp:
                    found = (i, sigma)
                    break
            if found is None:
                if delta.perm_complete:
                    raise InvariantError("vertex not reachable by one permutation from T'")
                self.unattached.append(j)
            else:
                self.perm_edges[j] = found
        for j in order:
            self.check_path(j)

    def _normalize_edge(self, tok, w, target, supp0):
        g = self.g
        sw = support(g, w)
        if tok.a >> 1 not in sw:
            raise InvariantError("tree edge multiplier outside the support")
        extra = {l for l in tok.A if l ^ 1 not in tok.A and l >> 1 not in sw and l >> 1 != tok.a >> 1}
        if not extra:
            return tok
        t1 = Whitehead(tok.A - extra, tok.a)
        t2 = Whitehead(frozenset(extra) | {tok.a}, tok.a)
        if _single(g, t2).apply_cyclic(w) != cyclic_canonical(g, w):
            raise InvariantError("discarded part of a tree edge moves its source")
        if _single(g, t1).apply_cyclic(w) != target:
            raise InvariantError("trimmed tree edge changes its target")
        self.normalized_edges += 1
        return t1

    def alpha(self, j):
        return Automorphism(self.g, self.paths[j], images=self.images[j])

    def alpha_inverse(self, j):
        toks = tuple(t.inverse() for t in reversed(self.paths[j]))
        return Automorphism(self.g, toks, images=self.inv_images[j])

    def check_path(self, j):
        g = self.g
        got = cyclic_canonical(g, substitute(g, self.images[j], self.delta.w0))
        if got != self.delta.vertices[j]:
            raise InvariantError("path automorphism does not reach its vertex")

    def to_json(self):
        g = self.g
        d = self.delta
        return {"tprime_vertices": len(self.tprime),
                "permutation_edges": len(self.perm_edges),
                "unattached": len(self.unattached),
                "normalized_edges": self.normalized_edges,
                "tree_edges": [{"from": g.word_str(d.vertices[p]), "to": g.word_str(d.vertices[j]),
                                "label": t.label(g)} for j, (p, t) in
                               sorted((j, v) for j, v in self.parent.items() if v is not None)]}


def maximal_tree(delta):
    return StructuredTree(delta)


# -- generator families -----------------------------------------------------------------

def _letter_map(tok, n):
    return tuple(2 * tok.perm[l >> 1] + ((l & 1) ^ (tok.signs[l >> 1] < 0)) for l in range(2 * n))


def _subgroup_generators(g, elements, keep):
    """Small generating set of the subgroup of Type 1 elements satisfying
    ``keep`` (a finite group, given by full enumeration)."""
    n = g.n
    ident = tuple(range(2 * n))
    gens, gmaps = [], []
    closure = {ident}
    for t in elements:
        if not keep(t):
            continue
        m = _letter_map(t, n)
        if m in closure:
            continue
        gens.append(t)
        gmaps.append(m)
        closure = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for b in frontier:
                for h in gmaps:
                    c = tuple(b[h[l]] for l in range(2 * n))
                    if c not in closure:
                        closure.add(c)
                        nxt.append(c)
            frontier = nxt
    return gens


def edge_generators(s, delta, tree):
    """Loop automorphisms alpha_{beta[w]}^-1 beta alpha_{[w]} for edges beta
    between vertices of T' whose label fixes Q by construction."""
    g = s.g
    supp0 = s.supp_w
    tp = set(tree.tprime)
    suppQ_letters = {l for v in s.supp_Q for l in (2 * v, 2 * v + 1)}

    def perm_fixes_q(tok):
        return all(tok.perm[v] == v and tok.signs[v] > 0 for v in s.supp_Q)

    perm_labels = set()
    if delta.perm_complete:
        w0 = delta.w0
        allowed = lambda t: perm_fixes_q(t) and delta.index.get(_single(g, t).apply_cyclic(w0)) in tp
        perm_labels = set(_subgroup_generators(g, delta.perms, allowed))
    else:
        perm_labels = {t for t in delta.perms if perm_fixes_q(t)}
    out = []
    seen = set()
    for i, tok, j in delta.edges:
        if i not in tp or j not in tp:
            continue
        if isinstance(tok, Type1):
            if tok not in perm_labels:
                continue
        elif not trans_set(tok.A, tok.a) <= supp0:
            continue
        if tree.parent.get(j) is not None and tree.parent[j][0] == i and tree.parent[j][1] == tok:
            continue
        one = _single(g, tok)
        mid = tuple(substitute(g, one.images, im) for im in tree.images[i])
        imgs = tuple(substitute(g, tree.inv_images[j], im) for im in mid)
        if imgs in seen or all(im == (2 * v,) for v, im in enumerate(imgs)):
            continue
        seen.add(imgs)
        factors = tuple(t.inverse() for t in reversed(tree.paths[j])) + (tok,) + tree.paths[i]
        out.append(Automorphism(g, factors, images=imgs, tag="S_e",
                                note=f"edge {tok.label(g)} at vertex {i}"))
    return out


def independent_generators(s):
    g = s.g
    out = []
    for b in sorted(s.supp_Q):
        for a in range(g.n):
            if a != b and g.dominates(a, b):
                out.append(Automorphism(g, (Transvection(2 * a, 2 * b),), tag="S_i"))
        out.append(Automorphism(g, (Inversion(b),), tag="S_i"))
    return out


def kernel_generators(s):
    g = s.g
    out = []
    for c in sorted(s.supp_Q):
        doms = [x for x in range(g.n) if x != c and g.dominates(x, c)]
        for x, y in combinations(doms, 2):
            if not g.adjacent(x, y):
                out.append(Automorphism(g, (CommTransvection(2 * x, 2 * y, 2 * c),), tag="S_k"))
        for x in doms:
            if not g.adjacent(x, c):
                out.append(Automorphism(g, (PartialConj(2 * x, frozenset([c])),), tag="S_k"))
    for x in range(g.n):
        out.append(Automorphism(g, (Inner((2 * x,)),), tag="S_k"))
    return out


def lifted_q_generators(s):
    return [q.lift() for q in enumerate_q_generators(s)]


class StabilizerResult:
    def __init__(self, s, delta, tree, gens, independent):
        self.s = s
        self.delta = delta
        self.tree = tree
        self.generators = gens
        self.independent = independent


def stabilizer_generators(s, delta=None, tree=None, cap_vertices=8, cap_length=12,
                          cap_states=DEFAULT_DELTA_STATES, verify=True):
    """Generators of the pure automorphisms fixing [w0] and Q."""
    g = s.g
    delta = delta or build_delta(s, cap_vertices, cap_length, cap_states)
    tree = tree or StructuredTree(delta)
    se = edge_generators(s, delta, tree)
    sk = kernel_generators(s)
    sq = lifted_q_generators(s)
    gens = GeneratorSet("stabilizer", se + sk + sq,
                        notes={"delta_vertices": len(delta.vertices),
                               "delta_edges": len(delta.edges)})
    if verify:
        w0 = delta.w0
        eye = np.eye(g.n, dtype=np.int64)
        for a in gens:
            if a.apply_cyclic(w0) != w0:
                raise InvariantError(f"{a.tag} element does not fix [w0]: {a.label()[:200]}")
            M = homology_matrix(a)
            if not fixes_q(M, s):
                raise InvariantError(f"{a.tag} element does not fix Q")
            if a.tag == "S_k" and not np.array_equal(M, eye):
                raise InvariantError("kernel generator acts on homology")
    return StabilizerResult(s, delta, tree, gens, GeneratorSet("independent", independent_generators(s)))


# -- centralizers and the final generating set ----------------------------------------------

def _is_join(g, verts):
    """Whether the induced subgraph on verts splits as a join."""
    verts = sorted(verts)
    if len(verts) < 2:
        return False
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        u = stack.pop()
        for v in verts:
            if v not in seen and not g.adjacent(u, v):
                seen.add(v)
                stack.append(v)
    return len(seen) < len(verts)


def proper_power_root(g, w, cap=10**5):
    """A word u and k >= 2 with w conjugate to u^k, or None."""
    core, _ = cyclic_reduce(g, w)
    counts = {}
    for l in core:
        counts[l] = counts.get(l, 0) + 1
    d = 0
    for c in counts.values():
        d = gcd(d, c)
    if d <= 1:
        return None
    L = len(core)
    states = {core}
    queue = deque([core])
    from .words import _rotations
    while queue:
        cur = queue.popleft()
        for k in range(2, d + 1):
            if d % k == 0 and L % k == 0:
                u = cur[:L // k]
                if normalize(g, u * k) == cur:
                    return u, k
        for _, r in _rotations(g, cur):
            if r not in states:
                states.add(r)
                if len(states) > cap:
                    raise ResourceError("root search cap exceeded")
                queue.append(r)
    return None


def centralizer_surface_relator(s):
    g = s.g
    w0 = s.w
    if not w0:
        gens = [Automorphism(g, (Inner((2 * v,)),), tag="centralizer") for v in range(g.n)]
        return GeneratorSet("centralizer", gens, notes={"generators": list(g.names)})
    supp = support(g, w0)
    if _is_join(g, supp):
        raise UnsupportedCase("support of w0 induces a join; centralizer case not implemented")
    if proper_power_root(g, w0) is not None:
        raise UnsupportedCase("w0 is a proper power")
    central = [v for v in range(g.n) if v not in supp and all(g.adjacent(v, u) for u in supp)]
    words = [w0] + [(2 * v,) for v in central]
    gens = [Automorphism(g, (Inner(u),), tag="centralizer") for u in words]
    return GeneratorSet("centralizer", gens,
                        notes={"generators": [g.word_str(u) for u in words]})


def _fix_exactly(s, alpha):
    """Compose with an inner automorphism so that w0 is fixed exactly."""
    g = s.g
    img = alpha(s.w)
    if img == s.w:
        return alpha
    u = conjugator(g, s.w, img)
    if u is None:
        raise InvariantError("image of w0 is not conjugate to w0")
    fix = Automorphism(g, (Inner(inverse_word(u)),))
    fix.images  # force the cache so the product composes images directly
    alpha.images
    out = fix * alpha
    out.tag, out.note = alpha.tag, alpha.note
    return out


def mod_generators(s, stab=None, **caps):
    """Generators for the automorphisms fixing w0 and Q."""
    g = s.g
    cent = centralizer_surface_relator(s)
    stab = stab or stabilizer_generators(s, **caps)
    out = [_fix_exactly(s, a) for a in stab.generators]
    out += list(cent)
    cosets = _coset_representatives(s, stab)
    out += cosets["found"]
    out = [a for a in _dedupe(out) if not a.is_identity()]
    for a in out:
        if not preserves_structure(a, s):
            raise InvariantError(f"{a.tag} element does not preserve (w, Q)")
    return GeneratorSet("mod", out, notes={"cosets_total": cosets["total"],
                                           "cosets_found": len(cosets["found"]),
                                           "cosets_missing": cosets["missing"]})


def _coset_representatives(s, stab):
    """For each graph symmetry class outside the pure subgroup, try to find
    an element of the coset fixing [w0] and Q."""
    g = s.g
    delta = stab.delta
    perms = g.automorphisms()
    reps = []
    for p in perms:
        if g.is_pure_permutation(p):
            continue
        if any(all(g.equivalent(r[v], p[v]) for v in range(g.n)) for r in reps):
            continue
        reps.append(p)
    found, missing = [], []
    if not reps:
        return {"total": 0, "found": [], "missing": []}
    # path automorphisms to every vertex of delta, following any edges
    paths = {0: Automorphism.identity(g)}
    queue = deque([0])
    adj = {}
    for i, tok, j in delta.edges:
        adj.setdefault(i, []).append((tok, j))
    while queue:
        i = queue.popleft()
        for tok, j in adj.get(i, ()):
            if j not in paths:
                paths[j] = _single(g, tok) * paths[i]
                queue.append(j)
    fixers = [Automorphism.identity(g)]
    for t in delta.perms:
        a = _single(g, t)
        if a.apply_cyclic(delta.w0) == delta.w0:
            fixers.append(a)
    for p in reps:
        sigma = Automorphism(g, (Type1(tuple(p), (1,) * g.n),))
        j = delta.index.get(sigma.apply_cyclic(delta.w0))
        cand = None
        if j is not None:
            base = paths[j].inverse() * sigma
            for theta in fixers:
                c = theta * base
                if fixes_q(homology_matrix(c), s):
                    cand = c
                    break
        if cand is None:
            missing.append({g.names[v]: g.names[p[v]] for v in range(g.n)})
        else:
            cand.tag = "coset"
            found.append(_fix_exactly(s, cand))
    return {"total": len(reps), "found": found, "missing": missing}
