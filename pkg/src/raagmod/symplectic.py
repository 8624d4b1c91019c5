"""Alternating forms on homology and symplectic structures (w, Q).

Homology classes are integer vectors in the vertex basis; the class of a
letter ``l`` is ``sign(l) * e_{pg l}``.  A ``WedgeForm`` stores an
alternating form as a dict ``{(i, j): c}`` with ``i < j``.
"""

import json
from itertools import product

import numpy as np

from .automorphisms import (Automorphism, Inversion, Transvection, elementary,
                            homology_matrix, inversion_matrix)
from .errors import InputError, InvariantError
from .graph import inverse_word, sign_of
from .words import commutator, is_surface_relator, normalize


class WedgeForm:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        for (i, j), c in (coeffs or {}).items():
            self.add(i, j, c)

    def add(self, i, j, c):
        if i == j or c == 0:
            return self
        if i > j:
            i, j, c = j, i, -c
        v = self.coeffs.get((i, j), 0) + c
        if v:
            self.coeffs[(i, j)] = v
        else:
            self.coeffs.pop((i, j), None)
        return self

    @classmethod
    def wedge(cls, a, b):
        """[a] ^ [b] for letters a, b."""
        return cls().add(a >> 1, b >> 1, sign_of(a) * sign_of(b))

    def __add__(self, other):
        out = WedgeForm(self.coeffs)
        for (i, j), c in other.coeffs.items():
            out.add(i, j, c)
        return out

    def __neg__(self):
        return WedgeForm({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, WedgeForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def support(self):
        return frozenset(v for k in self.coeffs for v in k)

    def to_matrix(self, n):
        K = np.zeros((n, n), dtype=np.int64)
        for (i, j), c in self.coeffs.items():
            K[i, j] = c
            K[j, i] = -c
        return K

    @classmethod
    def from_matrix(cls, K):
        n = K.shape[0]
        if not np.array_equal(K, -K.T):
            raise InvariantError("matrix is not alternating")
        return cls({(i, j): int(K[i, j]) for i in range(n) for j in range(i + 1, n) if K[i, j]})

    def to_json(self, g):
        return {f"{g.names[i]}^{g.names[j]}": c for (i, j), c in sorted(self.coeffs.items())}

    def __repr__(self):
        return f"WedgeForm({self.coeffs})"


def wedge_from_json(g, data):
    if not isinstance(data, dict):
        raise InputError("wedge form must be an object")
    out = WedgeForm()
    for key, c in data.items():
        if key.count("^") != 1 or not isinstance(c, int):
            raise InputError(f"bad wedge entry {key!r}: {c!r}")
        a, b = key.split("^")
        out.add(g._vid(a), g._vid(b), c)
    return out


def wedge_act(M, form):
    """Diagonal action of a homology automorphism on an alternating form."""
    M = np.asarray(M, dtype=np.int64)
    return WedgeForm.from_matrix(M @ form.to_matrix(M.shape[0]) @ M.T)


def decompose_v_vperp(g, form):
    """Split into the part on adjacent pairs and the part on non-adjacent pairs."""
    v, vp = WedgeForm(), WedgeForm()
    for (i, j), c in form.coeffs.items():
        (v if g.adjacent(i, j) else vp).add(i, j, c)
    return v, vp


def f_of_surface_relator(g, word):
    pairs = is_surface_relator(g, word)
    if pairs is None:
        raise InputError("not a surface relator")
    out = WedgeForm()
    for a, b in pairs:
        if not g.adjacent(a >> 1, b >> 1):
            out = out + WedgeForm.wedge(a, b)
    return out


class SymplecticStructure:
    """A pairing of letters covering X, split into the surface relator w on
    non-commuting pairs and the form Q on commuting ones."""

    def __init__(self, g, pairs):
        self.g = g
        if g.n % 2:
            raise InputError("symplectic structure needs an even number of vertices")
        seen = set()
        for a, b in pairs:
            for l in (a, b):
                if l >> 1 in seen:
                    raise InputError(f"vertex {g.names[l >> 1]!r} repeated in pairing")
                seen.add(l >> 1)
        if len(seen) != g.n:
            missing = [g.names[v] for v in range(g.n) if v not in seen]
            raise InputError(f"pairing does not cover {missing}")
        w_pairs = [(a, b) for a, b in pairs if not g.adjacent(a >> 1, b >> 1)]
        q_pairs = [(a, b) for a, b in pairs if g.adjacent(a >> 1, b >> 1)]
        self.pairs = w_pairs + q_pairs
        self.k = len(w_pairs)
        self.gdim = g.n // 2
        word = ()
        for a, b in w_pairs:
            word += commutator((a,), (b,))
        self.w = normalize(g, word)
        self.Q = WedgeForm()
        for a, b in q_pairs:
            self.Q = self.Q + WedgeForm.wedge(a, b)
        self.star = {}
        for a, b in self.pairs:
            self.star[a] = b
            self.star[b] = a ^ 1
            self.star[a ^ 1] = b ^ 1
            self.star[b ^ 1] = a
        for l, m in self.star.items():
            if self.star[m] != l ^ 1:
                raise InvariantError("star bijection fails (a*)* = a^-1")
        self.supp_w = frozenset(v for p in w_pairs for l in p for v in [l >> 1])
        self.supp_Q = frozenset(v for p in q_pairs for l in p for v in [l >> 1])
        if self.supp_w & self.supp_Q or (self.supp_w | self.supp_Q) != frozenset(range(g.n)):
            raise InvariantError("supports of w and Q must partition X")

    @property
    def q_pairs(self):
        return self.pairs[self.k:]

    def describe(self):
        g = self.g
        return {"pairs": [[g.letter_name(a), g.letter_name(b)] for a, b in self.pairs],
                "k": self.k, "w": g.word_str(self.w), "Q": self.Q.to_json(g)}

    def __repr__(self):
        return f"SymplecticStructure(k={self.k}, pairs={self.pairs})"


def validate_structure(g, pairs):
    return SymplecticStructure(g, pairs)


def structure_from_json(g, data):
    if isinstance(data, dict):
        data = data.get("pairs")
    if not isinstance(data, list):
        raise InputError("structure JSON needs a 'pairs' list")
    pairs = []
    for p in data:
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise InputError(f"bad pair {p!r}")
        pairs.append((g.parse_letter(p[0]), g.parse_letter(p[1])))
    return SymplecticStructure(g, pairs)


def standard_pairs(g):
    """Pair vertices in input order: (v0, v1), (v2, v3), ..."""
    return [(2 * i, 2 * (i + 1)) for i in range(0, g.n, 2)]


# -- matrices ------------------------------------------------------------------

def j_matrix(s):
    """The endomorphism J with J a = a* on supp Q and zero elsewhere."""
    n = s.g.n
    J = np.zeros((n, n), dtype=np.int64)
    for a, b in s.q_pairs:
        sa, sb = sign_of(a), sign_of(b)
        J[b >> 1, a >> 1] = sa * sb
        J[a >> 1, b >> 1] = -sa * sb
    return J


def fixes_q(M, s):
    return wedge_act(M, s.Q) == s.Q


def in_G(M, s):
    """Image of automorphisms fixing supp w pointwise, up to the
    domination constraint on entries."""
    g = s.g
    M = np.asarray(M)
    n = g.n
    for x in range(n):
        if x not in s.supp_Q:
            col = np.zeros(n, dtype=np.int64)
            col[x] = 1
            if not np.array_equal(M[:, x], col):
                return False
    for b in s.supp_Q:
        for a in range(n):
            if a != b and M[a, b] != 0 and not g.dominates(a, b):
                return False
    return abs(round(np.linalg.det(M))) == 1


def inner(v, a):
    """<v, a> for a vector v and a letter a."""
    return sign_of(a) * int(v[a >> 1])


def q_dominates(s, a, b):
    g = s.g
    for l in (a, b):
        if l >> 1 not in s.supp_Q:
            raise InputError(f"{g.letter_name(l)} is not over supp Q")
    bs, as_ = s.star[b], s.star[a]
    if a >> 1 != bs >> 1:
        return g.dominates(a >> 1, b >> 1) and g.dominates(bs >> 1, as_ >> 1)
    return g.dominates(a >> 1, b >> 1)


def q_equivalent(s, a, b):
    return q_dominates(s, a, b) and q_dominates(s, b, a)


# -- Q-transvections and Q-inversions ---------------------------------------------

class QGen:
    """A standard dominated Q-transvection or Q-inversion with its lift."""

    __slots__ = ("kind", "a", "b", "matrix", "s")

    def __init__(self, s, kind, a, b=None):
        self.s = s
        self.kind = kind
        self.a = a
        self.b = b
        n = s.g.n
        if kind == "single":
            self.matrix = elementary(n, a, s.star[a])
        elif kind == "pair":
            self.matrix = elementary(n, a, b) @ elementary(n, s.star[b], s.star[a] ^ 1)
        elif kind == "inversion":
            self.matrix = inversion_matrix(n, a >> 1) @ inversion_matrix(n, s.star[a] >> 1)
        else:
            raise InputError(f"unknown Q-generator kind {kind!r}")

    def is_standard(self):
        s, g = self.s, self.s.g
        a, b = self.a, self.b
        if a >> 1 not in s.supp_Q:
            return False
        if self.kind == "single":
            return g.dominates(a >> 1, s.star[a] >> 1)
        if self.kind == "pair":
            return (b >> 1 in s.supp_Q and a >> 1 != b >> 1 and s.star[a] >> 1 != b >> 1
                    and g.dominates(a >> 1, b >> 1) and g.dominates(s.star[b] >> 1, s.star[a] >> 1))
        return True

    def lift(self):
        """An automorphism with this homology matrix."""
        g, s = self.s.g, self.s
        if self.kind == "single":
            toks = (Transvection(self.a, s.star[self.a]),)
        elif self.kind == "pair":
            toks = (Transvection(self.a, self.b),
                    Transvection(s.star[self.b], s.star[self.a]).inverse())
        else:
            toks = (Inversion(self.a >> 1), Inversion(s.star[self.a] >> 1))
        a = Automorphism(g, toks, tag="S_Q", note=self.label())
        if not np.array_equal(homology_matrix(a), self.matrix):
            raise InvariantError(f"lift of {self.label()} has the wrong matrix")
        return a

    def label(self):
        g = self.s.g
        if self.kind == "single":
            return f"E({g.letter_name(self.a)},{g.letter_name(self.s.star[self.a])})"
        if self.kind == "pair":
            return (f"E({g.letter_name(self.a)},{g.letter_name(self.b)})"
                    f"E({g.letter_name(self.s.star[self.b])},{g.letter_name(self.s.star[self.a])})^-1")
        return f"N({g.letter_name(self.a)})N({g.letter_name(self.s.star[self.a])})"

    def key(self):
        return (self.kind, self.a, self.b)

    def to_json(self):
        g = self.s.g
        d = {"kind": self.kind, "a": g.letter_name(self.a), "label": self.label()}
        if self.b is not None:
            d["b"] = g.letter_name(self.b)
        return d

    def __repr__(self):
        return f"QGen({self.label()})"


def enumerate_q_generators(s):
    """All standard dominated Q-transvections (up to equal matrices) and one
    Q-inversion per pair, each checked to fix Q."""
    if not s.Q:
        return []
    g = s.g
    out = []
    seen = set()
    letters = [l for v in sorted(s.supp_Q) for l in (2 * v, 2 * v + 1)]
    for a in letters:
        cand = QGen(s, "single", a)
        if cand.is_standard():
            key = cand.matrix.tobytes()
            if key not in seen:
                seen.add(key)
                out.append(cand)
    for a, b in product(letters, letters):
        cand = QGen(s, "pair", a, b)
        if cand.is_standard():
            key = cand.matrix.tobytes()
            if key not in seen:
                seen.add(key)
                out.append(cand)
    for a, _ in s.q_pairs:
        out.append(QGen(s, "inversion", a))
    for q in out:
        if not fixes_q(q.matrix, s):
            raise InvariantError(f"{q.label()} does not fix Q")
        q.lift()
    return out


def preserves_structure(alpha, s):
    """alpha fixes w as an element and Q as a form."""
    return alpha(s.w) == s.w and fixes_q(homology_matrix(alpha), s)
