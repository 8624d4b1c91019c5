"""Automorphisms of a RAAG as factorizations into generator tokens.

An ``Automorphism`` is a product ``f1 f2 ... fk`` of tokens acting as
functions, so ``fk`` is applied first.  Images of the vertices are cached
as normal-form words.  Every token has a closed-form inverse token.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import InputError, InvariantError, ResourceError
from .graph import inverse_word
from .words import commutator, cyclic_canonical, normalize

TYPE1_ENUM_LIMIT = 10**5
DEFAULT_OMEGA_CAP = 10**6


# -- generator tokens ----------------------------------------------------------

@dataclass(frozen=True)
class Transvection:
    """tau_{m,t}: the letter t goes to t m."""
    m: int
    t: int

    def image(self, g, v):
        if v != self.t >> 1:
            return None
        if self.t & 1:
            return (self.m ^ 1, v * 2)
        return (v * 2, self.m)

    def inverse(self):
        return Transvection(self.m ^ 1, self.t)

    def label(self, g):
        return f"tau({g.letter_name(self.m)},{g.letter_name(self.t)})"

    def to_json(self, g):
        return {"t": "tv", "m": g.letter_name(self.m), "x": g.letter_name(self.t)}


@dataclass(frozen=True)
class PartialConj:
    """c_{m,Y}: each y in Y goes to m^-1 y m."""
    m: int
    Y: frozenset

    def image(self, g, v):
        if v not in self.Y:
            return None
        return (self.m ^ 1, 2 * v, self.m)

    def inverse(self):
        return PartialConj(self.m ^ 1, self.Y)

    def label(self, g):
        ys = ",".join(g.names[y] for y in sorted(self.Y))
        return f"c({g.letter_name(self.m)},{{{ys}}})"

    def to_json(self, g):
        return {"t": "pc", "m": g.letter_name(self.m), "Y": [g.names[y] for y in sorted(self.Y)]}


@dataclass(frozen=True)
class Inversion:
    v: int

    def image(self, g, v):
        return (2 * v + 1,) if v == self.v else None

    def inverse(self):
        return self

    def label(self, g):
        return f"inv({g.names[self.v]})"

    def to_json(self, g):
        return {"t": "inv", "v": g.names[self.v]}


@dataclass(frozen=True)
class Type1:
    """v goes to perm[v] with sign signs[v]; covers graphic automorphisms."""
    perm: tuple
    signs: tuple

    def image(self, g, v):
        return (2 * self.perm[v] + (self.signs[v] < 0),)

    def inverse(self):
        n = len(self.perm)
        p = [0] * n
        s = [1] * n
        for v in range(n):
            p[self.perm[v]] = v
            s[self.perm[v]] = self.signs[v]
        return Type1(tuple(p), tuple(s))

    def is_graphic(self):
        return all(s > 0 for s in self.signs)

    def label(self, g):
        parts = []
        for v in range(len(self.perm)):
            if self.perm[v] != v or self.signs[v] < 0:
                img = g.names[self.perm[v]] + ("^-1" if self.signs[v] < 0 else "")
                parts.append(f"{g.names[v]}->{img}")
        return "type1(" + ",".join(parts) + ")"

    def to_json(self, g):
        perm = {g.names[v]: g.names[self.perm[v]] for v in range(len(self.perm))}
        if self.is_graphic():
            return {"t": "graphic", "perm": perm}
        return {"t": "type1", "perm": perm,
                "signs": {g.names[v]: self.signs[v] for v in range(len(self.perm))}}


def Graphic(perm):
    return Type1(tuple(perm), (1,) * len(perm))


@dataclass(frozen=True)
class Whitehead:
    """Type 2 Whitehead automorphism (A, a)."""
    A: frozenset
    a: int

    def image(self, g, v):
        if v == self.a >> 1:
            return None
        pos = 2 * v in self.A
        neg = 2 * v + 1 in self.A
        if pos and neg:
            return (self.a ^ 1, 2 * v, self.a)
        if pos:
            return (2 * v, self.a)
        if neg:
            return (self.a ^ 1, 2 * v)
        return None

    def inverse(self):
        return Whitehead(self.A - {self.a} | {self.a ^ 1}, self.a ^ 1)

    def label(self, g):
        members = ",".join(g.letter_name(l) for l in sorted(self.A))
        return f"wh({{{members}}},{g.letter_name(self.a)})"

    def to_json(self, g):
        return {"t": "wh2", "m": g.letter_name(self.a),
                "A": [g.letter_name(l) for l in sorted(self.A)]}


@dataclass(frozen=True)
class CommTransvection:
    """tau_{[x,y],c}: the letter c goes to c [x,y]."""
    x: int
    y: int
    c: int

    def image(self, g, v):
        if v != self.c >> 1:
            return None
        k = commutator((self.x,), (self.y,))
        if self.c & 1:
            return inverse_word(k) + (2 * v,)
        return (2 * v,) + k

    def inverse(self):
        return CommTransvection(self.y, self.x, self.c)

    def label(self, g):
        return (f"tau([{g.letter_name(self.x)},{g.letter_name(self.y)}],"
                f"{g.letter_name(self.c)})")

    def to_json(self, g):
        return {"t": "ctv", "x": g.letter_name(self.x), "y": g.letter_name(self.y),
                "c": g.letter_name(self.c)}


@dataclass(frozen=True)
class Inner:
    """Conjugation y -> u^-1 y u by a word u."""
    u: tuple

    def image(self, g, v):
        if not self.u:
            return None
        return inverse_word(self.u) + (2 * v,) + self.u

    def inverse(self):
        return Inner(inverse_word(self.u))

    def label(self, g):
        return f"inner({g.word_str(self.u) or '1'})"

    def to_json(self, g):
        return {"t": "inner", "u": g.word_str(self.u)}


# -- automorphisms -------------------------------------------------------------

def substitute(g, images, word):
    """Apply the endomorphism given by vertex ``images`` to ``word``."""
    out = []
    invs = {}
    for l in word:
        if l & 1:
            r = invs.get(l)
            if r is None:
                r = invs[l] = inverse_word(images[l >> 1])
            out.extend(r)
        else:
            out.extend(images[l >> 1])
    return normalize(g, out)


class Automorphism:
    """Product of tokens, leftmost outermost.  Immutable."""

    __slots__ = ("g", "factors", "_images", "tag", "note")

    def __init__(self, g, factors=(), images=None, tag=None, note=None):
        self.g = g
        self.factors = tuple(factors)
        self._images = images
        self.tag = tag
        self.note = note

    @classmethod
    def identity(cls, g):
        return cls(g, (), tuple((2 * v,) for v in range(g.n)))

    @property
    def images(self):
        if self._images is None:
            g = self.g
            cur = tuple((2 * v,) for v in range(g.n))
            for f in self.factors:
                new = []
                for v in range(g.n):
                    im = f.image(g, v)
                    new.append(cur[v] if im is None else substitute(g, cur, im))
                cur = tuple(new)
            self._images = cur
        return self._images

    def __call__(self, word):
        return substitute(self.g, self.images, word)

    def apply_cyclic(self, word):
        return cyclic_canonical(self.g, self(word))

    def __mul__(self, other):
        if other.g is not self.g:
            raise InputError("automorphisms over different graphs")
        imgs = None
        if self._images is not None and other._images is not None:
            imgs = tuple(substitute(self.g, self._images, im) for im in other._images)
        return Automorphism(self.g, self.factors + other.factors, imgs)

    def inverse(self):
        return Automorphism(self.g, tuple(f.inverse() for f in reversed(self.factors)))

    def __pow__(self, k):
        base = self if k >= 0 else self.inverse()
        out = Automorphism.identity(self.g)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self):
        return all(im == (2 * v,) for v, im in enumerate(self.images))

    def same_action(self, other):
        return self.images == other.images

    def matrix(self):
        return homology_matrix(self)

    def label(self):
        if not self.factors:
            return "id"
        return " ".join(f.label(self.g) for f in self.factors)

    def to_json(self):
        d = {"factors": [f.to_json(self.g) for f in self.factors],
             "images": {self.g.names[v]: self.g.word_str(im) for v, im in enumerate(self.images)}}
        if self.tag:
            d["tag"] = self.tag
        if self.note:
            d["note"] = self.note
        return d

    def __repr__(self):
        return f"Automorphism({self.label()})"


def auto(g, *tokens, tag=None, note=None):
    return Automorphism(g, tokens, tag=tag, note=note)


def compose(*autos):
    out = autos[0]
    for a in autos[1:]:
        out = out * a
    return out


def homology_matrix(alpha):
    g = alpha.g
    M = np.zeros((g.n, g.n), dtype=np.int64)
    for v, im in enumerate(alpha.images):
        for l in im:
            M[l >> 1, v] += -1 if l & 1 else 1
    return M


def elementary(n, a, b):
    """Homology matrix of tau_{a,b} for letters a, b on distinct vertices."""
    M = np.eye(n, dtype=np.int64)
    s = (-1 if a & 1 else 1) * (-1 if b & 1 else 1)
    M[a >> 1, b >> 1] += s
    return M


def inversion_matrix(n, v):
    M = np.eye(n, dtype=np.int64)
    M[v, v] = -1
    return M


# -- parsing -------------------------------------------------------------------

def _letters(g, items):
    return frozenset(g.parse_letter(x) for x in items)


def token_from_json(g, d):
    if not isinstance(d, dict) or "t" not in d:
        raise InputError(f"bad automorphism token {d!r}")
    t = d["t"]
    try:
        if t == "tv":
            tok = Transvection(g.parse_letter(d["m"]), g.parse_letter(d["x"]))
            if tok.m >> 1 == tok.t >> 1:
                raise InputError("transvection needs distinct vertices")
        elif t == "pc":
            Y = frozenset(g.index[y] if y in g.index else g._vid(y) for y in d["Y"])
            tok = PartialConj(g.parse_letter(d["m"]), Y)
        elif t == "inv":
            tok = Inversion(g._vid(d["v"]))
        elif t in ("graphic", "type1"):
            perm = [None] * g.n
            for k, v in d["perm"].items():
                perm[g._vid(k)] = g._vid(v)
            for v in range(g.n):
                if perm[v] is None:
                    perm[v] = v
            if sorted(perm) != list(range(g.n)):
                raise InputError("perm is not a bijection")
            for u, v in g.edges:
                if not g.adjacent(perm[u], perm[v]):
                    raise InputError("perm is not a graph automorphism")
            signs = [1] * g.n
            for k, s in d.get("signs", {}).items():
                signs[g._vid(k)] = -1 if s < 0 else 1
            tok = Type1(tuple(perm), tuple(signs))
        elif t == "wh2":
            a = g.parse_letter(d["m"])
            A = _letters(g, d["A"]) | {a}
            if not whitehead_valid(g, A, a):
                raise InputError("invalid Whitehead pair")
            tok = Whitehead(A, a)
        elif t == "ctv":
            tok = CommTransvection(g.parse_letter(d["x"]), g.parse_letter(d["y"]), g.parse_letter(d["c"]))
        elif t == "inner":
            tok = Inner(normalize(g, g.parse_word(d["u"])))
        else:
            raise InputError(f"unknown token type {t!r}")
    except KeyError as e:
        raise InputError(f"token {t!r} missing field {e}") from None
    if d.get("pow", 1) == -1:
        tok = tok.inverse()
    elif d.get("pow", 1) != 1:
        raise InputError("pow must be 1 or -1")
    return tok


def automorphism_from_json(g, data):
    if isinstance(data, dict) and "factors" in data:
        data = data["factors"]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise InputError("automorphism must be a token or a list of tokens")
    return Automorphism(g, [token_from_json(g, d) for d in data])


# -- Laurence-Servatius generators ----------------------------------------------

def ls_generators(g, cap=12):
    if g.n > cap:
        raise ResourceError(f"{g.n} vertices exceeds cap {cap}")
    out = []
    for x in range(g.n):
        for y in range(g.n):
            if x != y and g.dominates(x, y):
                for sx, sy in product((0, 1), repeat=2):
                    out.append(auto(g, Transvection(2 * x + sx, 2 * y + sy), tag="transvection"))
    for x in range(g.n):
        for C in g.components_minus_star(x):
            for sx in (0, 1):
                out.append(auto(g, PartialConj(2 * x + sx, frozenset(C)), tag="partial_conjugation"))
    for v in range(g.n):
        out.append(auto(g, Inversion(v), tag="inversion"))
    for perm in g.automorphisms(cap=cap)[1:]:
        tag = "graphic_pure" if g.is_pure_permutation(perm) else "graphic"
        out.append(auto(g, Graphic(perm), tag=tag))
    return out


# -- Whitehead automorphisms -----------------------------------------------------

def whitehead_valid(g, A, a):
    A = frozenset(A)
    if a not in A or a ^ 1 in A:
        raise InputError("need a in A and a^-1 not in A")
    va = a >> 1
    for v in range(g.n):
        if v == va:
            continue
        if (2 * v in A) != (2 * v + 1 in A) and not g.dominates(va, v):
            return False
    for C in g.components_minus_star(va):
        states = [(2 * v in A) + (2 * v + 1 in A) for v in C]
        if all(s == 0 for s in states) or all(s == 2 for s in states):
            continue
        if len(C) == 1 and g.dominates(va, next(iter(C))):
            continue
        return False
    return True


def preserves_relations(g, images):
    """Images of adjacent vertices commute."""
    for u, v in g.edges:
        iu, iv = images[u], images[v]
        if normalize(g, iu + iv) != normalize(g, iv + iu):
            return False
    return True


def whitehead_oracle(g, A, a):
    """Evaluation check: the assignment is an endomorphism whose candidate
    inverse is a two-sided inverse."""
    w = Automorphism(g, (Whitehead(frozenset(A), a),))
    wi = Automorphism(g, (Whitehead(frozenset(A), a).inverse(),))
    if not preserves_relations(g, w.images) or not preserves_relations(g, wi.images):
        return False
    return (w * wi).is_identity() and (wi * w).is_identity()


def _type2_for_multiplier(g, a):
    """All valid A for multiplier a, built component by component."""
    va = a >> 1
    choices = []
    for v in range(g.n):
        if v == va or not g.adjacent(v, va):
            continue
        opts = [(), (2 * v, 2 * v + 1)]
        if g.dominates(va, v):
            opts[1:1] = [(2 * v,), (2 * v + 1,)]
        choices.append(opts)
    for C in g.components_minus_star(va):
        C = sorted(C)
        if len(C) == 1 and g.dominates(va, C[0]):
            v = C[0]
            choices.append([(), (2 * v,), (2 * v + 1,), (2 * v, 2 * v + 1)])
        else:
            choices.append([(), tuple(l for v in C for l in (2 * v, 2 * v + 1))])
    for pick in product(*choices):
        A = {a}
        for part in pick:
            A.update(part)
        yield frozenset(A)


def type1_elements(g, cap=12):
    """All Type 1 tokens if few enough, else a generating set."""
    perms = g.automorphisms(cap=cap)
    if len(perms) * 2 ** g.n <= TYPE1_ENUM_LIMIT:
        return [Type1(p, s) for p in perms for s in product((1, -1), repeat=g.n)], True
    gens = [Type1(p, (1,) * g.n) for p in perms]
    gens += [Inversion(v) for v in range(g.n)]
    return gens, False


def enumerate_omega(g, cap_vertices=8, cap_omega=DEFAULT_OMEGA_CAP):
    """Return ``(omega, omega_long, omega_short)`` as lists of tokens.

    Type 1 tokens come first, then Type 2 ordered by multiplier and set.
    """
    if g.n > cap_vertices:
        raise ResourceError(f"{g.n} vertices exceeds omega cap {cap_vertices}")
    type1, _ = type1_elements(g, cap=max(cap_vertices, 12))
    type2 = []
    for a in range(2 * g.n):
        for A in sorted(_type2_for_multiplier(g, a), key=lambda s: sorted(s)):
            type2.append(Whitehead(A, a))
            if len(type2) + len(type1) > cap_omega:
                raise ResourceError(f"omega exceeds {cap_omega} elements")
    omega = list(type1) + type2
    long_, short = list(type1), []
    for w in type2:
        va = w.a >> 1
        lk = g.adj_mask[va]
        st = g.star_mask(va)
        verts = 0
        for l in w.A:
            verts |= 1 << (l >> 1)
        if verts & lk == 0:
            long_.append(w)
        if verts & ~st == 0:
            short.append(w)
    return omega, long_, short


def trans_set(A, a):
    """Vertices other than pg a included in A with exactly one sign."""
    return frozenset(l >> 1 for l in A if l ^ 1 not in A and l >> 1 != a >> 1)


def token_is_pure(g, tok):
    if isinstance(tok, Type1):
        return g.is_pure_permutation(tok.perm)
    return True


# -- peak reduction ------------------------------------------------------------

def orbit_lengths(g, factors, word):
    """Cyclic lengths of word, b1[word], b2 b1[word], ... (application order)."""
    cur = cyclic_canonical(g, word)
    lengths = [len(cur)]
    for f in factors:
        a = f if isinstance(f, Automorphism) else Automorphism(g, (f,))
        cur = a.apply_cyclic(cur)
        lengths.append(len(cur))
    return lengths


def is_peak_reduced(g, factors, word):
    """No interior step is a peak: a length at least both neighbours, unless
    all three are equal.  ``factors`` are listed in application order."""
    ls = orbit_lengths(g, factors, word)
    for i in range(1, len(ls) - 1):
        if ls[i] >= ls[i - 1] and ls[i] >= ls[i + 1]:
            if not (ls[i - 1] == ls[i] == ls[i + 1]):
                return False
    return True
