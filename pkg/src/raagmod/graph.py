"""Simplicial graphs, letters, and the combinatorics of stars and domination.

Letters are encoded as small integers: vertex ``v`` with sign ``+1`` is
``2*v`` and with sign ``-1`` is ``2*v + 1``.  Integer order is therefore the
global letter order (vertex order first, ``+`` before ``-``), inversion is
``l ^ 1`` and the underlying vertex is ``l >> 1``.
"""

import json
import re
from itertools import combinations

from .errors import InputError, InvariantError, ResourceError

DEFAULT_VERTEX_CAP = 12

_NAME_RE = re.compile(r"^[^\s^,\-\[\]]+$")


def letter(v, sign=1):
    return 2 * v + (0 if sign > 0 else 1)


def vertex_of(l):
    return l >> 1


def sign_of(l):
    return -1 if l & 1 else 1


def inv(l):
    return l ^ 1


def inverse_word(word):
    return tuple(l ^ 1 for l in reversed(word))


class Graph:
    """A finite simplicial graph with a fixed vertex order.

    Instances are treated as immutable; per-graph caches for normal forms
    live on the instance.
    """

    def __init__(self, names, edges=()):
        names = list(names)
        if not names:
            raise InputError("graph must have at least one vertex")
        index = {}
        for i, name in enumerate(names):
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise InputError(f"bad vertex name {name!r}")
            if name in index:
                raise InputError(f"duplicate vertex name {name!r}")
            index[name] = i
        self.names = tuple(names)
        self.index = index
        self.n = len(names)
        masks = [0] * self.n
        for u, v in edges:
            u = self._vid(u)
            v = self._vid(v)
            if u == v:
                raise InputError(f"self-loop at {self.names[u]!r}")
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        self.adj_mask = tuple(masks)
        self.full_mask = (1 << self.n) - 1
        self._edgeless = not any(masks)
        self._complete = all(masks[v] | (1 << v) == self.full_mask for v in range(self.n))
        self._cache = {}

    def _vid(self, v):
        if isinstance(v, str):
            try:
                return self.index[v]
            except KeyError:
                raise InputError(f"unknown vertex {v!r}") from None
        if isinstance(v, int) and 0 <= v < self.n:
            return v
        raise InputError(f"unknown vertex {v!r}")

    # -- basic structure ---------------------------------------------------

    @property
    def edges(self):
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
                if self.adj_mask[u] >> v & 1]

    def adjacent(self, u, v):
        return bool(self.adj_mask[u] >> v & 1)

    def commute(self, l1, l2):
        """Whether two letters over distinct vertices commute."""
        return bool(self.adj_mask[l1 >> 1] >> (l2 >> 1) & 1)

    def link_mask(self, v):
        return self.adj_mask[v]

    def star_mask(self, v):
        return self.adj_mask[v] | (1 << v)

    def neighborhood(self, v):
        """Return ``(link, star)`` of ``v`` as frozensets of vertex ids."""
        v = self._vid(v)
        link = frozenset(self.mask_to_set(self.adj_mask[v]))
        return link, link | {v}

    def mask_to_set(self, mask):
        return [i for i in range(self.n) if mask >> i & 1]

    def set_to_mask(self, vertices):
        m = 0
        for v in vertices:
            m |= 1 << self._vid(v)
        return m

    def is_edgeless(self):
        return self._edgeless

    def is_complete(self):
        return self._complete

    # -- domination --------------------------------------------------------

    def dominates(self, x, y):
        """``x >= y`` iff lk(y) is contained in st(x)."""
        x = self._vid(x)
        y = self._vid(y)
        return self.adj_mask[y] & ~self.star_mask(x) == 0

    def equivalent(self, x, y):
        return self.dominates(x, y) and self.dominates(y, x)

    def domination_classes(self):
        """Partition of the vertices into domination-equivalence classes.

        Returns a list of ``(members, adjacent)`` in order of least member.
        Singletons get ``adjacent=None`` (they carry both flags).
        """
        seen = set()
        out = []
        for v in range(self.n):
            if v in seen:
                continue
            cls = [u for u in range(v, self.n) if u not in seen and self.equivalent(u, v)]
            seen.update(cls)
            if len(cls) == 1:
                out.append((tuple(cls), None))
                continue
            flags = {self.adjacent(a, b) for a, b in combinations(cls, 2)}
            if len(flags) != 1:
                raise InvariantError(f"mixed domination class {cls}")
            out.append((tuple(cls), flags.pop()))
        return out

    def class_of(self, v):
        for members, _ in self.domination_classes():
            if v in members:
                return members
        raise InvariantError("vertex in no class")

    def components_minus_star(self, v):
        """Connected components of the subgraph induced on X - st(v)."""
        v = self._vid(v)
        return self.components(self.full_mask & ~self.star_mask(v))

    def components(self, mask):
        """Components of the subgraph induced on the vertex bitmask."""
        out = []
        rest = mask
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    b = f & -f
                    nxt |= self.adj_mask[b.bit_length() - 1]
                    f ^= b
                nxt &= rest & ~comp
                comp |= nxt
                frontier = nxt
            out.append(frozenset(self.mask_to_set(comp)))
            rest &= ~comp
        return out

    # -- automorphisms -----------------------------------------------------

    def automorphisms(self, cap=DEFAULT_VERTEX_CAP, max_count=10**6):
        """All adjacency-preserving vertex permutations, identity first.

        Plain backtracking with degree pruning.  A permutation ``p`` sends
        vertex ``i`` to ``p[i]``.
        """
        if self.n > cap:
            raise ResourceError(f"{self.n} vertices exceeds automorphism cap {cap}")
        key = ("aut", max_count)
        if key in self._cache:
            return self._cache[key]
        deg = [bin(m).count("1") for m in self.adj_mask]
        n = self.n
        image = [None] * n
        used = [False] * n
        out = []

        def extend(i):
            if i == n:
                out.append(tuple(image))
                if len(out) > max_count:
                    raise ResourceError("too many graph automorphisms")
                return
            for c in range(n):
                if used[c] or deg[c] != deg[i]:
                    continue
                ok = True
                for j in range(i):
                    if self.adjacent(i, j) != self.adjacent(c, image[j]):
                        ok = False
                        break
                if ok:
                    image[i] = c
                    used[c] = True
                    extend(i + 1)
                    used[c] = False
            image[i] = None

        extend(0)
        self._cache[key] = out
        return out

    def is_pure_permutation(self, perm):
        """A graphic automorphism lies in the pure subgroup iff it preserves
        every domination-equivalence class."""
        return all(self.equivalent(v, perm[v]) for v in range(self.n))

    # -- names -------------------------------------------------------------

    def letter_name(self, l):
        name = self.names[l >> 1]
        return name + "^-1" if l & 1 else name

    def word_str(self, word):
        return " ".join(self.letter_name(l) for l in word)

    def parse_letter(self, token):
        token = token.strip()
        sign = 1
        for suffix in ("^-1", "^{-1}"):
            if token.endswith(suffix):
                token = token[: -len(suffix)]
                sign = -1
                break
        else:
            if token.endswith("^1"):
                token = token[:-2]
        if token not in self.index:
            raise InputError(f"unknown vertex {token!r}")
        return letter(self.index[token], sign)

    def parse_word(self, text):
        """Whitespace-separated letters; ``[u,v]`` commutator sugar allowed,
        where ``u`` and ``v`` are themselves words."""
        text = text.strip()
        if text in ("", "1", "e"):
            return ()
        out = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch == "[":
                depth = 0
                for j in range(i, len(text)):
                    if text[j] == "[":
                        depth += 1
                    elif text[j] == "]":
                        depth -= 1
                        if depth == 0:
                            break
                else:
                    raise InputError(f"unbalanced bracket in {text!r}")
                inner = text[i + 1:j]
                parts = _split_top_comma(inner)
                if len(parts) != 2:
                    raise InputError(f"commutator needs two entries: [{inner}]")
                u = self.parse_word(parts[0])
                v = self.parse_word(parts[1])
                out.extend(u + v + inverse_word(u) + inverse_word(v))
                i = j + 1
                continue
            j = i
            while j < len(text) and not text[j].isspace() and text[j] != "[":
                j += 1
            out.append(self.parse_letter(text[i:j]))
            i = j
        return tuple(out)

    def to_json(self):
        return {"vertices": list(self.names),
                "edges": [[self.names[u], self.names[v]] for u, v in self.edges]}

    def __repr__(self):
        return f"Graph({list(self.names)}, {len(self.edges)} edges)"


def _split_top_comma(s):
    depth = 0
    parts = []
    start = 0
    for i, ch in enumerate(s):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(s[start:i])
            start = i + 1
    parts.append(s[start:])
    return parts


# -- construction helpers ----------------------------------------------------

def parse_graph(text):
    """Parse the text or JSON graph format.

    Text format::

        vertices: a b c
        edges: a-b, b-c
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise InputError(f"malformed graph JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
        return graph_from_json(data)
    names = None
    edges = []
    in_edges = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices:"):
            if names is not None:
                raise InputError(f"line {lineno}: repeated vertices line")
            names = line[len("vertices:"):].split()
            seen = set()
            for name in names:
                if name in seen:
                    raise InputError(f"line {lineno}: duplicate vertex name {name!r}")
                seen.add(name)
            continue
        if line.startswith("edges:"):
            in_edges = True
            line = line[len("edges:"):]
        elif not in_edges:
            raise InputError(f"line {lineno}: expected 'vertices:' or 'edges:'")
        if names is None:
            raise InputError(f"line {lineno}: edges before vertices")
        for tok in line.replace(",", " ").split():
            if tok.count("-") != 1:
                raise InputError(f"line {lineno}: bad edge token {tok!r}")
            u, v = tok.split("-")
            for end in (u, v):
                if end not in names:
                    raise InputError(f"line {lineno}: unknown endpoint {end!r}")
            if u == v:
                raise InputError(f"line {lineno}: self-loop at {u!r}")
            edges.append((u, v))
    if names is None:
        raise InputError("missing 'vertices:' line")
    try:
        return Graph(names, edges)
    except InputError as e:
        raise InputError(f"line 1: {e}") from None


def graph_from_json(data):
    if not isinstance(data, dict) or "vertices" not in data:
        raise InputError("graph JSON needs a 'vertices' list")
    edges = data.get("edges", [])
    for e in edges:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise InputError(f"bad edge {e!r}")
    return Graph(data["vertices"], [tuple(e) for e in edges])


def edgeless(n, prefix="v"):
    return Graph([f"{prefix}{i}" for i in range(n)])


def complete(n, prefix="v"):
    return Graph([f"{prefix}{i}" for i in range(n)],
                 [(i, j) for i in range(n) for j in range(i + 1, n)])


def path(n, prefix="v"):
    return Graph([f"{prefix}{i}" for i in range(n)], [(i, i + 1) for i in range(n - 1)])


def join(g1, g2):
    """Graph-theoretic join; vertex names must be disjoint."""
    names = list(g1.names) + list(g2.names)
    edges = [(g1.names[u], g1.names[v]) for u, v in g1.edges]
    edges += [(g2.names[u], g2.names[v]) for u, v in g2.edges]
    edges += [(a, b) for a in g1.names for b in g2.names]
    return Graph(names, edges)


def disjoint_union(g1, g2):
    names = list(g1.names) + list(g2.names)
    edges = [(g1.names[u], g1.names[v]) for u, v in g1.edges]
    edges += [(g2.names[u], g2.names[v]) for u, v in g2.edges]
    return Graph(names, edges)
