"""Word calculus in a right-angled Artin group.

Words are tuples of integer letters (see ``graph.letter``).  A normal form is
the graphically reduced representative that is lexicographically least among
all its commutation shuffles.  Cyclic words are represented by their
canonical rotation class representative.
"""

from collections import deque
from itertools import permutations, product

from .errors import InputError, ResourceError
from .graph import inverse_word

DEFAULT_STATE_CAP = 10**6
_CACHE_LIMIT = 400_000


def _cache(g, name):
    c = g._cache.get(name)
    if c is None or len(c) > _CACHE_LIMIT:
        c = g._cache[name] = {}
    return c


def reduce_word(g, word):
    """Free and graphic cancellation, one letter at a time.

    The output is graphically reduced but not yet in lex normal form.
    """
    out = []
    adj = g.adj_mask
    for l in word:
        v = l >> 1
        mask = adj[v]
        cancelled = False
        i = len(out) - 1
        while i >= 0:
            m = out[i]
            if m >> 1 == v:
                if m == l ^ 1:
                    del out[i]
                    cancelled = True
                break
            if not mask >> (m >> 1) & 1:
                break
            i -= 1
        if not cancelled:
            out.append(l)
    return out


def _lex_form(g, word):
    n = len(word)
    if n < 2:
        return tuple(word)
    adj = g.adj_mask
    verts = [l >> 1 for l in word]
    later = [[] for _ in range(n)]
    blockers = [0] * n
    for j in range(n):
        vj = verts[j]
        mj = adj[vj]
        for i in range(j):
            if not mj >> verts[i] & 1:
                later[i].append(j)
                blockers[j] += 1
    avail = [i for i in range(n) if blockers[i] == 0]
    out = []
    while avail:
        best = min(avail, key=word.__getitem__)
        avail.remove(best)
        out.append(word[best])
        for j in later[best]:
            blockers[j] -= 1
            if blockers[j] == 0:
                avail.append(j)
    return tuple(out)


def _free_reduce(word):
    out = []
    for l in word:
        if out and out[-1] == l ^ 1:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def normalize(g, word):
    """Canonical normal form of ``word`` as a tuple of letters."""
    word = tuple(word)
    cache = _cache(g, "nf")
    hit = cache.get(word)
    if hit is not None:
        return hit
    if g.is_edgeless():
        res = _free_reduce(word)
    elif g.is_complete():
        counts = {}
        for l in word:
            v = l >> 1
            counts[v] = counts.get(v, 0) + (-1 if l & 1 else 1)
        res = []
        for v in sorted(counts):
            c = counts[v]
            res.extend([2 * v + (c < 0)] * abs(c))
        res = tuple(res)
    else:
        res = _lex_form(g, reduce_word(g, word))
    cache[word] = res
    return res


def multiply(g, *words):
    out = ()
    for w in words:
        out += tuple(w)
    return normalize(g, out)


def invert(g, word):
    return normalize(g, inverse_word(word))


def commutator(u, v):
    """``[u, v] = u v u^-1 v^-1`` as an unreduced word."""
    return tuple(u) + tuple(v) + inverse_word(u) + inverse_word(v)


def conjugate(g, word, by):
    """``by^-1 word by``."""
    return normalize(g, inverse_word(by) + tuple(word) + tuple(by))


def support(g, word):
    return frozenset(l >> 1 for l in normalize(g, word))


def exponent_sums(g, word):
    sums = [0] * g.n
    for l in word:
        sums[l >> 1] += -1 if l & 1 else 1
    return sums


# -- first and last letters --------------------------------------------------

def first_letters(g, word):
    """Letters that can be commuted to the front of a reduced word."""
    adj = g.adj_mask
    seen = 0  # vertices met so far that block
    out = []
    for l in word:
        v = l >> 1
        # blocked iff some earlier letter fails to commute with it
        if seen & ~adj[v] == 0:
            out.append(l)
        seen |= 1 << v
    return out


def last_letters(g, word):
    return [l ^ 1 for l in first_letters(g, inverse_word(word))]


def _remove_first(g, word, l):
    """Delete the occurrence of ``l`` that is a first letter."""
    adj = g.adj_mask
    seen = 0
    for i, m in enumerate(word):
        v = m >> 1
        if m == l and seen & ~adj[v] == 0:
            return word[:i] + word[i + 1:]
        seen |= 1 << v
    raise ValueError("not a first letter")


def cyclic_reduce(g, word):
    """Return ``(core, conj)`` with ``core = conj^-1 word conj`` cyclically
    reduced (both normalized)."""
    w = normalize(g, word)
    conj = ()
    while len(w) >= 2:
        lasts = set(last_letters(g, w))
        hit = None
        for x in first_letters(g, w):
            if x ^ 1 in lasts:
                hit = x
                break
        if hit is None:
            break
        core = _remove_first(g, w, hit)
        core = inverse_word(_remove_first(g, inverse_word(core), hit))
        w = normalize(g, core)
        conj = conj + (hit,)
    return w, normalize(g, conj)


def _rotations(g, w):
    for x in sorted(set(first_letters(g, w))):
        yield x, normalize(g, _remove_first(g, w, x) + (x,))


def cyclic_canonical(g, word, cap=DEFAULT_STATE_CAP):
    """Canonical representative of the conjugacy class of ``word``.

    Its length is the conjugacy length.
    """
    word = tuple(word)
    cache = _cache(g, "cyc")
    hit = cache.get(word)
    if hit is not None:
        return hit
    core, _ = cyclic_reduce(g, word)
    if g.is_edgeless():
        n = len(core)
        best = min((core[i:] + core[:i] for i in range(max(n, 1))), default=core)
    elif g.is_complete():
        best = core
    else:
        seen = {core}
        queue = deque([core])
        while queue:
            w = queue.popleft()
            for _, r in _rotations(g, w):
                if r not in seen:
                    seen.add(r)
                    if len(seen) > cap:
                        raise ResourceError(f"cyclic closure exceeds {cap} states")
                    queue.append(r)
        best = min(seen)
    cache[word] = best
    return best


def conjugacy_length(g, word):
    return len(cyclic_reduce(g, word)[0])


def conjugator(g, x, y, cap=DEFAULT_STATE_CAP):
    """Some ``u`` with ``u^-1 x u = y``, or ``None`` if not conjugate."""
    xr, cx = cyclic_reduce(g, x)
    yr, cy = cyclic_reduce(g, y)
    if len(xr) != len(yr) or sorted(xr) != sorted(yr):
        return None
    prev = {xr: None}
    queue = deque([xr])
    found = xr == yr
    while queue and not found:
        w = queue.popleft()
        for l, r in _rotations(g, w):
            if r not in prev:
                prev[r] = (w, l)
                if len(prev) > cap:
                    raise ResourceError(f"conjugator search exceeds {cap} states")
                if r == yr:
                    found = True
                    break
                queue.append(r)
    if not found:
        return None
    path = []
    w = yr
    while prev[w] is not None:
        w, l = prev[w]
        path.append(l)
    r = tuple(reversed(path))
    return normalize(g, cx + r + inverse_word(cy))


# -- surface relators ----------------------------------------------------------

def is_surface_relator(g, word):
    """Return pairs ``[(a1, b1), ...]`` with ``word = [a1,b1]...[ak,bk]`` over
    letters on pairwise distinct vertices, or ``None``.

    Only vertices in the support can occur in a nontrivial commutator, so the
    search runs over ordered signed pairings of the support, pruned by
    requiring the support of the remainder to avoid used vertices.
    """
    w = normalize(g, word)
    if not w:
        return []
    sums = exponent_sums(g, w)
    if any(sums):
        return None
    verts = sorted({l >> 1 for l in w})
    if len(verts) % 2:
        return None

    def search(rest, remaining):
        if not remaining:
            return [] if not rest else None
        rest_supp = {l >> 1 for l in rest}
        if not rest_supp <= set(remaining):
            return None
        if rest_supp != set(remaining):
            return None
        for va, vb in permutations(remaining, 2):
            if g.adjacent(va, vb):
                continue
            for sa, sb in product((0, 1), repeat=2):
                a, b = 2 * va + sa, 2 * vb + sb
                c = commutator((a,), (b,))
                nxt = normalize(g, inverse_word(c) + rest)
                left = [v for v in remaining if v not in (va, vb)]
                if {l >> 1 for l in nxt} - set(left):
                    continue
                sub = search(nxt, left)
                if sub is not None:
                    return [(a, b)] + sub
        return None

    return search(w, verts)
