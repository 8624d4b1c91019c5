"""Factor a Q-preserving matrix into Q-transvections and Q-inversions.

The reduction works column by column on a relabeled symplectic basis
(x_1, y_1), ..., (x_m, y_m) of the span of supp Q, left-multiplying by
generators until the identity is reached.  The factorization returned is
the list of inverses of the operations applied, in application order.
"""

import numpy as np

from .errors import InvariantError, PreconditionError
from .graph import sign_of
from .symplectic import QGen, fixes_q, in_G, inner, q_dominates


def relabel_basis(s):
    """Greedy choice of x_i maximal for Q-domination among unlabeled
    vertices of supp Q (first in vertex order on ties), y_i = x_i*."""
    if not s.Q:
        return []
    unlabeled = sorted(s.supp_Q)
    out = []
    while unlabeled:
        pick = None
        for v in unlabeled:
            x = 2 * v
            if all(q_dominates(s, x, 2 * u) or not q_dominates(s, 2 * u, x) for u in unlabeled):
                pick = x
                break
        if pick is None:
            raise InvariantError("no Q-domination maximal element")
        y = s.star[pick]
        if y >> 1 not in unlabeled:
            raise InvariantError("partner of chosen x already labeled")
        out.append((pick, y))
        unlabeled = [u for u in unlabeled if u not in (pick >> 1, y >> 1)]
    return out


class QFactorization:
    def __init__(self, s, M, factors, stats):
        self.s = s
        self.input = M
        self.factors = factors  # list of (QGen, power)
        self.stats = stats

    def product(self):
        n = self.s.g.n
        P = np.eye(n, dtype=np.int64).astype(object)
        for q, p in self.factors:
            P = P @ _mpow(q.matrix, p)
        return P

    def verify(self):
        return (np.array_equal(self.product(), self.input)
                and all(q.is_standard() and fixes_q(q.matrix, self.s) for q, _ in self.factors))

    def to_json(self):
        return {"factors": [dict(q.to_json(), power=p) for q, p in self.factors],
                "verified": bool(self.verify()), **self.stats}


def _mpow(M, p):
    """Integer matrix power with exact (Python int) entries."""
    if p < 0:
        M = _inverse(M)
        p = -p
    M = np.asarray(M).astype(object)
    out = np.eye(M.shape[0], dtype=np.int64).astype(object)
    while p:
        if p & 1:
            out = out @ M
        M = M @ M
        p >>= 1
    return out


def _inverse(M):
    M = np.asarray(M, dtype=np.int64)
    inv = np.rint(np.linalg.inv(M)).astype(np.int64)
    if not np.array_equal(M @ inv, np.eye(M.shape[0], dtype=np.int64)):
        raise InvariantError("matrix is not unimodular")
    return inv


def q_reduce(M, s):
    M = np.array(M, dtype=np.int64)
    n = s.g.n
    if M.shape != (n, n):
        raise PreconditionError(f"matrix must be {n}x{n}")
    eye = np.eye(n, dtype=np.int64)
    if not s.Q:
        if np.array_equal(M, eye):
            return QFactorization(s, M, [], {"euclid_steps": 0, "factor_count": 0})
        raise PreconditionError("Q = 0: only the identity lies in G")
    if not in_G(M, s):
        raise PreconditionError("matrix is not in G")
    if not fixes_q(M, s):
        raise PreconditionError("matrix does not fix Q")
    supp = sorted(s.supp_Q)
    rest = [v for v in range(n) if v not in s.supp_Q]
    if rest and np.any(M[np.ix_(rest, supp)]):
        raise InvariantError("off-diagonal blocks do not vanish")

    basis = relabel_basis(s)
    A = M.astype(object)
    applied = []  # (QGen, power) left-multiplied onto A in order
    stats = {"euclid_steps": 0}

    def apply(q, p=1):
        nonlocal A
        if p == 0:
            return
        if not q.is_standard():
            raise InvariantError(f"non-standard generator {q.label()}")
        A = _mpow(q.matrix, p) @ A
        applied.append((q, p))

    def single(a):
        return QGen(s, "single", a)

    def pair(a, b):
        return QGen(s, "pair", a, b)

    letters = [l for xy in basis for l in xy]
    m = len(basis)
    for i in range(m):
        xi, yi = basis[i]
        col = lambda: A[:, xi >> 1]
        later = basis[i:]
        # Step 1: make one of <v, x_j>, <v, y_j> vanish for each j >= i
        for xj, yj in later:
            while inner(col(), xj) and inner(col(), yj):
                p, q = inner(col(), xj), inner(col(), yj)
                stats["euclid_steps"] += 1
                if abs(p) >= abs(q):
                    t = _sym_quot(p, q)
                    # single(x_j)^k adds k <v,y_j> to <v,x_j>
                    apply(single(xj), -t)
                else:
                    t = _sym_quot(q, p)
                    # single(y_j)^-1 adds <v,x_j> to <v,y_j>
                    apply(single(yj), t)
        # Step 2: leave a single nonzero entry among the later basis letters
        cand = [l for xy in later for l in xy]
        prev = None
        while True:
            v = col()
            nz = [l for l in cand if inner(v, l)]
            if not nz:
                raise InvariantError("column vanished on the later basis")
            top = max(abs(inner(v, l)) for l in nz)
            measure = (top, sum(1 for l in nz if abs(inner(v, l)) == top))
            if prev is not None and not measure < prev:
                raise InvariantError("step 2 failed to make progress")
            prev = measure
            if len(nz) == 1:
                break
            a = next(l for l in nz if abs(inner(v, l)) == top)
            b = next(l for l in nz if l != a)
            if not q_dominates(s, b, a) or not q_dominates(s, a, b):
                raise InvariantError("step 2 needs Q-equivalent letters")
            # pair(a, b)^e adds e <v,b> to <v,a>
            e = -1 if inner(v, a) * inner(v, b) > 0 else 1
            apply(pair(a, b), e)
        # Step 3: move the entry to x_i with value 1
        a = nz[0]
        if abs(inner(col(), a)) != 1:
            raise InvariantError("pivot entry is not a unit")
        if a >> 1 == yi >> 1:
            # R = single(y)^-1 single(x)^-1 single(y)^-1 sends x to y
            apply(single(yi), 1)
            apply(single(xi), 1)
            apply(single(yi), 1)
        elif a >> 1 != xi >> 1:
            S = [(pair(a, xi), 1), (pair(xi, a), -1), (pair(a, xi), 1)]
            Sm = _prod(S, n)
            if inner(Sm @ col(), xi) == 0:
                S = [(q, -p) for q, p in reversed(S)]
            for q, p in S:
                apply(q, p)
        if inner(col(), xi) == -1:
            apply(QGen(s, "inversion", xi))
        if inner(col(), xi) != 1:
            raise InvariantError("step 3 did not reach x_i")
        # Step 4: clear entries on earlier x_j
        for xj, yj in basis[:i]:
            c = inner(col(), xj)
            if c:
                apply(pair(xj, xi), -c)
        v = col()
        for l in letters:
            want = 1 if l == xi else 0
            if inner(v, l) != want:
                raise InvariantError("column not reduced")
    # Fixing every x_i leaves A y_i = y_i + sum_j c_ij x_j with c symmetric.
    # Nonzero c_ij forces x_j to Q-dominate y_i, so these clear with
    # single(x_i) on the diagonal and pair(x_j, y_i) off it.
    for i, (xi, yi) in enumerate(basis):
        for j in range(i, m):
            xj = basis[j][0]
            c = inner(sign_of(yi) * A[:, yi >> 1], xj)
            if c:
                apply(single(xi) if i == j else pair(xj, yi), -c)
    if not np.array_equal(A, eye):
        raise InvariantError("reduction did not end at the identity")
    factors = [(q, -p) for q, p in applied]
    stats["factor_count"] = len(factors)
    out = QFactorization(s, M, factors, stats)
    if not np.array_equal(out.product(), M):
        raise InvariantError("factor product differs from input")
    return out


def _sym_quot(p, q):
    """t with |p - t q| <= |q| / 2."""
    t, r = divmod(p, q)
    if 2 * abs(r) > abs(q):
        t += 1
    return t


def _prod(seq, n):
    P = np.eye(n, dtype=np.int64).astype(object)
    for q, p in seq:
        P = _mpow(q.matrix, p) @ P
    return P
