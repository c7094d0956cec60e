"""Exact integer linear algebra on dense row-major ``list[list[int]]``.

Nothing here touches floating point. Ranks come from fraction-free
(Bareiss) elimination, double-checked modulo two word-size primes; lattice
questions go through a row-style Hermite normal form; abelian group
invariants come from a Smith normal form with unimodular transforms.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from math import gcd

from .errors import DimensionMismatch, InternalRankMismatch

log = logging.getLogger(__name__)

_PRIME_SEED = 0x5EED


def shape(A):
    return len(A), (len(A[0]) if A else 0)


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    Bt = list(zip(*B)) if B else []
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def word_primes(count=2, rng=None):
    """``count`` distinct primes in ``[2**30, 2**31)`` drawn from ``rng``.

    The default generator is seeded so results are reproducible.
    """
    rng = rng or random.Random(_PRIME_SEED)
    out = []
    while len(out) < count:
        c = rng.randrange(2 ** 30, 2 ** 31) | 1
        if c not in out and _is_probable_prime(c):
            out.append(c)
    return out


def rank_mod_p(A, p):
    rows = [[x % p for x in row] for row in A]
    m, n = shape(rows)
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = pow(pr[c], -1, p)
        pr[c:] = [x * inv % p for x in pr[c:]]
        for i in range(r + 1, m):
            f = rows[i][c]
            if f:
                row = rows[i]
                row[c:] = [(x - f * y) % p for x, y in zip(row[c:], pr[c:])]
        r += 1
        if r == m:
            break
    return r


def bareiss_rank(A):
    """Rank over Q by fraction-free elimination.

    Returns ``(rank, max_bits)`` where ``max_bits`` is the largest bit length
    seen in an intermediate entry. Every intermediate is a minor of ``A``, so
    it is bounded by Hadamard's inequality.
    """
    M = [list(row) for row in A]
    m, n = shape(M)
    prev = 1
    r = 0
    max_bits = max((abs(x).bit_length() for row in M for x in row), default=0)
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pr = M[r]
        p = pr[c]
        tail = pr[c + 1:]
        for i in range(r + 1, m):
            row = M[i]
            f = row[c]
            if f:
                row[c + 1:] = [(p * x - f * y) // prev for x, y in zip(row[c + 1:], tail)]
            elif prev != p:
                row[c + 1:] = [p * x // prev for x in row[c + 1:]]
            row[c] = 0
        prev = p
        max_bits = max(max_bits, abs(p).bit_length())
        r += 1
        if r == m:
            break
    return r, max_bits


def rational_rank(A, primes=None):
    """Rank of ``A`` over Q, cross-checked against rank mod two primes."""
    r, bits = bareiss_rank(A)
    log.debug("bareiss rank %d, max entry bit length %d", r, bits)
    for p in primes or word_primes(2):
        rp = rank_mod_p(A, p)
        if rp != r:
            raise InternalRankMismatch(f"rank over Q is {r} but rank mod {p} is {rp}")
    return r


def determinant(A):
    """Exact determinant of a square matrix (Bareiss)."""
    M = [list(row) for row in A]
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionMismatch("determinant of a non-square matrix")
    sign, prev = 1, 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        p = M[c][c]
        for i in range(c + 1, n):
            f = M[i][c]
            M[i][c + 1:] = [(p * x - f * y) // prev for x, y in zip(M[i][c + 1:], M[c][c + 1:])]
            M[i][c] = 0
        prev = p
    return sign * prev if n else 1


# ---------------------------------------------------------------------------
# Hermite normal form

@dataclass
class HermiteForm:
    """Row-style HNF: ``rows`` is an echelon basis of the row lattice.

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``.
    If requested, ``transform`` is a unimodular ``U`` with ``U @ A`` equal to
    ``rows`` followed by zero rows.
    """

    rows: list
    pivots: list
    ncols: int
    transform: list | None = None

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, v):
        """Remainder of ``v`` after integer reduction against the basis."""
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)}, lattice in Z^{self.ncols}")
        w = list(v)
        for row, c in zip(self.rows, self.pivots):
            x = w[c]
            if x:
                f = x // row[c]
                if f:
                    w[c:] = [a - f * b for a, b in zip(w[c:], row[c:])]
        return w

    def contains(self, v):
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)}, lattice in Z^{self.ncols}")
        w = list(v)
        for row, c in zip(self.rows, self.pivots):
            x = w[c]
            if x:
                f, rem = divmod(x, row[c])
                if rem:
                    return False
                w[c:] = [a - f * b for a, b in zip(w[c:], row[c:])]
        return not any(w)

    def spans(self, v):
        """Membership of ``v`` in the rational span of the basis."""
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)}, lattice in Z^{self.ncols}")
        w = list(v)
        for row, c in zip(self.rows, self.pivots):
            x = w[c]
            if x:
                p = row[c]
                g = gcd(x, p)
                a, b = p // g, x // g
                w[c:] = [a * s - b * t for s, t in zip(w[c:], row[c:])]
                content = 0
                for s in w:
                    content = gcd(content, s)
                if content > 1:
                    w = [s // content for s in w]
        return not any(w)


def hnf(A, transform=False, ncols=None):
    H = [list(row) for row in A]
    m, n = shape(H)
    if ncols is not None:
        n = ncols
    U = identity(m) if transform else None

    def addrow(dst, src, f, c):
        # H[src] vanishes left of column c
        H[dst][c:] = [a - f * b for a, b in zip(H[dst][c:], H[src][c:])]
        if U is not None:
            U[dst] = [a - f * b for a, b in zip(U[dst], U[src])]

    def swap(i, j):
        H[i], H[j] = H[j], H[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c]]
            if not nz:
                break
            best = min(nz, key=lambda i: (abs(H[i][c]), i))
            if best != r:
                swap(r, best)
            p = H[r][c]
            others = [i for i in range(r + 1, m) if H[i][c]]
            if not others:
                break
            for i in others:
                addrow(i, r, H[i][c] // p, c)
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            if U is not None:
                U[r] = [-x for x in U[r]]
        p = H[r][c]
        for k in range(r):
            f = H[k][c] // p
            if f:
                addrow(k, r, f, c)
        pivots.append(c)
        r += 1
    return HermiteForm(rows=H[:r], pivots=pivots, ncols=n, transform=U)


def in_lattice(basis, v):
    """Integer membership of ``v`` in the row lattice of an HNF result."""
    return basis.contains(v)


def in_rational_span(A, v):
    """``rank(A) == rank(A + [v])`` over Q."""
    _, n = shape(A)
    if A and len(v) != n:
        raise DimensionMismatch(f"vector of length {len(v)}, rows of length {n}")
    if not any(v):
        return True
    return rational_rank(A) == rational_rank(list(A) + [list(v)])


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass
class SmithDecomposition:
    """Invariant factors ``d1 | d2 | ... | ds`` of an ``m x n`` matrix.

    ``U @ A @ V == diag(factors)`` (padded with zeros) when transforms were
    requested. The cokernel of the row map, ``Z^n / rowspace(A)``, is
    ``Z^cokernel_rank + sum Z/d`` over ``torsion``.
    """

    factors: list
    rows: int
    cols: int
    U: list | None = None
    V: list | None = None
    max_bits: int = field(default=0, compare=False)

    @property
    def rank(self):
        return len(self.factors)

    @property
    def cokernel_rank(self):
        return self.cols - len(self.factors)

    @property
    def torsion(self):
        return [d for d in self.factors if d > 1]

    def diagonal(self):
        D = [[0] * self.cols for _ in range(self.rows)]
        for i, d in enumerate(self.factors):
            D[i][i] = d
        return D


def snf(A, transforms=True):
    """Smith normal form by repeated min-|entry| pivoting.

    The pivot is the nonzero entry of least absolute value in the active
    block (ties: lowest row, then lowest column). Deterministic for a fixed
    input.
    """
    M = [list(row) for row in A]
    m, n = shape(M)
    U = identity(m) if transforms else None
    V = identity(n) if transforms else None
    max_bits = 0

    def rowop(dst, src, f):
        M[dst] = [a - f * b for a, b in zip(M[dst], M[src])]
        if U is not None:
            U[dst] = [a - f * b for a, b in zip(U[dst], U[src])]

    def colop(dst, src, f):
        for row in M:
            if row[src]:
                row[dst] -= f * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= f * row[src]

    def swaprows(i, j):
        if i != j:
            M[i], M[j] = M[j], M[i]
            if U is not None:
                U[i], U[j] = U[j], U[i]

    def swapcols(i, j):
        if i != j:
            for row in M:
                row[i], row[j] = row[j], row[i]
            if V is not None:
                for row in V:
                    row[i], row[j] = row[j], row[i]

    def min_entry(t):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        return best
        return best

    factors = []
    for t in range(min(m, n)):
        best = min_entry(t)
        if best is None:
            break
        _, i, j = best
        swaprows(t, i)
        swapcols(t, j)
        while True:
            p = M[t][t]
            for i in range(t + 1, m):
                if M[i][t]:
                    rowop(i, t, M[i][t] // p)
            for j in range(t + 1, n):
                if M[t][j]:
                    colop(j, t, M[t][j] // p)
            col = [(abs(M[i][t]), i) for i in range(t + 1, m) if M[i][t]]
            row = [(abs(M[t][j]), j) for j in range(t + 1, n) if M[t][j]]
            if col or row:
                # a remainder survived and is smaller than the pivot
                cbest = min(col) if col else None
                rbest = min(row) if row else None
                if rbest is None or (cbest is not None and cbest[0] <= rbest[0]):
                    swaprows(t, cbest[1])
                else:
                    swapcols(t, rbest[1])
                continue
            if abs(p) > 1:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if M[i][j] % p), None)
                if bad is not None:
                    rowop(t, bad[0], -1)
                    continue
            break
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        factors.append(M[t][t])
        max_bits = max(max_bits, M[t][t].bit_length())
    log.debug("snf %dx%d: %d factors, max pivot bit length %d", m, n, len(factors), max_bits)
    return SmithDecomposition(factors=factors, rows=m, cols=n, U=U, V=V, max_bits=max_bits)
