"""The 0/1 transition matrices M and N on directed cells.

For cells ``a = (a0, a1, a2)`` and ``b``::

    m[a][b] = 1  iff  b2 not on lam(a2)  and  lam(b1) == join(a0, b2)
    n[a][c] = 1  iff  a1 not on lam(c1)  and  c2 == meet(lam(a0), lam(c1))

Rows are built from the plane rather than by testing all pairs: the
conditions pin down ``(b1, b2)`` (resp. ``(c1, c2)``), and axiom (iii) then
pins down the cell.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import TransitionInvariantError


@dataclass(frozen=True)
class TransitionMatrix:
    kind: str  # "M" or "N"
    q: int
    successors: tuple  # successors[a] = sorted column indices with entry 1

    @property
    def size(self):
        return len(self.successors)

    def dense(self):
        n = self.size
        rows = []
        for succ in self.successors:
            row = [0] * n
            for b in succ:
                row[b] = 1
            rows.append(row)
        return rows

    def row_sums(self):
        return [len(s) for s in self.successors]

    def column_sums(self):
        sums = [0] * self.size
        for succ in self.successors:
            for b in succ:
                sums[b] += 1
        return sums

    def dump(self):
        """Text dump: header comment then one row of 0/1 per line."""
        lines = [f"# kind={self.kind} q={self.q} size={self.size}"]
        lines.extend(" ".join(map(str, row)) for row in self.dense())
        return "\n".join(lines) + "\n"


def _by_tail(tp):
    """(middle, last) -> index of the unique cell ending in that pair."""
    return {(t[1], t[2]): i for i, t in enumerate(tp.triples)}


def _check_sums(mat):
    q2 = mat.q * mat.q
    for a, s in enumerate(mat.row_sums()):
        if s != q2:
            raise TransitionInvariantError(f"{mat.kind} row {a} sums to {s}, expected {q2}")
    for b, s in enumerate(mat.column_sums()):
        if s != q2:
            raise TransitionInvariantError(f"{mat.kind} column {b} sums to {s}, expected {q2}")
    return mat


@lru_cache(maxsize=16)
def matrix_m(tp):
    plane, lam = tp.plane, tp.lam
    inv = tp.correspondence.inverse
    tail = _by_tail(tp)
    rows = []
    for a0, _, a2 in tp.triples:
        off = plane.line_mask[lam[a2]]
        succ = []
        for b2 in range(plane.n):
            if off >> b2 & 1:
                continue
            b1 = inv[plane.join(a0, b2)]
            succ.append(tail[(b1, b2)])
        rows.append(tuple(sorted(succ)))
    return _check_sums(TransitionMatrix("M", tp.q, tuple(rows)))


@lru_cache(maxsize=16)
def matrix_n(tp):
    plane, lam = tp.plane, tp.lam
    tail = _by_tail(tp)
    rows = []
    for a0, a1, _ in tp.triples:
        through = plane.point_mask[a1]
        succ = []
        for c1 in range(plane.n):
            line = lam[c1]
            if through >> line & 1:
                continue
            c2 = plane.meet(lam[a0], line)
            succ.append(tail[(c1, c2)])
        rows.append(tuple(sorted(succ)))
    return _check_sums(TransitionMatrix("N", tp.q, tuple(rows)))

