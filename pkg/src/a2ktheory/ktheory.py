"""Relation matrices, K-groups, harmonic cochains and the lemma checks.

Two abelian groups share the generators ``e_a`` (one per directed cell):

* ``C(Gamma)`` with relations ``e_a - sum_b m[a][b] e_b`` and
  ``e_a - sum_b n[a][b] e_b`` (the ``RELS`` system);
* ``C0(Gamma)`` with relations ``e_a - e_shift(a)``, ``e_a - e_shift2(a)``
  and the edge sums of every point (the ``REL0`` system).

"Equal in the group" is tested as membership of a difference in the integer
row lattice of the relation matrix; "equal after tensoring with R" as
membership in its rational row span.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import exactlin
from .cells import cell_index, edge_sum, epsilon, euler_characteristic, inverse_edge_sum, shift_permutation
from .errors import NoTorsionFreeGroup, NotTorsionFree
from .presentation import TORSION_CRITERION, is_torsion_free
from .transition import matrix_m, matrix_n

RELS = "RELS"
REL0 = "REL0"


@dataclass(frozen=True)
class RelationSystem:
    kind: str
    matrix: list  # rows are relations, columns are cell indices

    @property
    def shape(self):
        return exactlin.shape(self.matrix)


def _unit(n, i):
    v = [0] * n
    v[i] = 1
    return v


@lru_cache(maxsize=16)
def relations(tp, kind):
    """Relation matrix in canonical row order.

    ``RELS``: the ``|T|`` M-rows, then the ``|T|`` N-rows.
    ``REL0``: rows ``e_a - e_shift(a)`` and ``e_a - e_shift2(a)`` for every
    cell in order, then ``<x>`` and ``<x-bar>`` for every point in order.
    """
    size = len(tp.triples)
    rows = []
    if kind == RELS:
        for mat in (matrix_m(tp), matrix_n(tp)):
            for a, succ in enumerate(mat.successors):
                row = _unit(size, a)
                for b in succ:
                    row[b] -= 1
                rows.append(row)
    elif kind == REL0:
        perm = shift_permutation(tp)
        for a in range(size):
            for b in (perm[a], perm[perm[a]]):
                row = _unit(size, a)
                row[b] -= 1
                rows.append(row)
        for x in range(tp.plane.n):
            rows.append(edge_sum(tp, x))
            rows.append(inverse_edge_sum(tp, x))
    else:
        raise ValueError(f"unknown relation kind {kind!r}")
    return RelationSystem(kind, rows)


@lru_cache(maxsize=16)
def _lattice(tp, kind):
    return exactlin.hnf(relations(tp, kind).matrix, ncols=len(tp.triples))


@lru_cache(maxsize=16)
def _rank(tp, kind):
    return exactlin.rational_rank(relations(tp, kind).matrix)


@lru_cache(maxsize=16)
def _smith(tp):
    return exactlin.snf(relations(tp, RELS).matrix, transforms=False)


def c_gamma_invariants(tp):
    """``(r, torsion)`` with ``C(Gamma) = Z^r + sum Z/d``."""
    d = _smith(tp)
    return d.cokernel_rank, d.torsion


_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def format_k_group(r, torsion):
    """Render ``Z^(2r) + T`` for K0 = K1."""
    parts = []
    if r:
        parts.append("ℤ" + str(2 * r).translate(_SUPERSCRIPT))
    parts.extend(f"ℤ/{d}" for d in torsion)
    return "K₀ = K₁ = " + (" ⊕ ".join(parts) if parts else "0")


@dataclass(frozen=True)
class KGroups:
    rank: int
    torsion: tuple

    @property
    def k0_rank(self):
        return 2 * self.rank

    def __str__(self):
        return format_k_group(self.rank, self.torsion)


def k_groups(tp):
    r, torsion = c_gamma_invariants(tp)
    return KGroups(r, tuple(torsion))


def harmonic_dimension(tp):
    """Dimension of the space of shift-invariant cochains with vanishing
    edge sums: ``|T| - rank(REL0)``."""
    return len(tp.triples) - _rank(tp, REL0)


def betti_chi(q):
    """``(beta2, chi)`` for a torsion-free group of order ``q``.

    ``beta2 = (q-2)(q^2+q+1)/3`` and ``chi = (q-1)(q^2-1)/3``; raises
    :class:`NoTorsionFreeGroup` when these are not integers.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    beta2 = Fraction((q - 2) * (q * q + q + 1), 3)
    chi = Fraction((q - 1) * (q * q - 1), 3)
    if beta2.denominator != 1 or chi.denominator != 1:
        raise NoTorsionFreeGroup(f"no torsion-free group of order {q}")
    return int(beta2), int(chi)


# ---------------------------------------------------------------------------
# lemma suite

@dataclass
class LemmaVerdict:
    name: str
    passed: bool
    mode: str  # "exact" or "empirical"
    checked: int
    witness: list | None = None

    def label(self):
        return "pass" if self.passed else "fail"


def _first_failure(vectors, test):
    count = 0
    for key, v in vectors:
        count += 1
        if not test(v):
            return count, key
    return count, None


def _witness(key):
    return list(key) if isinstance(key, tuple) else key


def lemma_suite(tp):
    """Check every combinatorial identity as an exact lattice or span fact.

    Verdicts, in order:

    ``epsilon_torsion``
        ``(q^2 - 1) * epsilon`` lies in the integer lattice of RELS.
    ``edge_sum_exchange``
        ``<a1> - e(a2,a0,a1) - <a2-bar> + e(a1,a2,a0)`` in that lattice, all ``a``.
    ``edge_sum_total``
        ``<a0> + <a1> + <a2> - epsilon`` in that lattice, all ``a``.
    ``edge_sums_vanish_rationally``
        every REL0 row lies in the rational span of RELS.
    ``cyclic_relations_imply_transition``
        every RELS row lies in the integer lattice of REL0.
    ``rational_ranks_agree``
        ``rank(RELS) == rank(REL0)`` over Q.

    The two rational verdicts are marked ``empirical`` for presentations
    with torsion, where they are observations rather than theorems.
    """
    q = tp.q
    rels = _lattice(tp, RELS)
    rel0 = _lattice(tp, REL0)
    idx = cell_index(tp)
    eps = epsilon(tp)
    edge = {x: edge_sum(tp, x) for x in range(tp.plane.n)}
    inv_edge = {x: inverse_edge_sum(tp, x) for x in range(tp.plane.n)}
    rational_mode = "exact" if is_torsion_free(tp) else "empirical"
    verdicts = []

    v = [(q * q - 1) * x for x in eps]
    ok = rels.contains(v)
    verdicts.append(LemmaVerdict("epsilon_torsion", ok, "exact", 1, None if ok else v))

    def exchange():
        for a in tp.triples:
            a0, a1, a2 = a
            v = [s - t for s, t in zip(edge[a1], inv_edge[a2])]
            v[idx[(a2, a0, a1)]] -= 1
            v[idx[(a1, a2, a0)]] += 1
            yield a, v

    def total():
        for a in tp.triples:
            a0, a1, a2 = a
            yield a, [x + y + z - e for x, y, z, e in zip(edge[a0], edge[a1], edge[a2], eps)]

    for name, gen in (("edge_sum_exchange", exchange()), ("edge_sum_total", total())):
        count, bad = _first_failure(gen, rels.contains)
        verdicts.append(LemmaVerdict(name, bad is None, "exact", count,
                                     None if bad is None else _witness(bad)))

    rel0_rows = relations(tp, REL0).matrix
    count, bad = _first_failure(enumerate(rel0_rows), rels.spans)
    verdicts.append(LemmaVerdict("edge_sums_vanish_rationally", bad is None, rational_mode,
                                 count, None if bad is None else rel0_rows[bad]))

    rels_rows = relations(tp, RELS).matrix
    count, bad = _first_failure(enumerate(rels_rows), rel0.contains)
    verdicts.append(LemmaVerdict("cyclic_relations_imply_transition", bad is None, "exact",
                                 count, None if bad is None else rels_rows[bad]))

    r_rels, r_rel0 = _rank(tp, RELS), _rank(tp, REL0)
    verdicts.append(LemmaVerdict("rational_ranks_agree", r_rels == r_rel0, rational_mode, 1,
                                 None if r_rels == r_rel0 else [r_rels, r_rel0]))
    return verdicts


# ---------------------------------------------------------------------------
# main theorem and full report

@dataclass
class TheoremReport:
    passed: bool
    rank: int
    harmonic_dim: int
    beta2: int
    chi: int
    chi_formula: int
    k0_rank: int
    failures: list = field(default_factory=list)


def main_theorem_check(tp):
    """Check ``r == harmonic dimension == beta2`` and ``chi - 1 == beta2``.

    Raises :class:`NotTorsionFree` for presentations with a ``(x, x, x)``
    triple.
    """
    if not is_torsion_free(tp):
        raise NotTorsionFree(f"presentation fails the {TORSION_CRITERION} criterion")
    beta2, chi_formula = betti_chi(tp.q)
    r, _ = c_gamma_invariants(tp)
    hdim = harmonic_dimension(tp)
    chi = euler_characteristic(tp).value
    kg = k_groups(tp)
    failures = []
    if r != beta2:
        failures.append(f"rank {r} != beta2 {beta2}")
    if hdim != beta2:
        failures.append(f"harmonic dimension {hdim} != beta2 {beta2}")
    if chi != chi_formula:
        failures.append(f"chi {chi} != formula {chi_formula}")
    if chi - 1 != beta2:
        failures.append(f"chi - 1 = {chi - 1} != beta2 {beta2}")
    if kg.k0_rank != 2 * beta2:
        failures.append(f"K0 rank {kg.k0_rank} != 2*beta2")
    return TheoremReport(not failures, r, hdim, beta2, chi, chi_formula, kg.k0_rank, failures)


@dataclass
class KTheoryReport:
    q: int
    cells: int
    torsion_free: bool
    rank: int
    torsion: list
    k_groups: str
    k0_rank: int
    harmonic_dim: int
    chi: int
    beta2: int | str
    lemmas: dict
    theorem: str
    timings: dict = field(default_factory=dict, compare=False)

    def to_dict(self):
        d = asdict(self)
        d.pop("timings")
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def analyse(tp):
    """Run the whole pipeline; timings are recorded but are not canonical."""
    timings = {}

    def timed(key, fn, *args):
        t0 = time.perf_counter()
        out = fn(*args)
        timings[key] = time.perf_counter() - t0
        return out

    torsion_free = is_torsion_free(tp)
    r, torsion = timed("smith", c_gamma_invariants, tp)
    hdim = timed("harmonic", harmonic_dimension, tp)
    chi = euler_characteristic(tp).value
    verdicts = timed("lemmas", lemma_suite, tp)
    lemmas = {v.name: v.label() + ("" if v.mode == "exact" else " (empirical)")
              for v in verdicts}
    if torsion_free:
        beta2 = betti_chi(tp.q)[0]
        th = timed("theorem", main_theorem_check, tp)
        theorem = "pass" if th.passed else "fail: " + "; ".join(th.failures)
    else:
        beta2 = "n/a"
        theorem = "skipped: torsion"
    return KTheoryReport(
        q=tp.q, cells=len(tp.triples), torsion_free=torsion_free, rank=r,
        torsion=list(torsion), k_groups=format_k_group(r, torsion), k0_rank=2 * r,
        harmonic_dim=hdim, chi=chi, beta2=beta2, lemmas=lemmas, theorem=theorem,
        timings=timings)
