"""Directed 2-cells of the quotient complex and their formal sums.

A directed cell is a triple of the presentation; its index is its position
in the sorted triple list. Formal sums over cells are plain integer lists of
length ``|T|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .presentation import is_torsion_free, shift


@lru_cache(maxsize=32)
def cell_index(tp):
    """Map triple -> dense index."""
    return {t: i for i, t in enumerate(tp.triples)}


@lru_cache(maxsize=32)
def shift_permutation(tp):
    """``perm[i]`` is the index of the cyclic shift of cell ``i``."""
    idx = cell_index(tp)
    return tuple(idx[shift(t)] for t in tp.triples)


def basis_vector(tp, triple):
    v = [0] * len(tp.triples)
    v[cell_index(tp)[tuple(triple)]] = 1
    return v


def cyclic_orbits(tp):
    """Orbits of the cyclic shift, each as a tuple of triples starting with
    its least member, listed in order of that member."""
    seen = set()
    orbits = []
    for t in tp.triples:
        if t in seen:
            continue
        orb = [t]
        s = shift(t)
        while s != t:
            orb.append(s)
            s = shift(s)
        seen.update(orb)
        orbits.append(tuple(orb))
    return orbits


def edge_sum(tp, point):
    """Indicator vector of cells whose last entry is ``point``."""
    return [int(t[2] == point) for t in tp.triples]


def inverse_edge_sum(tp, point):
    """Indicator vector of cells whose middle entry is ``point``."""
    return [int(t[1] == point) for t in tp.triples]


def epsilon(tp):
    return [1] * len(tp.triples)


@dataclass(frozen=True)
class EulerCharacteristic:
    value: int
    formula: Fraction
    applicable: bool

    @property
    def matches(self):
        """``None`` when the closed formula does not apply (torsion)."""
        return self.value == self.formula if self.applicable else None


def euler_formula(q):
    return Fraction((q - 1) * (q * q - 1), 3)


def euler_characteristic(tp):
    """``1 - |P| + #orbits``: one vertex, ``|P|`` edges, one face per orbit.

    The closed formula ``(q-1)(q^2-1)/3`` is compared only for torsion-free
    presentations.
    """
    value = 1 - tp.plane.n + len(cyclic_orbits(tp))
    return EulerCharacteristic(value, euler_formula(tp.q), is_torsion_free(tp))
