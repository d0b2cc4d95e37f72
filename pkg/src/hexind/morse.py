"""Acyclic matchings on independence complexes via matching trees.

A node ``(A, B)`` of the tree stands for the faces that contain ``A`` and
avoid ``B``.  At each node the first undecided vertex ``q`` with at most one
undecided neighbor decides the move:

* no undecided neighbor: every face at the node pairs with ``face ^ {q}``;
* one undecided neighbor ``p``: faces avoiding ``p`` pair off through ``q``,
  faces containing ``p`` continue at ``(A + p, B + N(p))``.

Otherwise the node splits on the undecided vertex with fewest undecided
neighbors.  Splitting along "contains v or not" is order preserving, so the
union of the node matchings is acyclic and the critical cells (the leaves
with nothing undecided) span a Morse complex with the homology of ``Ind(G)``.
The Morse boundary is computed by pushing chains along gradient paths.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from typing import Dict, List, Tuple

from .complex import HomologyProfile, IntegerMatrix, smith_normal_form
from .graphs import Graph

# node rules
_MATCH, _FORCED, _SPLIT, _LEAF = 0, 1, 2, 3


def count_independent_sets(g: Graph) -> int:
    """Number of faces of ``Ind(g)``, the empty face included."""
    nbr = g.neighbor_masks()

    @lru_cache(maxsize=None)
    def count(mask: int) -> int:
        if not mask:
            return 1
        i = mask.bit_length() - 1
        return count(mask & ~(1 << i)) + count(mask & ~(nbr[i] | (1 << i)))

    return count((1 << len(nbr)) - 1)


def reduced_euler_characteristic(g: Graph) -> int:
    nbr = g.neighbor_masks()

    @lru_cache(maxsize=None)
    def alt(mask: int) -> int:
        if not mask:
            return 1
        i = mask.bit_length() - 1
        return alt(mask & ~(1 << i)) - alt(mask & ~(nbr[i] | (1 << i)))

    return -alt((1 << len(nbr)) - 1)


class MatchingTree:
    def __init__(self, g: Graph):
        self.graph = g
        self.nbr = g.neighbor_masks()
        self.full = (1 << len(self.nbr)) - 1
        self._rules: Dict[Tuple[int, int], Tuple[int, int, int]] = {}
        self._critical: List[int] = []
        self._build()

    def _rule(self, a: int, b: int) -> Tuple[int, int, int]:
        key = (a, b)
        hit = self._rules.get(key)
        if hit is not None:
            return hit
        undecided = self.full & ~(a | b)
        if not undecided:
            rule = (_LEAF, -1, -1)
        else:
            best, best_c = -1, 1 << 30
            rest = undecided
            while rest:
                low = rest & -rest
                i = low.bit_length() - 1
                rest ^= low
                c = bin(self.nbr[i] & undecided).count("1")
                if c <= 1:
                    best, best_c = i, c
                    break
                if c < best_c:
                    best, best_c = i, c
            if best_c == 0:
                rule = (_MATCH, best, -1)
            elif best_c == 1:
                p = (self.nbr[best] & undecided).bit_length() - 1
                rule = (_FORCED, p, best)
            else:
                rule = (_SPLIT, best, -1)
        self._rules[key] = rule
        return rule

    def _build(self) -> None:
        stack = [(0, 0)]
        while stack:
            a, b = stack.pop()
            kind, x, _ = self._rule(a, b)
            if kind == _LEAF:
                self._critical.append(a)
            elif kind == _FORCED:
                stack.append((a | (1 << x), b | self.nbr[x]))
            elif kind == _SPLIT:
                stack.append((a, b | (1 << x)))
                stack.append((a | (1 << x), b | self.nbr[x]))

    @property
    def critical(self) -> List[int]:
        return list(self._critical)

    def critical_counts(self) -> Dict[int, int]:
        """Critical cells per dimension (dimension -1 is the empty face)."""
        return dict(sorted(Counter(bin(m).count("1") - 1 for m in self._critical).items()))

    def partner(self, face: int) -> Tuple[int, int]:
        """``(+1, partner)`` if matched upward, ``(-1, partner)`` downward, ``(0, face)`` if critical."""
        a = b = 0
        while True:
            kind, x, q = self._rule(a, b)
            if kind == _LEAF:
                return 0, face
            if kind == _MATCH:
                bit = 1 << x
                return (-1 if face & bit else 1), face ^ bit
            bit = 1 << x
            if kind == _FORCED and not face & bit:
                qb = 1 << q
                return (-1 if face & qb else 1), face ^ qb
            if face & bit:
                a, b = a | bit, b | self.nbr[x]
            else:
                b = b | bit


def _boundary(face: int) -> List[Tuple[int, int]]:
    out = []
    sign = 1
    rest = face
    while rest:
        low = rest & -rest
        out.append((face ^ low, sign))
        sign = -sign
        rest ^= low
    return out


def _incidence(upper: int, lower: int) -> int:
    """Sign of ``lower`` in the boundary of ``upper`` (one vertex removed)."""
    gone = upper ^ lower
    below = bin(upper & (gone - 1)).count("1")
    return -1 if below & 1 else 1


def morse_boundary(tree: MatchingTree, cell: int) -> Dict[int, int]:
    """Morse boundary of a critical cell, as ``{critical face: coefficient}``."""
    chain: Dict[int, int] = {}
    for f, s in _boundary(cell):
        chain[f] = chain.get(f, 0) + s
    result: Dict[int, int] = {}
    status_cache: Dict[int, Tuple[int, int]] = {}
    while chain:
        face, coef = chain.popitem()
        if not coef:
            continue
        st = status_cache.get(face)
        if st is None:
            st = tree.partner(face)
            status_cache[face] = st
        kind, other = st
        if kind == 0:
            result[face] = result.get(face, 0) + coef
        elif kind == 1:
            # replace face by the rest of the boundary of its upward partner
            eps = _incidence(other, face)
            scale = -coef * eps
            for f, s in _boundary(other):
                if f != face:
                    nv = chain.get(f, 0) + scale * s
                    if nv:
                        chain[f] = nv
                    else:
                        chain.pop(f, None)
        # downward-matched faces die in the Morse complex
    return {f: c for f, c in result.items() if c}


def morse_homology(g: Graph) -> HomologyProfile:
    """Exact reduced homology of ``Ind(g)`` from its Morse complex."""
    tree = MatchingTree(g)
    by_dim: Dict[int, List[int]] = {}
    for m in sorted(tree.critical):
        by_dim.setdefault(bin(m).count("1") - 1, []).append(m)
    ranks: Dict[int, int] = {}
    factors: Dict[int, Tuple[int, ...]] = {}
    for d in sorted(by_dim):
        lower = by_dim.get(d - 1)
        if not lower:
            continue
        index = {m: i for i, m in enumerate(lower)}
        cols = []
        for cell in by_dim[d]:
            col = {index[f]: c for f, c in morse_boundary(tree, cell).items()}
            cols.append(col)
        inv, r = smith_normal_form(IntegerMatrix(len(lower), len(cols), cols))
        ranks[d] = r
        factors[d] = inv
    betti = {}
    torsion = {}
    for d, cells in by_dim.items():
        betti[d] = len(cells) - ranks.get(d, 0) - ranks.get(d + 1, 0)
    for d, inv in factors.items():
        tor = tuple(x for x in inv if x > 1)
        if tor:
            torsion[d - 1] = tor
    return HomologyProfile(betti, torsion, "exact")
