"""Symbolic wedges of spheres and the recursive homotopy-type evaluator.

A :class:`HomotopyType` is either a point or a finite wedge of spheres.
``S^-1`` stands for the empty complex and exists only so that ``join`` has an
identity; it cannot be wedged with anything but a point.

The X1 recursion suspends twice: ``Ind(X1(n)) ≃ Σ² Ind(X2(n-1))``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .complex import HomologyProfile


@dataclass(frozen=True)
class HomotopyType:
    # None means contractible; otherwise sorted sphere dimensions
    spheres: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.spheres is not None:
            dims = tuple(sorted(int(d) for d in self.spheres))
            if not dims:
                raise ValueError("a sphere wedge needs at least one sphere")
            if dims[0] < -1:
                raise ValueError(f"sphere dimension {dims[0]} below -1")
            if -1 in dims and len(dims) > 1:
                raise ValueError("S^-1 cannot be wedged with other spheres")
            object.__setattr__(self, "spheres", dims)

    @property
    def contractible(self) -> bool:
        return self.spheres is None

    @property
    def is_empty_complex(self) -> bool:
        return self.spheres == (-1,)

    def multiplicities(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.spheres or ()).items()))

    def render(self) -> str:
        """Compact form used in tables: ``pt`` or ``S5+S6``."""
        if self.spheres is None:
            return "pt"
        return "+".join(f"S{d}" for d in self.spheres)

    def pretty(self) -> str:
        if self.spheres is None:
            return "pt"
        return " v ".join(f"{k}xS^{d}" if k > 1 else f"S^{d}" for d, k in self.multiplicities().items())

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def parse(cls, text: str) -> "HomotopyType":
        text = text.strip()
        if text == "pt":
            return PT
        dims = []
        for part in text.split("+"):
            m = re.fullmatch(r"S(-?\d+)", part.strip())
            if m is None:
                raise ValueError(f"cannot parse homotopy type {text!r}")
            dims.append(int(m.group(1)))
        return cls(tuple(dims))

    def to_json_dict(self) -> dict:
        if self.spheres is None:
            return {"kind": "pt"}
        return {"kind": "wedge", "spheres": list(self.spheres)}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "HomotopyType":
        if data["kind"] == "pt":
            return PT
        if data["kind"] == "wedge":
            return cls(tuple(data["spheres"]))
        raise ValueError(f"unknown kind {data['kind']!r}")


PT = HomotopyType(None)
EMPTY = HomotopyType((-1,))


def sphere(d: int, copies: int = 1) -> HomotopyType:
    if copies < 1:
        raise ValueError("need at least one copy")
    return HomotopyType((d,) * copies)


def wedge(*parts: HomotopyType) -> HomotopyType:
    dims: List[int] = []
    for p in parts:
        if p.spheres is not None:
            dims.extend(p.spheres)
    if not dims:
        return PT
    return HomotopyType(tuple(dims))


def suspend(a: HomotopyType, k: int = 1) -> HomotopyType:
    if k < 0:
        raise ValueError("suspension count must be non-negative")
    if a.spheres is None:
        return PT
    return HomotopyType(tuple(d + k for d in a.spheres))


def join(a: HomotopyType, b: HomotopyType) -> HomotopyType:
    if a.spheres is None or b.spheres is None:
        return PT
    return HomotopyType(tuple(x + y + 1 for x in a.spheres for y in b.spheres))


def path_type(n: int) -> HomotopyType:
    if n < 0:
        raise ValueError("path length must be non-negative")
    k, r = divmod(n, 3)
    if r == 0:
        return sphere(k - 1)
    if r == 1:
        return PT
    return sphere(k)


def cycle_type(n: int) -> HomotopyType:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    k, r = divmod(n, 3)
    if r == 0:
        return sphere(k - 1, 2)
    if r == 1:
        return sphere(k - 1)
    return sphere(k)


def expected_homology(t: HomotopyType) -> HomologyProfile:
    """Free homology of a wedge; the empty complex keeps its dimension -1 class."""
    return HomologyProfile(t.multiplicities(), {}, "exact")


# ---------------------------------------------------------------- predictions

_BASES: Dict[str, Dict[int, HomotopyType]] = {
    "Y": {1: sphere(1), 2: sphere(3, 3), 3: sphere(5, 2), 4: sphere(6, 3)},
    "H2": {1: sphere(2, 2), 2: sphere(4, 3), 3: wedge(sphere(5), sphere(6))},
    "Z1": {1: sphere(2), 2: sphere(5, 2), 3: sphere(6)},
    "Z3": {1: sphere(2, 2), 2: sphere(4), 3: sphere(5, 2), 4: sphere(8, 4)},
    "H3": {1: sphere(3, 2), 2: sphere(4, 3), 3: sphere(7), 4: wedge(sphere(6), sphere(10, 4))},
    "X2": {1: sphere(0), 2: sphere(1)},
    "X1": {1: sphere(1)},
}

# family -> list of (suspension, family, offset) summands used past the bases
_RECURSIONS: Dict[str, List[Tuple[int, str, int]]] = {
    "Y": [(4, "H2", 3), (6, "H2", 4), (5, "Y", 3)],
    "H2": [(6, "Y", 3), (4, "Y", 2), (5, "H2", 3)],
    "Z1": [(7, "Z1", 3), (4, "Z1", 2), (7, "Z1", 3)],
    "Z3": [(7, "Z3", 3), (3, "Z1", 2)],
    "H3": [(9, "Z3", 3), (4, "Z2", 2), (5, "Z1", 2)],
    "X2": [(2, "X2", 2)],
    "X1": [(2, "X2", 1)],
}

# Base values replaced by what the computed homology supports; opt-in only.
# H3(2) is isomorphic to H2(3); Z3(3) has reduced Euler characteristic -1;
# H3(4) has Morse-complex homology Z in degree 9 and Z^4 in degree 10.
AMENDED_BASES: Dict[str, Dict[int, HomotopyType]] = {
    "H3": {2: wedge(sphere(5), sphere(6)), 4: wedge(sphere(9), sphere(10, 4))},
    "Z3": {3: sphere(5)},
}

PREDICT_FAMILIES = ("H1", "X1", "X2", "Y", "H2", "Z1", "Z2", "Z3", "H3", "P", "C")


class Evaluator:
    """Memoized evaluation of the mutually recursive prediction system."""

    def __init__(self, amended: bool = False):
        self.amended = amended
        self._memo: Dict[Tuple[str, int], HomotopyType] = {}

    def predict(self, family: str, n: int) -> HomotopyType:
        if family not in PREDICT_FAMILIES:
            raise ValueError(f"no prediction rule for family {family!r}; known: {', '.join(PREDICT_FAMILIES)}")
        lo = 0 if family == "P" else 3 if family == "C" else 1
        if n < lo:
            raise ValueError(f"{family} predictions need n >= {lo}")
        key = (family, n)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        value = self._evaluate(family, n)
        if self._memo.setdefault(key, value) != value:
            raise AssertionError(f"conflicting values for {family}({n})")
        return value

    def _evaluate(self, family: str, n: int) -> HomotopyType:
        if family == "P":
            return path_type(n)
        if family == "C":
            return cycle_type(n)
        if family == "H1":
            return sphere(n, 2)
        if family == "Z2":
            return PT if n % 2 else sphere(2 * n + 1)
        base = AMENDED_BASES.get(family, {}).get(n) if self.amended else None
        if base is None:
            base = _BASES[family].get(n)
        if base is not None:
            return base
        return self.unfold(family, n)

    def unfold(self, family: str, n: int) -> HomotopyType:
        """One step of the recursion for ``family`` at ``n``, ignoring any base value."""
        parts = []
        for k, sub, off in _RECURSIONS[family]:
            parts.append(suspend(self.predict(sub, n - off), k))
        return wedge(*parts)

    def splitting_value(self, n: int) -> HomotopyType:
        """``H1(n)`` assembled as deletion X1(n) wedge the suspended link X2(n)."""
        return wedge(self.predict("X1", n), suspend(self.predict("X2", n), 1))

    def table(self, family: str, n_max: int, n_min: int = 1) -> List[Tuple[int, HomotopyType]]:
        return [(n, self.predict(family, n)) for n in range(n_min, n_max + 1)]

    @property
    def cache_size(self) -> int:
        return len(self._memo)


def recursion_minimum(family: str) -> Optional[int]:
    """Smallest n at which every summand of the recursion has index >= 1."""
    rec = _RECURSIONS.get(family)
    if rec is None:
        return None
    return 1 + max(off for _, _, off in rec)


def base_versus_recursion(ev: Optional[Evaluator] = None) -> List[Tuple[str, int, HomotopyType, HomotopyType]]:
    """Base cases where the recursion is also well formed, as (family, n, base, unfolded)."""
    ev = ev or Evaluator()
    out = []
    for fam, bases in _BASES.items():
        lo = recursion_minimum(fam)
        for n, val in sorted(bases.items()):
            if lo is not None and n >= lo:
                out.append((fam, n, val, ev.unfold(fam, n)))
    return out


def predict(family: str, n: int, amended: bool = False) -> HomotopyType:
    return Evaluator(amended).predict(family, n)
