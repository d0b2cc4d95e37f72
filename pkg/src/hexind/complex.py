"""Independence complexes and their reduced integral homology."""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .graphs import Graph, VertexLabel, delete_closed_neighborhood, delete_vertices

DEFAULT_MAX_FACES = 5_000_000
EXACT_FACE_THRESHOLD = 100_000


class FaceBudgetExceeded(RuntimeError):
    """Raised when enumerating an independence complex passes the face budget."""

    def __init__(self, count: int, budget: int):
        super().__init__(f"independence complex exceeds face budget: {count} > {budget}")
        self.count = count
        self.budget = budget


# ---------------------------------------------------------------- complexes

class SimplicialComplex:
    """Faces grouped by dimension, each face a bitmask over ``vertices``.

    Dimension -1 holds the empty face.  Within a dimension faces are in
    lexicographic order of their sorted vertex-index tuples.
    """

    def __init__(self, vertices: Sequence[VertexLabel], masks_by_dim: List[List[int]]):
        self.vertices = tuple(vertices)
        # masks_by_dim[0] is dimension -1
        self._masks = masks_by_dim

    @property
    def dim(self) -> int:
        return len(self._masks) - 2

    def masks(self, d: int) -> List[int]:
        if d < -1 or d > self.dim:
            return []
        return self._masks[d + 1]

    def faces(self, d: int) -> List[Tuple[int, ...]]:
        return [_mask_to_tuple(m) for m in self.masks(d)]

    @property
    def faces_by_dim(self) -> Dict[int, List[Tuple[int, ...]]]:
        return {d: self.faces(d) for d in range(-1, self.dim + 1)}

    def labeled_faces(self, d: int) -> List[Tuple[VertexLabel, ...]]:
        return [tuple(self.vertices[i] for i in f) for f in self.faces(d)]

    @property
    def f_vector(self) -> Tuple[int, ...]:
        """Face counts starting at dimension -1."""
        return tuple(len(x) for x in self._masks)

    @property
    def n_faces(self) -> int:
        return sum(self.f_vector)

    def euler_characteristic(self) -> int:
        """Reduced Euler characteristic, sum of (-1)^d f_d over d >= -1."""
        return sum((-1) ** (d - 1) * f for d, f in enumerate(self.f_vector))

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, f={self.f_vector})"


def _mask_to_tuple(mask: int) -> Tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def independence_complex(g: Graph, max_faces: Optional[int] = DEFAULT_MAX_FACES) -> SimplicialComplex:
    """All independent sets of ``g`` by canonical backtracking."""
    nbr = g.neighbor_masks()
    n = len(nbr)
    by_dim: List[List[int]] = [[0]]
    budget = max_faces if max_faces is not None else -1
    count = 1

    # iterative DFS; each frame: (face mask, forbidden mask, next candidate)
    stack = [(0, 0, 0)]
    while stack:
        face, forbid, start = stack.pop()
        for i in range(start, n):
            if forbid >> i & 1:
                continue
            child = face | (1 << i)
            size = bin(child).count("1")
            count += 1
            if budget >= 0 and count > budget:
                raise FaceBudgetExceeded(count, budget)
            if size >= len(by_dim):
                by_dim.append([])
            by_dim[size].append(child)
            # resume this frame after the child subtree
            stack.append((face, forbid, i + 1))
            stack.append((child, forbid | nbr[i] | (1 << i), i + 1))
            break
    return SimplicialComplex(g.vertices, by_dim)


def complex_from_faces(vertices: Sequence[VertexLabel], faces: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of the given faces (vertex indices)."""
    closed = {0}
    for f in faces:
        m = 0
        for i in f:
            m |= 1 << i
        stack = [m]
        while stack:
            x = stack.pop()
            if x in closed:
                continue
            closed.add(x)
            y = x
            while y:
                low = y & -y
                stack.append(x ^ low)
                y ^= low
    top = max(bin(m).count("1") for m in closed)
    by_dim: List[List[int]] = [[] for _ in range(top + 1)]
    for m in closed:
        by_dim[bin(m).count("1")].append(m)
    for lst in by_dim:
        lst.sort(key=_mask_to_tuple)
    return SimplicialComplex(vertices, by_dim)


# ---------------------------------------------------------------- matrices

@dataclass
class IntegerMatrix:
    """Sparse integer matrix stored column-wise as ``{row: value}`` dicts."""

    rows: int
    cols: int
    columns: List[Dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.columns:
            self.columns = [{} for _ in range(self.cols)]
        if len(self.columns) != self.cols:
            raise ValueError("column count mismatch")

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]]) -> "IntegerMatrix":
        n_rows = len(data)
        n_cols = len(data[0]) if n_rows else 0
        cols = [{r: int(data[r][c]) for r in range(n_rows) if data[r][c]} for c in range(n_cols)]
        return cls(n_rows, n_cols, cols)

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for c, col in enumerate(self.columns):
            for r, val in col.items():
                out[r][c] = val
        return out

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for col in other.columns:
            acc: Dict[int, int] = {}
            for k, b in col.items():
                for r, a in self.columns[k].items():
                    acc[r] = acc.get(r, 0) + a * b
            out.append({r: x for r, x in acc.items() if x})
        return IntegerMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not any(self.columns)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)


def boundary_column(mask: int, lower_index: Mapping[int, int]) -> Dict[int, int]:
    col = {}
    sign = 1
    rest = mask
    while rest:
        low = rest & -rest
        col[lower_index[mask ^ low]] = sign
        sign = -sign
        rest ^= low
    return col


def boundary_matrix(k: SimplicialComplex, d: int) -> IntegerMatrix:
    """Matrix of the boundary map from d-faces to (d-1)-faces.

    ``d = 0`` maps vertices onto the empty face (augmented chain complex).
    """
    if d < 0 or d > k.dim:
        raise ValueError(f"dimension {d} outside 0..{k.dim}")
    lower = {m: i for i, m in enumerate(k.masks(d - 1))}
    cols = [boundary_column(m, lower) for m in k.masks(d)]
    return IntegerMatrix(len(lower), len(cols), cols)


# ---------------------------------------------------------------- Smith normal form

def smith_normal_form(m: IntegerMatrix) -> Tuple[Tuple[int, ...], int]:
    """Invariant factors ``d1 | d2 | ...`` and the rank of ``m``."""
    rows: Dict[int, Dict[int, int]] = {}
    cols: Dict[int, Dict[int, int]] = {}
    heap: List[Tuple[int, int, int, int]] = []
    for c, col in enumerate(m.columns):
        for r, val in col.items():
            if val:
                rows.setdefault(r, {})[c] = val
                cols.setdefault(c, {})[r] = val
    for c, col in cols.items():
        for r, val in col.items():
            heap.append((abs(val), len(col) + len(rows[r]), r, c))
    heapq.heapify(heap)

    def setval(r: int, c: int, val: int) -> None:
        if val:
            rows.setdefault(r, {})[c] = val
            cols.setdefault(c, {})[r] = val
            heapq.heappush(heap, (abs(val), len(cols[c]) + len(rows[r]), r, c))
        else:
            rows[r].pop(c, None)
            cols[c].pop(r, None)
            if not rows[r]:
                del rows[r]
            if not cols[c]:
                del cols[c]

    def requeue(r: int, c: int) -> None:
        # remainders were left behind; the pivot must stay reachable
        if c in rows.get(r, {}):
            heapq.heappush(heap, (abs(rows[r][c]), len(cols[c]) + len(rows[r]), r, c))

    diagonal: List[int] = []
    while heap:
        a, _, r, c = heapq.heappop(heap)
        p = rows.get(r, {}).get(c)
        if p is None or abs(p) != a:
            continue
        # clear column c with row operations
        dirty = False
        for r2, val in list(cols[c].items()):
            if r2 == r:
                continue
            q = val // p
            for c2, pv in list(rows[r].items()):
                setval(r2, c2, rows.get(r2, {}).get(c2, 0) - q * pv)
            if val - q * p:
                dirty = True
        if dirty:
            requeue(r, c)
            continue
        # clear row c with column operations
        for c2, val in list(rows[r].items()):
            if c2 == c:
                continue
            q = val // p
            for r2, pv in list(cols[c].items()):
                setval(r2, c2, cols.get(c2, {}).get(r2, 0) - q * pv)
            if val - q * p:
                dirty = True
        if dirty:
            requeue(r, c)
            continue
        diagonal.append(abs(p))
        setval(r, c, 0)
    return _normalize_diagonal(diagonal), len(diagonal)


def _normalize_diagonal(diag: List[int]) -> Tuple[int, ...]:
    """Turn an arbitrary nonzero diagonal into invariant factors."""
    ones = sum(1 for x in diag if x == 1)
    rest = [x for x in diag if x != 1]
    # repeated gcd/lcm sweeps until the divisibility chain holds
    changed = True
    while changed:
        changed = False
        rest.sort()
        for i in range(len(rest)):
            for j in range(i + 1, len(rest)):
                a, b = rest[i], rest[j]
                if b % a:
                    g = gcd(a, b)
                    rest[i], rest[j] = g, a // g * b
                    changed = True
    rest.sort()
    ones += sum(1 for x in rest if x == 1)
    return tuple([1] * ones + [x for x in rest if x != 1])


# ---------------------------------------------------------------- homology

@dataclass
class HomologyProfile:
    """Reduced homology by dimension: free rank plus torsion invariant factors.

    ``betti`` may hold dimension -1 (only the empty complex has it); it is
    kept for suspension bookkeeping and omitted from reports.
    """

    betti: Dict[int, int] = field(default_factory=dict)
    torsion: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    mode: str = "exact"

    def __post_init__(self):
        self.betti = {d: r for d, r in sorted(self.betti.items()) if r}
        self.torsion = {d: tuple(t) for d, t in sorted(self.torsion.items()) if t}

    def rank(self, d: int) -> int:
        return self.betti.get(d, 0)

    @property
    def torsion_free(self) -> bool:
        return not self.torsion

    @property
    def empty_complex(self) -> bool:
        return -1 in self.betti

    @property
    def reported_betti(self) -> Dict[int, int]:
        return {d: r for d, r in self.betti.items() if d >= 0}

    def is_trivial(self) -> bool:
        return not self.betti and not self.torsion

    def shift(self, k: int) -> "HomologyProfile":
        """Homology of the k-fold suspension."""
        return HomologyProfile({d + k: r for d, r in self.betti.items()},
                               {d + k: t for d, t in self.torsion.items()}, self.mode)

    def same_groups(self, other: "HomologyProfile") -> bool:
        return self.betti == other.betti and self.torsion == other.torsion

    def to_json_dict(self) -> dict:
        out = {
            "betti": {str(d): r for d, r in self.reported_betti.items()},
            "torsion": {str(d): list(t) for d, t in self.torsion.items() if d >= 0},
            "mode": self.mode,
        }
        if self.empty_complex:
            out["empty_complex"] = True
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "HomologyProfile":
        betti = {int(d): int(r) for d, r in data.get("betti", {}).items()}
        if data.get("empty_complex"):
            betti[-1] = 1
        torsion = {int(d): tuple(t) for d, t in data.get("torsion", {}).items()}
        return cls(betti, torsion, data.get("mode", "exact"))

    def render(self) -> str:
        parts = []
        for d, r in self.reported_betti.items():
            parts.append(f"H{d}=Z^{r}" if r > 1 else f"H{d}=Z")
        for d, t in self.torsion.items():
            parts.append(f"T{d}=" + "+".join(f"Z/{x}" for x in t))
        return ", ".join(parts) if parts else ("empty" if self.empty_complex else "0")


def _ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _reduce_columns(cols: Iterable[Tuple[int, Dict[int, int]]], exact: bool) -> Dict[int, Dict[int, int]]:
    """Column reduction with distinct lows; returns ``{low row: column}``.

    Every operation is a unimodular column operation when ``exact``; the
    rational path scales columns fraction-free instead.
    """
    pivots: Dict[int, Dict[int, int]] = {}
    for _, col in cols:
        while col:
            r = max(col)
            piv = pivots.get(r)
            if piv is None:
                pivots[r] = col
                break
            ck, cj = piv[r], col[r]
            if ck == 1 or ck == -1 or cj % ck == 0:
                q = cj // ck
                for row, val in piv.items():
                    nv = col.get(row, 0) - q * val
                    if nv:
                        col[row] = nv
                    else:
                        del col[row]
            elif exact:
                g, a, b = _ext_gcd(ck, cj)
                new_piv: Dict[int, int] = {}
                new_col: Dict[int, int] = {}
                sk, sj = ck // g, cj // g
                for row in set(piv) | set(col):
                    x, y = piv.get(row, 0), col.get(row, 0)
                    nv = a * x + b * y
                    if nv:
                        new_piv[row] = nv
                    nv = sk * y - sj * x
                    if nv:
                        new_col[row] = nv
                pivots[r] = new_piv
                col = new_col
            else:
                new_col = {}
                for row in set(piv) | set(col):
                    nv = ck * col.get(row, 0) - cj * piv.get(row, 0)
                    if nv:
                        new_col[row] = nv
                content = 0
                for val in new_col.values():
                    content = gcd(content, val)
                    if content == 1:
                        break
                if content > 1:
                    new_col = {row: val // content for row, val in new_col.items()}
                col = new_col
    return pivots


def reduced_homology(k: SimplicialComplex, mode: str = "exact") -> HomologyProfile:
    """Reduced homology of ``k`` over Z (``exact``) or Q (``rational``).

    Boundary matrices are reduced top-down with clearing: a (d)-face that is
    the unit pivot of a reduced (d+1)-column has a column that reduces to
    zero, so it is skipped.
    """
    if mode not in ("exact", "rational"):
        raise ValueError(f"mode must be 'exact' or 'rational', got {mode!r}")
    exact = mode == "exact"
    top = k.dim
    sizes = {d: len(k.masks(d)) for d in range(-1, top + 1)}
    ranks: Dict[int, int] = {top + 1: 0}
    factors: Dict[int, Tuple[int, ...]] = {}
    cleared: set = set()
    for d in range(top, -1, -1):
        lower = {m: i for i, m in enumerate(k.masks(d - 1))}
        cols = ((j, boundary_column(m, lower)) for j, m in enumerate(k.masks(d)) if j not in cleared)
        pivots = _reduce_columns(cols, exact)
        ranks[d] = len(pivots)
        nonunit = any(abs(col[r]) != 1 for r, col in pivots.items())
        if exact and nonunit:
            mat = IntegerMatrix(len(lower), len(pivots), list(pivots.values()))
            factors[d], _ = smith_normal_form(mat)
        else:
            factors[d] = ()
        # rows with unit pivots are (d-1)-faces whose own columns vanish after reduction
        cleared = {r for r, col in pivots.items() if abs(col[r]) == 1} if exact else set(pivots)
    betti = {}
    torsion = {}
    for d in range(-1, top + 1):
        betti[d] = sizes[d] - ranks.get(d, 0) - ranks[d + 1]
        if exact:
            tor = tuple(x for x in factors.get(d + 1, ()) if x > 1)
            if tor:
                torsion[d] = tor
    if -1 in betti and betti[-1] < 0:
        raise AssertionError("negative betti number")
    return HomologyProfile(betti, torsion, mode)


# ---------------------------------------------------------------- graph-level helpers

def choose_mode(n_faces: int) -> str:
    return "exact" if n_faces <= EXACT_FACE_THRESHOLD else "rational"


def graph_homology(g: Graph, mode: Optional[str] = None, max_faces: Optional[int] = DEFAULT_MAX_FACES,
                   reduce_first: bool = True, engine: str = "enumerate") -> HomologyProfile:
    """Reduced homology of ``Ind(g)``, fold-reducing ``g`` first by default.

    ``engine``: ``enumerate`` lists every face (raises FaceBudgetExceeded past
    the budget), ``morse`` works on the matching-tree Morse complex, ``auto``
    enumerates when the face count fits the budget and uses ``morse`` otherwise.
    """
    from .morse import count_independent_sets, morse_homology
    from .reduction import reduce

    if engine not in ("enumerate", "morse", "auto"):
        raise ValueError(f"unknown engine {engine!r}")
    if reduce_first:
        outcome = reduce(g)
        if outcome.contractible:
            return HomologyProfile({}, {}, mode or "exact")
        target, shift = outcome.residual, outcome.suspensions
    else:
        target, shift = g, 0
    if engine == "auto":
        fits = max_faces is None or count_independent_sets(target) <= max_faces
        engine = "enumerate" if fits else "morse"
    if engine == "morse":
        return morse_homology(target).shift(shift)
    k = independence_complex(target, max_faces)
    return reduced_homology(k, mode or choose_mode(k.n_faces)).shift(shift)


@dataclass
class SplitReport:
    vertex: VertexLabel
    whole: HomologyProfile
    deletion: HomologyProfile
    link: HomologyProfile
    consistent: bool

    @property
    def status(self) -> str:
        return "consistent" if self.consistent else "splitting absent"

    def to_json_dict(self) -> dict:
        return {
            "vertex": str(self.vertex),
            "status": self.status,
            "whole": self.whole.to_json_dict(),
            "deletion": self.deletion.to_json_dict(),
            "link": self.link.to_json_dict(),
        }


def check_link_deletion_split(g: Graph, vertex: VertexLabel, mode: Optional[str] = None,
                              max_faces: Optional[int] = DEFAULT_MAX_FACES, engine: str = "auto") -> SplitReport:
    """Compare ``Ind(g)`` with ``Ind(g - v)`` wedge the suspension of ``Ind(g - N[v])``.

    At the homology level the wedge splitting means
    ``b_k(g) = b_k(g - v) + b_{k-1}(g - N[v])`` for every k (torsion likewise).
    """
    if vertex not in g:
        raise KeyError(f"vertex {vertex} not in graph")
    whole = graph_homology(g, mode, max_faces, engine=engine)
    deletion = graph_homology(delete_vertices(g, [vertex]), mode, max_faces, engine=engine)
    link = graph_homology(delete_closed_neighborhood(g, vertex), mode, max_faces, engine=engine)
    suspended = link.shift(1)
    dims = set(whole.betti) | set(deletion.betti) | set(suspended.betti)
    ok = all(whole.rank(d) == deletion.rank(d) + suspended.rank(d) for d in dims)
    tdims = set(whole.torsion) | set(deletion.torsion) | set(suspended.torsion)
    ok = ok and all(sorted(whole.torsion.get(d, ())) == sorted(deletion.torsion.get(d, ()) + suspended.torsion.get(d, ()))
                    for d in tdims)
    return SplitReport(vertex, whole, deletion, link, ok)
