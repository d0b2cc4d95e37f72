"""Labeled simple graphs and the hexagonal grid graph families.

Vertices of the grid graphs carry 1-based ``(row, pos)`` labels: ``v_j^i`` is
``VertexLabel(row=i, pos=j)``.  Path and cycle vertices carry a short tag
(``"p"`` / ``"c"``) and a position, with ``row = 0``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple


class VertexLabel(NamedTuple):
    row: int
    pos: int
    tag: str = ""

    def __str__(self) -> str:
        if self.tag:
            return f"{self.tag}{self.pos}" if self.row == 0 else f"{self.tag}{self.row}:{self.pos}"
        return f"{self.row}:{self.pos}"

    @classmethod
    def parse(cls, text: str) -> "VertexLabel":
        m = _LABEL_RE.fullmatch(text.strip())
        if m is None:
            raise ValueError(f"malformed vertex label {text!r}")
        tag, a, b = m.group("tag") or "", m.group("a"), m.group("b")
        if b is None:
            if not tag:
                raise ValueError(f"untagged label needs <row>:<pos>, got {text!r}")
            return cls(0, int(a), tag)
        return cls(int(a), int(b), tag)


_LABEL_RE = re.compile(r"(?P<tag>[A-Za-z_]+)?(?P<a>\d+)(?::(?P<b>\d+))?")


def v(row: int, pos: int) -> VertexLabel:
    """Grid vertex ``v_pos^row``."""
    return VertexLabel(row, pos)


class Graph:
    """Immutable simple undirected graph over :class:`VertexLabel` vertices.

    Vertices are kept in sorted (row, pos, tag) order; adjacency maps each
    vertex to a frozenset of neighbors.
    """

    __slots__ = ("_vertices", "_adj", "_index")

    def __init__(self, vertices: Iterable[VertexLabel], edges: Iterable[Tuple[VertexLabel, VertexLabel]] = ()):
        verts = sorted(set(vertices))
        adj: Dict[VertexLabel, set] = {u: set() for u in verts}
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at {a}")
            if a not in adj or b not in adj:
                missing = a if a not in adj else b
                raise ValueError(f"edge endpoint {missing} is not a vertex")
            adj[a].add(b)
            adj[b].add(a)
        self._vertices: Tuple[VertexLabel, ...] = tuple(verts)
        self._adj: Dict[VertexLabel, frozenset] = {u: frozenset(ns) for u, ns in adj.items()}
        self._index: Optional[Dict[VertexLabel, int]] = None

    @classmethod
    def _from_adjacency(cls, vertices: Tuple[VertexLabel, ...], adj: Dict[VertexLabel, frozenset]) -> "Graph":
        g = cls.__new__(cls)
        g._vertices = vertices
        g._adj = adj
        g._index = None
        return g

    @property
    def vertices(self) -> Tuple[VertexLabel, ...]:
        return self._vertices

    @property
    def adjacency(self) -> Mapping[VertexLabel, frozenset]:
        return self._adj

    def neighbors(self, u: VertexLabel) -> frozenset:
        try:
            return self._adj[u]
        except KeyError:
            raise KeyError(f"vertex {u} not in graph") from None

    def closed_neighborhood(self, u: VertexLabel) -> frozenset:
        return self.neighbors(u) | {u}

    def degree(self, u: VertexLabel) -> int:
        return len(self.neighbors(u))

    def index(self, u: VertexLabel) -> int:
        if self._index is None:
            self._index = {x: i for i, x in enumerate(self._vertices)}
        return self._index[u]

    def edges(self) -> List[Tuple[VertexLabel, VertexLabel]]:
        """Edges ``(a, b)`` with ``a < b``, sorted."""
        out = [(a, b) for a in self._vertices for b in self._adj[a] if a < b]
        out.sort()
        return out

    @property
    def n_vertices(self) -> int:
        return len(self._vertices)

    @property
    def n_edges(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, u: object) -> bool:
        return u in self._adj

    def __iter__(self) -> Iterator[VertexLabel]:
        return iter(self._vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._vertices, tuple(self.edges())))

    def __repr__(self) -> str:
        return f"Graph(|V|={self.n_vertices}, |E|={self.n_edges})"

    def neighbor_masks(self) -> List[int]:
        """Open neighborhoods as bitmasks over the vertex order."""
        idx = {x: i for i, x in enumerate(self._vertices)}
        masks = []
        for u in self._vertices:
            m = 0
            for w in self._adj[u]:
                m |= 1 << idx[w]
            masks.append(m)
        return masks


def disjoint_union(*graphs: Graph) -> Graph:
    """Union of graphs with pairwise disjoint vertex labels."""
    verts: List[VertexLabel] = []
    edges: List[Tuple[VertexLabel, VertexLabel]] = []
    seen = set()
    for g in graphs:
        clash = seen.intersection(g.vertices)
        if clash:
            raise ValueError(f"labels shared between operands: {sorted(map(str, clash))}")
        seen.update(g.vertices)
        verts.extend(g.vertices)
        edges.extend(g.edges())
    return Graph(verts, edges)


# ---------------------------------------------------------------- builders

def hex_grid(m: int, n: int) -> Graph:
    """The hexagonal grid graph ``H_{1 x m x n}``.

    Rows 1 and m+1 hold ``2n+1`` vertices, interior rows ``2n+2``.  Row k is
    joined to row k+1 by ``v_{2t-1}^k -- v_{2t}^{k+1}`` for k < m and by
    ``v_{2t-1}^m -- v_{2t-1}^{m+1}`` for the last pair of rows, t = 1..n+1.
    """
    if not isinstance(m, int) or not isinstance(n, int) or m < 1 or n < 1:
        raise ValueError(f"hex_grid needs m >= 1 and n >= 1, got m={m}, n={n}")
    verts: List[VertexLabel] = []
    edges: List[Tuple[VertexLabel, VertexLabel]] = []
    for i in range(1, m + 2):
        width = 2 * n + 1 if i in (1, m + 1) else 2 * n + 2
        verts.extend(v(i, j) for j in range(1, width + 1))
        edges.extend((v(i, j), v(i, j + 1)) for j in range(1, width))
    for k in range(1, m + 1):
        for t in range(1, n + 2):
            if k < m:
                edges.append((v(k, 2 * t - 1), v(k + 1, 2 * t)))
            else:
                edges.append((v(m, 2 * t - 1), v(m + 1, 2 * t - 1)))
    return Graph(verts, edges)


def path(n: int, tag: str = "p") -> Graph:
    if n < 0:
        raise ValueError(f"path needs n >= 0, got {n}")
    verts = [VertexLabel(0, i, tag) for i in range(1, n + 1)]
    return Graph(verts, zip(verts, verts[1:]))


def cycle(n: int, tag: str = "c") -> Graph:
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    verts = [VertexLabel(0, i, tag) for i in range(1, n + 1)]
    return Graph(verts, list(zip(verts, verts[1:])) + [(verts[-1], verts[0])])


def empty_graph() -> Graph:
    return Graph(())


def star(leaves: int, tag: str = "s") -> Graph:
    """``K_{1,leaves}``; the center is ``<tag>0``."""
    center = VertexLabel(0, 0, tag)
    rest = [VertexLabel(0, i, tag) for i in range(1, leaves + 1)]
    return Graph([center, *rest], [(center, x) for x in rest])


def induced_subgraph(g: Graph, keep: Iterable[VertexLabel]) -> Graph:
    keep_set = set(keep)
    verts = tuple(u for u in g.vertices if u in keep_set)
    adj = {u: g.adjacency[u] & keep_set for u in verts}
    return Graph._from_adjacency(verts, {u: frozenset(ns) for u, ns in adj.items()})


def delete_vertices(g: Graph, s: Iterable[VertexLabel]) -> Graph:
    """Induced subgraph on ``V(g) \\ s``."""
    s = set(s)
    missing = [u for u in s if u not in g]
    if missing:
        raise KeyError(f"cannot delete absent vertices: {', '.join(sorted(map(str, missing)))}")
    return induced_subgraph(g, (u for u in g.vertices if u not in s))


def delete_closed_neighborhood(g: Graph, u: VertexLabel) -> Graph:
    """Induced subgraph on ``V(g) \\ N[u]``."""
    if u not in g:
        raise KeyError(f"vertex {u} not in graph")
    return delete_vertices(g, g.closed_neighborhood(u))


def connected_components(g: Graph) -> List[Graph]:
    """Components ordered by their smallest vertex."""
    seen = set()
    comps = []
    for root in g.vertices:
        if root in seen:
            continue
        stack = [root]
        seen.add(root)
        members = []
        while stack:
            x = stack.pop()
            members.append(x)
            for y in g.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(induced_subgraph(g, members))
    return comps


# ---------------------------------------------------------------- isomorphism

ISOMORPHISM_VERTEX_LIMIT = 24


def isomorphism_check(g1: Graph, g2: Graph, limit: Optional[int] = ISOMORPHISM_VERTEX_LIMIT) -> bool:
    """Exhaustive backtracking isomorphism test with degree pruning."""
    if limit is not None and max(g1.n_vertices, g2.n_vertices) > limit:
        raise ValueError(f"isomorphism_check limited to {limit} vertices "
                         f"(got {g1.n_vertices} and {g2.n_vertices})")
    return find_isomorphism(g1, g2) is not None


def find_isomorphism(g1: Graph, g2: Graph) -> Optional[Dict[VertexLabel, VertexLabel]]:
    if g1.n_vertices != g2.n_vertices or g1.n_edges != g2.n_edges:
        return None
    if sorted(map(g1.degree, g1)) != sorted(map(g2.degree, g2)):
        return None
    n = g1.n_vertices
    if n == 0:
        return {}
    a1 = g1.neighbor_masks()
    a2 = g2.neighbor_masks()
    deg1 = [bin(x).count("1") for x in a1]
    deg2 = [bin(x).count("1") for x in a2]
    # neighbor degree multisets refine the candidate sets
    sig1 = [(deg1[i], tuple(sorted(deg1[j] for j in _bits(a1[i])))) for i in range(n)]
    sig2 = [(deg2[i], tuple(sorted(deg2[j] for j in _bits(a2[i])))) for i in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None

    # BFS-ish order: each new vertex is adjacent to an already placed one when possible
    order: List[int] = []
    placed = 0
    remaining = set(range(n))
    while remaining:
        frontier = [i for i in remaining if a1[i] & placed]
        pool = frontier or list(remaining)
        nxt = max(pool, key=lambda i: (bin(a1[i] & placed).count("1"), deg1[i], -i))
        order.append(nxt)
        placed |= 1 << nxt
        remaining.discard(nxt)

    mapping = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in range(n):
            if used[j] or sig2[j] != sig1[i]:
                continue
            ok = True
            for prev in order[:k]:
                if bool(a1[i] >> prev & 1) != bool(a2[j] >> mapping[prev] & 1):
                    ok = False
                    break
            if not ok:
                continue
            mapping[i] = j
            used[j] = True
            if extend(k + 1):
                return True
            used[j] = False
            mapping[i] = -1
        return False

    if not extend(0):
        return None
    return {g1.vertices[i]: g2.vertices[mapping[i]] for i in range(n)}


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------- named families

@dataclass(frozen=True)
class FamilySpec:
    name: str
    n_min: int
    build: Callable[[int], Graph]
    description: str


def _deleting(base: Callable[[int], Graph], labels: Callable[[int], Sequence[Tuple[int, int]]]) -> Callable[[int], Graph]:
    return lambda n: delete_vertices(base(n), [v(r, p) for r, p in labels(n)])


def _minus_closed(base: Callable[[int], Graph], label: Callable[[int], Tuple[int, int]]) -> Callable[[int], Graph]:
    return lambda n: delete_closed_neighborhood(base(n), v(*label(n)))


def _h1(n: int) -> Graph:
    return hex_grid(1, n)


def _h2(n: int) -> Graph:
    return hex_grid(2, n)


def _h3(n: int) -> Graph:
    return hex_grid(3, n)


def _z3(n: int) -> Graph:
    if n == 1:
        drop = [(1, 1), (1, 2), (1, 3), (2, 4)]
    elif n == 2:
        drop = [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 2), (2, 6)]
    else:
        drop = [(1, j) for j in range(2 * n - 4, 2 * n + 2)] + [(2, 2 * n - 2), (2, 2 * n + 2)]
    return delete_vertices(hex_grid(3, n), [v(r, p) for r, p in drop])


_x1 = _deleting(_h1, lambda n: [(1, 2 * n + 1)])
_x2 = _minus_closed(_h1, lambda n: (1, 2 * n + 1))

_y = _deleting(_h2, lambda n: [(1, 2 * n), (1, 2 * n + 1), (2, 2 * n + 2)])
_y1 = _deleting(_y, lambda n: [(2, 2 * n - 1)])
_y2 = _minus_closed(_y1, lambda n: (3, 2 * n - 1))
_y3 = _deleting(_y1, lambda n: [(3, 2 * n - 1)])
_y4 = _deleting(_y1, lambda n: [(3, 2 * n - 1), (3, 2 * n)])
_y5 = _deleting(_y, lambda n: [(2, 2 * n - 1), (2, 2 * n), (3, 2 * n - 1)])

_t1 = _deleting(_h2, lambda n: [(2, 2 * n)])
_t2 = _minus_closed(_t1, lambda n: (3, 2 * n - 1))
_t3 = _deleting(_t1, lambda n: [(3, 2 * n - 1)])
_t4 = _deleting(_t1, lambda n: [(3, 2 * n - 1), (3, 2 * n)])
_t5 = _deleting(_h2, lambda n: [(2, 2 * n - 1), (2, 2 * n), (2, 2 * n + 1)])

_z1 = _deleting(_h3, lambda n: [(1, 2 * n), (1, 2 * n + 1), (2, 2 * n + 2)])
_z2 = _deleting(lambda n: _h3(n + 1), lambda n: [
    (1, 2 * n + 2), (1, 2 * n + 3), (2, 2 * n + 4), (3, 2 * n + 3), (3, 2 * n + 4), (4, 2 * n + 2), (4, 2 * n + 3)])

_w1 = _deleting(_z1, lambda n: [(2, 2 * n - 1)])
_w2 = _minus_closed(_w1, lambda n: (3, 2 * n + 1))
_w3 = _deleting(_w1, lambda n: [(3, 2 * n + 1)])
_w4 = _deleting(_w1, lambda n: [(3, 2 * n + 1), (3, 2 * n + 2), (4, 2 * n + 1)])
_w5 = _deleting(_z1, lambda n: [(2, 2 * n - 2), (2, 2 * n - 1), (2, 2 * n)])

_u1 = _deleting(_h3, lambda n: [(2, 2 * n)])
_u2 = _minus_closed(_u1, lambda n: (3, 2 * n + 1))
_u3 = _deleting(_u1, lambda n: [(3, 2 * n + 1)])
_u4 = _deleting(_u1, lambda n: [(3, 2 * n), (3, 2 * n + 1), (4, 2 * n + 1)])
_u5 = _deleting(_h3, lambda n: [(1, 2 * n - 1), (2, 2 * n), (2, 2 * n + 1)])


FAMILIES: Dict[str, FamilySpec] = {f.name: f for f in [
    FamilySpec("H1", 1, _h1, "H_{1x1xn}"),
    FamilySpec("H2", 1, _h2, "H_{1x2xn}"),
    FamilySpec("H3", 1, _h3, "H_{1x3xn}"),
    FamilySpec("X1", 1, _x1, "H1(n) - {v^1_{2n+1}}"),
    FamilySpec("X2", 1, _x2, "H1(n) - N[v^1_{2n+1}]"),
    FamilySpec("Y", 1, _y, "H2(n) - {v^1_{2n}, v^1_{2n+1}, v^2_{2n+2}}"),
    FamilySpec("Y1", 5, _y1, "Y(n) - {v^2_{2n-1}}"),
    FamilySpec("Y2", 5, _y2, "Y1(n) - N[v^3_{2n-1}]"),
    FamilySpec("Y3", 5, _y3, "Y1(n) - {v^3_{2n-1}}"),
    FamilySpec("Y4", 5, _y4, "Y1(n) - {v^3_{2n-1}, v^3_{2n}}"),
    FamilySpec("Y5", 5, _y5, "Y(n) - {v^2_{2n-1}, v^2_{2n}, v^3_{2n-1}}"),
    FamilySpec("T1", 4, _t1, "H2(n) - {v^2_{2n}}"),
    FamilySpec("T2", 4, _t2, "T1(n) - N[v^3_{2n-1}]"),
    FamilySpec("T3", 4, _t3, "T1(n) - {v^3_{2n-1}}"),
    FamilySpec("T4", 4, _t4, "T1(n) - {v^3_{2n-1}, v^3_{2n}}"),
    FamilySpec("T5", 4, _t5, "H2(n) - {v^2_{2n-1}, v^2_{2n}, v^2_{2n+1}}"),
    FamilySpec("Z1", 1, _z1, "H3(n) - {v^1_{2n}, v^1_{2n+1}, v^2_{2n+2}}"),
    FamilySpec("Z2", 1, _z2, "H3(n+1) - {v^1_{2n+2}, v^1_{2n+3}, v^2_{2n+4}, v^3_{2n+3}, v^3_{2n+4}, v^4_{2n+2}, v^4_{2n+3}}"),
    FamilySpec("Z3", 1, _z3, "H3(n) - {v^1_{2n-4..2n+1}, v^2_{2n-2}, v^2_{2n+2}} (n >= 3; n = 1, 2 special)"),
    FamilySpec("W1", 2, _w1, "Z1(n) - {v^2_{2n-1}}"),
    FamilySpec("W2", 2, _w2, "W1(n) - N[v^3_{2n+1}]"),
    FamilySpec("W3", 2, _w3, "W1(n) - {v^3_{2n+1}}"),
    FamilySpec("W4", 2, _w4, "W1(n) - {v^3_{2n+1}, v^3_{2n+2}, v^4_{2n+1}}"),
    FamilySpec("W5", 4, _w5, "Z1(n) - {v^2_{2n-2}, v^2_{2n-1}, v^2_{2n}}"),
    FamilySpec("U1", 4, _u1, "H3(n) - {v^2_{2n}}"),
    FamilySpec("U2", 4, _u2, "U1(n) - N[v^3_{2n+1}]"),
    FamilySpec("U3", 4, _u3, "U1(n) - {v^3_{2n+1}}"),
    FamilySpec("U4", 4, _u4, "U1(n) - {v^3_{2n}, v^3_{2n+1}, v^4_{2n+1}}"),
    FamilySpec("U5", 5, _u5, "H3(n) - {v^1_{2n-1}, v^2_{2n}, v^2_{2n+1}}"),
    FamilySpec("P", 0, path, "path P_n"),
    FamilySpec("C", 3, cycle, "cycle C_n"),
]}


def named_family(name: str, n: int) -> Graph:
    """Build a member of one of the catalogued families."""
    try:
        spec = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None
    if not isinstance(n, int) or n < spec.n_min:
        raise ValueError(f"family {name} is defined for n >= {spec.n_min}, got n={n}")
    return spec.build(n)


# ---------------------------------------------------------------- interchange

def to_json_dict(g: Graph) -> dict:
    verts = [str(u) for u in g.vertices]
    edges = []
    for a, b in g.edges():
        sa, sb = str(a), str(b)
        edges.append([sa, sb] if sa <= sb else [sb, sa])
    edges.sort()
    return {"vertices": verts, "edges": edges}


def to_json(g: Graph) -> str:
    return json.dumps(to_json_dict(g), indent=2) + "\n"


def from_json_dict(data: Mapping) -> Graph:
    verts = [VertexLabel.parse(s) for s in data["vertices"]]
    if len(set(verts)) != len(verts):
        raise ValueError("duplicate vertex labels")
    edges = [(VertexLabel.parse(a), VertexLabel.parse(b)) for a, b in data["edges"]]
    return Graph(verts, edges)


def from_json(text: str) -> Graph:
    return from_json_dict(json.loads(text))


def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {_dot_id(name)} {{"]
    for u in g.vertices:
        lines.append(f"  {_dot_id(str(u))};")
    for a, b in g.edges():
        lines.append(f"  {_dot_id(str(a))} -- {_dot_id(str(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_NODE_RE = re.compile(r'^\s*"([^"]+)";\s*$')
_DOT_EDGE_RE = re.compile(r'^\s*"([^"]+)"\s*--\s*"([^"]+)";\s*$')


def from_dot(text: str) -> Graph:
    """Parse the DOT subset written by :func:`to_dot`."""
    verts, edges = [], []
    for line in text.splitlines():
        m = _DOT_EDGE_RE.match(line)
        if m:
            edges.append((VertexLabel.parse(m.group(1)), VertexLabel.parse(m.group(2))))
            continue
        m = _DOT_NODE_RE.match(line)
        if m:
            verts.append(VertexLabel.parse(m.group(1)))
    return Graph(verts, edges)


def _dot_id(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'
