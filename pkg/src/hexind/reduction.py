"""Fold reductions of graphs with suspension bookkeeping.

If ``N(v) ⊆ N(w)`` then ``Ind(G)`` collapses onto ``Ind(G - w)``.  A ``P2``
component contributes one suspension, an isolated vertex makes the complex a
cone.  ``reduce`` applies these moves greedily; ``apply_scripted_folds``
replays a given fold sequence and refuses any step whose precondition fails.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .graphs import Graph, VertexLabel, connected_components, delete_vertices

FoldPair = Tuple[VertexLabel, VertexLabel]


class FoldPreconditionViolated(ValueError):
    def __init__(self, step: int, pair: FoldPair, reason: str = "N(keep) is not contained in N(removed)"):
        keep, removed = pair
        super().__init__(f"step {step}: fold {keep} {removed}: {reason}")
        self.step = step
        self.pair = pair
        self.reason = reason


@dataclass(frozen=True)
class ReductionStep:
    kind: str  # fold | strip_p2 | isolated_cone | component_split
    keep: Optional[VertexLabel] = None
    removed: Optional[VertexLabel] = None
    vertices: Tuple[VertexLabel, ...] = ()
    index: Optional[int] = None
    # graph size after the step
    n_vertices: int = 0
    n_edges: int = 0

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "fold":
            out["keep"] = str(self.keep)
            out["removed"] = str(self.removed)
        else:
            out["vertices"] = [str(u) for u in self.vertices]
        if self.index is not None:
            out["index"] = self.index
        out["graph_vertices"] = self.n_vertices
        out["graph_edges"] = self.n_edges
        return out

    def describe(self) -> str:
        if self.kind == "fold":
            return f"fold {self.keep} {self.removed}"
        names = " ".join(str(u) for u in self.vertices)
        return f"{self.kind.replace('_', '-')} {names}"


@dataclass
class ReductionOutcome:
    residual: Graph
    suspensions: int = 0
    contractible: bool = False
    trace: List[ReductionStep] = field(default_factory=list)

    @property
    def n_folds(self) -> int:
        return sum(1 for s in self.trace if s.kind == "fold")

    def to_json_dict(self) -> dict:
        return {
            "suspensions": self.suspensions,
            "contractible": self.contractible,
            "residual": {"vertices": self.residual.n_vertices, "edges": self.residual.n_edges,
                         "labels": [str(u) for u in self.residual.vertices]},
            "steps": [s.to_json_dict() for s in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def find_fold_pairs(g: Graph) -> List[FoldPair]:
    """All ordered ``(keep, removed)`` with ``N(keep) ⊆ N(removed)``, sorted by (removed, keep)."""
    out = []
    verts = g.vertices
    for w in verts:
        nw = g.neighbors(w)
        for u in verts:
            if u != w and g.neighbors(u) <= nw:
                out.append((u, w))
    return out


def first_fold_pair(g: Graph) -> Optional[FoldPair]:
    for w in g.vertices:
        nw = g.neighbors(w)
        for u in g.vertices:
            if u != w and g.neighbors(u) <= nw:
                return u, w
    return None


def _strip_components(g: Graph, out: ReductionOutcome) -> Tuple[Graph, bool]:
    """Isolated vertex -> cone; otherwise drop every P2 component.  Returns (graph, stop)."""
    comps = connected_components(g)
    for c in comps:
        if c.n_vertices == 1:
            out.trace.append(ReductionStep("isolated_cone", vertices=c.vertices,
                                           n_vertices=g.n_vertices, n_edges=g.n_edges))
            out.contractible = True
            return g, True
    p2 = [c for c in comps if c.n_vertices == 2]
    for c in p2:
        g = delete_vertices(g, c.vertices)
        out.suspensions += 1
        out.trace.append(ReductionStep("strip_p2", vertices=c.vertices,
                                       n_vertices=g.n_vertices, n_edges=g.n_edges))
    return g, False


def _note_split(g: Graph, out: ReductionOutcome) -> None:
    comps = connected_components(g)
    if len(comps) > 1:
        for i, c in enumerate(comps):
            out.trace.append(ReductionStep("component_split", vertices=c.vertices, index=i,
                                           n_vertices=c.n_vertices, n_edges=c.n_edges))


def reduce(g: Graph) -> ReductionOutcome:
    """Strip and fold to a fixpoint; see the module docstring."""
    out = ReductionOutcome(g)
    while True:
        g, stop = _strip_components(g, out)
        if stop:
            break
        pair = first_fold_pair(g)
        if pair is None:
            _note_split(g, out)
            break
        keep, removed = pair
        g = delete_vertices(g, [removed])
        out.trace.append(ReductionStep("fold", keep=keep, removed=removed,
                                       n_vertices=g.n_vertices, n_edges=g.n_edges))
    out.residual = g
    return out


def apply_scripted_folds(g: Graph, script: Sequence[FoldPair]) -> ReductionOutcome:
    """Replay ``script`` verbatim, certifying each fold, then strip components once."""
    out = ReductionOutcome(g)
    for i, (keep, removed) in enumerate(script):
        if keep not in g or removed not in g:
            gone = keep if keep not in g else removed
            raise FoldPreconditionViolated(i, (keep, removed), f"vertex {gone} is not present")
        if keep == removed:
            raise FoldPreconditionViolated(i, (keep, removed), "keep and removed coincide")
        if not g.neighbors(keep) <= g.neighbors(removed):
            extra = sorted(g.neighbors(keep) - g.neighbors(removed))
            raise FoldPreconditionViolated(
                i, (keep, removed), "N(keep) has " + ", ".join(map(str, extra)) + " outside N(removed)")
        g = delete_vertices(g, [removed])
        out.trace.append(ReductionStep("fold", keep=keep, removed=removed,
                                       n_vertices=g.n_vertices, n_edges=g.n_edges))
    while True:
        before = g.n_vertices
        g, stop = _strip_components(g, out)
        if stop or g.n_vertices == before:
            break
    if not out.contractible:
        _note_split(g, out)
    out.residual = g
    return out


# ---------------------------------------------------------------- fold scripts

_TERM_RE = re.compile(r"^\s*(?:(\d*)\s*\*?\s*n)?\s*([+-]?\s*\d+)?\s*$")


def eval_index(expr: str, n: int) -> int:
    """Evaluate a label coordinate such as ``2n-3``, ``n+1`` or ``7``."""
    text = expr.replace(" ", "")
    m = _TERM_RE.match(text)
    if not text or m is None or (m.group(1) is None and "n" in text) or (m.group(2) is None and "n" not in text):
        raise ValueError(f"bad index expression {expr!r}")
    coef = 0
    if "n" in text:
        coef = int(m.group(1)) if m.group(1) else 1
    const = int(m.group(2).replace(" ", "")) if m.group(2) else 0
    return coef * n + const


def resolve_label(text: str, n: int) -> VertexLabel:
    """``row:pos`` with each side an index expression; tagged labels pass through."""
    if ":" in text:
        row, pos = text.split(":", 1)
        return VertexLabel(eval_index(row, n), eval_index(pos, n))
    return VertexLabel.parse(text)


def parse_fold_script(text: str, n: int) -> List[FoldPair]:
    steps: List[FoldPair] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "fold":
            raise ValueError(f"line {lineno}: expected 'fold <keep> <removed>', got {raw.strip()!r}")
        steps.append((resolve_label(parts[1], n), resolve_label(parts[2], n)))
    return steps


def load_fold_script(path: Union[str, Path], n: int) -> List[FoldPair]:
    return parse_fold_script(Path(path).read_text(), n)


def format_fold_script(script: Iterable[FoldPair]) -> str:
    return "".join(f"fold {k} {r}\n" for k, r in script)
