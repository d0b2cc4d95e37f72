"""Prediction-versus-homology verification and fold-script certification."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Sequence

from .complex import (DEFAULT_MAX_FACES, FaceBudgetExceeded, HomologyProfile, choose_mode,
                      independence_complex, reduced_homology)
from .graphs import (Graph, connected_components, delete_closed_neighborhood, delete_vertices,
                     isomorphism_check, named_family)
from .homotopy import Evaluator, HomotopyType, expected_homology, path_type
from .morse import count_independent_sets, morse_homology
from .reduction import FoldPreconditionViolated, apply_scripted_folds, eval_index, parse_fold_script, reduce, resolve_label

MATCH, MISMATCH, SKIPPED = "match", "mismatch", "skipped-too-large"


@dataclass
class VerificationReport:
    family: str
    n: int
    predicted: HomotopyType
    computed: Optional[HomologyProfile]
    suspensions: int
    contractible: bool
    residual_vertices: int
    faces: Optional[int]
    engine: str
    verdict: str
    seconds: Optional[float] = None
    note: str = ""

    def to_json_dict(self, with_time: bool = True) -> dict:
        out = {
            "family": self.family,
            "n": self.n,
            "predicted": self.predicted.to_json_dict(),
            "expected": expected_homology(self.predicted).to_json_dict(),
            "computed": self.computed.to_json_dict() if self.computed is not None else None,
            "reduction": {
                "suspensions": self.suspensions,
                "contractible": self.contractible,
                "residual_vertices": self.residual_vertices,
            },
            "faces": self.faces,
            "engine": self.engine,
            "verdict": self.verdict,
        }
        if self.note:
            out["note"] = self.note
        if with_time and self.seconds is not None:
            out["seconds"] = round(self.seconds, 3)
        return out

    def summary(self) -> str:
        got = self.computed.render() if self.computed is not None else "-"
        exp = expected_homology(self.predicted).render()
        return f"{self.family}({self.n}): {self.verdict}  predicted {self.predicted.pretty()} [{exp}]  computed [{got}]"


def compare(predicted: HomotopyType, computed: HomologyProfile) -> bool:
    """Free ranks must agree in every dimension and torsion must be absent."""
    exp = expected_homology(predicted)
    return exp.betti == computed.betti and not computed.torsion


def verify(family: str, n: int, mode: Optional[str] = None, max_faces: Optional[int] = DEFAULT_MAX_FACES,
           use_reduce: bool = True, engine: str = "enumerate", evaluator: Optional[Evaluator] = None) -> VerificationReport:
    """build -> reduce -> enumerate -> homology -> shift -> compare.

    ``engine="morse"`` replaces enumeration by the matching-tree Morse
    complex; ``"auto"`` uses it only when the face count is over budget.
    """
    if engine not in ("enumerate", "morse", "auto"):
        raise ValueError(f"unknown engine {engine!r}")
    ev = evaluator or Evaluator()
    predicted = ev.predict(family, n)
    g = named_family(family, n)
    start = time.perf_counter()
    if use_reduce:
        outcome = reduce(g)
        residual, shift, cone = outcome.residual, outcome.suspensions, outcome.contractible
    else:
        residual, shift, cone = g, 0, False

    def report(computed, faces, used, verdict, note=""):
        return VerificationReport(family, n, predicted, computed, shift, cone, residual.n_vertices, faces,
                                  used, verdict, time.perf_counter() - start, note)

    if cone:
        computed = HomologyProfile({}, {}, mode or "exact")
        return report(computed, None, "cone", MATCH if compare(predicted, computed) else MISMATCH)
    faces = None
    if engine == "auto":
        faces = count_independent_sets(residual)
        engine = "enumerate" if max_faces is None or faces <= max_faces else "morse"
    if engine == "morse":
        computed = morse_homology(residual).shift(shift)
    else:
        try:
            k = independence_complex(residual, max_faces)
        except FaceBudgetExceeded as exc:
            return report(None, exc.count, engine, SKIPPED, f"face budget {exc.budget} exceeded")
        faces = k.n_faces
        computed = reduced_homology(k, mode or choose_mode(faces)).shift(shift)
    return report(computed, faces, engine, MATCH if compare(predicted, computed) else MISMATCH)


# ---------------------------------------------------------------- certification

def load_manifest() -> Dict[str, dict]:
    text = resources.files("hexind").joinpath("data/figures.json").read_text()
    return json.loads(text)["figures"]


def load_script_text(name: str) -> str:
    return resources.files("hexind").joinpath("data/scripts", name).read_text()


def _resolve_n(value, n: int) -> int:
    return value if isinstance(value, int) else eval_index(str(value), n)


def build_start(start: dict, n: int) -> Graph:
    g = named_family(start["family"], n)
    if "delete" in start:
        g = delete_vertices(g, [resolve_label(s, n) for s in start["delete"]])
    if "minus_closed" in start:
        g = delete_closed_neighborhood(g, resolve_label(start["minus_closed"], n))
    return g


def _match_components(found: Sequence[Graph], wanted: Sequence[Graph]) -> bool:
    pool = list(found)
    for w in wanted:
        for i, f in enumerate(pool):
            if f.n_vertices == w.n_vertices and f.n_edges == w.n_edges and isomorphism_check(f, w):
                del pool[i]
                break
        else:
            return False
    return True


def _is_contractible_path(c: Graph) -> bool:
    if c.n_edges != c.n_vertices - 1 or max((c.degree(u) for u in c.vertices), default=0) > 2:
        return False
    return path_type(c.n_vertices).contractible


@dataclass
class CertificationReport:
    figure: str
    n: int
    start: str
    steps: List[dict] = field(default_factory=list)
    suspensions: int = 0
    contractible: bool = False
    residual_components: List[int] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(self.checks.values())

    def to_json_dict(self) -> dict:
        return {
            "figure": self.figure,
            "n": self.n,
            "start": self.start,
            "steps": self.steps,
            "suspensions": self.suspensions,
            "contractible": self.contractible,
            "residual_components": self.residual_components,
            "checks": self.checks,
            "error": self.error,
            "ok": self.ok,
        }


def certify(figure: str, n: Optional[int] = None, homology_check: bool = True) -> CertificationReport:
    """Replay a shipped fold script and compare the result with the manifest's expectations."""
    manifest = load_manifest()
    if figure not in manifest:
        raise KeyError(figure)
    entry = manifest[figure]
    n = entry["n"] if n is None else n
    expect = entry["expect"]
    start = build_start(entry["start"], n)
    desc = entry["start"]["family"]
    if "delete" in entry["start"]:
        desc += " - {" + ", ".join(entry["start"]["delete"]) + "}"
    if "minus_closed" in entry["start"]:
        desc += " - N[" + entry["start"]["minus_closed"] + "]"
    rep = CertificationReport(figure, n, desc)
    script = parse_fold_script(load_script_text(entry["script"]), n)
    try:
        outcome = apply_scripted_folds(start, script)
    except FoldPreconditionViolated as exc:
        for i, (k, r) in enumerate(script[:exc.step]):
            rep.steps.append({"step": i, "keep": str(k), "removed": str(r), "ok": True})
        k, r = exc.pair
        rep.steps.append({"step": exc.step, "keep": str(k), "removed": str(r), "ok": False})
        rep.error = str(exc)
        return rep
    for i, (k, r) in enumerate(script):
        rep.steps.append({"step": i, "keep": str(k), "removed": str(r), "ok": True})
    rep.suspensions = outcome.suspensions
    comps = connected_components(outcome.residual)
    rep.residual_components = [c.n_vertices for c in comps]
    wanted: List[Graph] = []
    for spec in expect.get("residual", []) + expect.get("residual_contains", []):
        wanted.extend(connected_components(named_family(spec["family"], _resolve_n(spec["n"], n))))

    if "suspensions" in expect:
        rep.checks["suspensions"] = outcome.suspensions == expect["suspensions"]
    if "isolated" in expect:
        iso = resolve_label(expect["isolated"], n)
        rep.checks["isolated vertex"] = outcome.contractible and any(
            s.kind == "isolated_cone" and s.vertices == (iso,) for s in outcome.trace)
    if "residual" in expect and not outcome.contractible:
        rep.checks["residual"] = len(comps) == len(wanted) and _match_components(comps, wanted)
    if "residual_contains" in expect:
        rep.checks["residual contains"] = _match_components(comps, wanted)
    cone = outcome.contractible or any(_is_contractible_path(c) for c in comps)
    rep.contractible = cone
    rep.checks["contractible"] = cone == bool(expect.get("contractible", False))
    if homology_check:
        # the start graph and the claimed reduced form carry the same homology
        before = morse_homology(start)
        if cone:
            after = HomologyProfile({}, {}, "exact")
        else:
            after = morse_homology(outcome.residual).shift(outcome.suspensions)
        rep.checks["homology"] = before.same_groups(after)
    return rep
