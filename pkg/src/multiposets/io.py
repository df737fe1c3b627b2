"""JSON file formats for templates, structures, diagrams, cones and certificates."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .amalgam import BinaryDiagram, Cone
from .canon import canonical_form
from .errors import MultiposetError
from .order import (
    Relation,
    Template,
    is_antisymmetric,
    is_transitive,
    reflexive_closure,
    transitive_closure,
)
from .ramsey import ArrowResult
from .structure import Multiposet


def _read(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MultiposetError(f"cannot read {path}: {exc}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- templates ----------------------------------------------------------------


def template_to_dict(template: Template) -> dict:
    return {"t": template.t, "order": [list(p) for p in template.pairs()]}


def template_from_dict(data: dict) -> Template:
    try:
        return Template.from_pairs(int(data["t"]), [tuple(p) for p in data.get("order", [])])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MultiposetError):
            raise
        raise MultiposetError(f"malformed template: {exc}") from exc


def load_template(path: str | Path) -> Template:
    return template_from_dict(_read(path))


# -- structures ---------------------------------------------------------------


def structure_to_dict(x: Multiposet) -> dict:
    return {
        "size": x.size,
        "relations": [[[a, b] for a, b in rel.pairs() if a != b] for rel in x.relations],
    }


def structure_from_dict(data: dict, close: bool = False) -> Multiposet:
    try:
        size = int(data["size"])
        raw = [Relation.from_pairs(size, [tuple(p) for p in rel]) for rel in data["relations"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MultiposetError):
            raise
        raise MultiposetError(f"malformed structure: {exc}") from exc
    rels = []
    for i, rel in enumerate(raw):
        rel = reflexive_closure(rel)
        if close:
            rel = transitive_closure(rel)
        elif not is_transitive(rel):
            raise MultiposetError(f"relation {i} is not transitive (use close to take its closure)")
        if not is_antisymmetric(rel):
            raise MultiposetError(f"relation {i} violates antisymmetry")
        rels.append(rel)
    return Multiposet(size, tuple(rels))


def load_structure(path: str | Path, close: bool = False) -> Multiposet:
    return structure_from_dict(_read(path), close)


# -- diagrams and cones -------------------------------------------------------


def _inline_or_file(value: Any, base: Path) -> Multiposet:
    if isinstance(value, dict) and "file" in value:
        return load_structure(base / value["file"])
    return structure_from_dict(value)


def diagram_to_dict(d: BinaryDiagram) -> dict:
    return {
        "tops": d.tops,
        "bottom": structure_to_dict(d.bottom),
        "top": structure_to_dict(d.top),
        "arrows": [[{"top": arr.top, "map": list(arr.f)} for arr in pair] for pair in d.arrows],
    }


def diagram_from_dict(data: dict, base: Path = Path(".")) -> BinaryDiagram:
    try:
        arrows = [((p[0]["top"], p[0]["map"]), (p[1]["top"], p[1]["map"])) for p in data["arrows"]]
        return BinaryDiagram.build(
            _inline_or_file(data["bottom"], base), _inline_or_file(data["top"], base), int(data["tops"]), arrows
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise MultiposetError(f"malformed diagram: {exc}") from exc


def load_diagram(path: str | Path) -> BinaryDiagram:
    return diagram_from_dict(_read(path), Path(path).parent)


def cone_to_dict(cone: Cone) -> dict:
    return {"apex": structure_to_dict(cone.apex), "legs": [list(e) for e in cone.legs]}


def cone_from_dict(data: dict, base: Path = Path(".")) -> Cone:
    try:
        return Cone(_inline_or_file(data["apex"], base), tuple(tuple(e) for e in data["legs"]))
    except (KeyError, TypeError) as exc:
        raise MultiposetError(f"malformed cone: {exc}") from exc


def load_cone(path: str | Path) -> Cone:
    return cone_from_dict(_read(path), Path(path).parent)


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


# -- certificates -------------------------------------------------------------


def described(x: Multiposet) -> dict:
    return {"canonical": canonical_form(x)[0].hex(), "structure": structure_to_dict(x)}


def arrow_certificate(c: Multiposet, b: Multiposet, a: Multiposet, k: int, result: ArrowResult) -> dict:
    """Self-contained record of an arrow verdict; the colouring indexes ``hom(A, C)`` in enumeration order."""
    return {
        "kind": "arrow",
        "a": described(a),
        "b": described(b),
        "c": described(c),
        "k": k,
        "holds": result.holds,
        "hom_ac_size": len(result.hom_ac),
        "counterexample": list(result.counterexample.assignment) if result.counterexample else None,
    }
