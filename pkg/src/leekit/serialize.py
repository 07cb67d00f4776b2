"""JSON documents: witnesses, codes, certificates, reports, and their schemas."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

from .abelian import AbelianGroup
from .tiling import GroupHomomorphism, CodeLattice
from .witness import Witness

SCHEMAS = ("witness", "code", "certificate", "sweep_line", "resume", "report")


class DocumentError(ValueError):
    """A JSON document is unreadable or does not match its schema."""


@lru_cache(maxsize=None)
def _registry() -> Registry:
    pairs = []
    for name in SCHEMAS:
        text = resources.files("leekit").joinpath(f"schemas/{name}.schema.json").read_text()
        doc = json.loads(text)
        pairs.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(pairs)


def schema(name: str) -> dict:
    return _registry()[f"https://leekit.invalid/schemas/{name}.schema.json"].contents


def validate(doc, name: str) -> None:
    try:
        jsonschema.Draft202012Validator(schema(name), registry=_registry()).validate(doc)
    except jsonschema.ValidationError as exc:
        raise DocumentError(f"{name} document invalid: {exc.message}") from None


def dumps(doc) -> str:
    """Byte-stable rendering: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(path: str | Path, doc) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(doc))
    return str(path)


def read_json(path: str | Path, name: str | None = None):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    if name:
        validate(doc, name)
    return doc


def _check_residues(G: AbelianGroup, rows) -> None:
    for r in rows:
        if len(r) != G.rank or any(not 0 <= x < m for x, m in zip(r, G.invariant_factors)):
            raise ValueError(f"residues {r} are not reduced for {list(G.invariant_factors)}")


def witness_from_doc(doc: dict) -> Witness:
    validate(doc, "witness")
    try:
        _check_residues(AbelianGroup.from_json(doc["group"]), doc["T"])
        return Witness.from_json(doc)
    except (ValueError, TypeError) as exc:
        raise DocumentError(f"bad witness: {exc}") from None


def code_to_doc(phi: GroupHomomorphism, lattice: CodeLattice | None = None) -> dict:
    doc = {"n": phi.source_dim, "group": phi.target.to_json(), "images": phi.image_matrix()}
    if lattice is not None:
        doc["kernel_basis"] = lattice.to_json()
        doc["determinant"] = lattice.determinant
    return doc


def code_from_doc(doc: dict) -> GroupHomomorphism:
    validate(doc, "code")
    try:
        G = AbelianGroup.from_json(doc["group"])
        if len(doc["images"]) != doc["n"]:
            raise ValueError(f"{len(doc['images'])} images for n = {doc['n']}")
        _check_residues(G, doc["images"])
        return GroupHomomorphism.from_residues(G, doc["images"])
    except (ValueError, TypeError) as exc:
        raise DocumentError(f"bad code document: {exc}") from None
