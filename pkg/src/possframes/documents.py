"""JSON documents for frames, algebras and reports.

All documents carry ``"format_version": 1`` and a ``"kind"``.  Output is
canonical: sorted keys, two-space indent, UTF-8, trailing newline, and
label lists in poset order, so golden files can be compared byte for byte.

Frame document::

    {"format_version": 1, "kind": "frame", "name": "watson",
     "possibilities": ["m", "b", "bbar"],
     "refines": [["b", "m"], ["bbar", "m"]],          # (child, parent) covers
     "events": "all-regular-open",                    # or {name: event-spec}
     "base_events": {"Barks": ["b"]},                 # formula atoms
     "agents": {"i": {"aware": {"m": ["m"], ...}, "know": {...}, "believe": {...}}},
     "groups": {"red": [...]}}                        # optional annotations

An event spec is a list of member labels (must be regular open), or
``{"members": [...], "regularize": true}``, or ``{"down": [...]}`` for the
downset of the listed possibilities.
"""
from __future__ import annotations

import json

import numpy as np

from .algebras import EpistemicAwarenessAlgebra
from .boolean import BooleanAlgebraError, FiniteBooleanAlgebra
from .events import (Event, NotRegularOpenError, all_regular_open, event_from_set,
                     generate_family, regularized_event)
from .frames import Frame, FrameError, build_frame
from .poset import Poset, PosetError, build_poset
from .validation import validate_frame

FORMAT_VERSION = 1


class DocumentError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {doc.get('format_version')!r}")
    return doc


def document_kind(text: str) -> str:
    return _loads(text).get("kind", "")


# -- frames -----------------------------------------------------------------

def _event_spec(p: Poset, name: str, spec) -> Event:
    try:
        if isinstance(spec, list):
            return event_from_set(p, spec)
        if isinstance(spec, dict):
            if "down" in spec:
                return event_from_set(p, p.down_closure(spec["down"]))
            members = spec.get("members", [])
            if spec.get("regularize", False):
                return regularized_event(p, members)
            return event_from_set(p, members)
    except NotRegularOpenError as exc:
        raise DocumentError(f"event {name!r} is not regular open: {exc}") from None
    except PosetError as exc:
        raise DocumentError(f"event {name!r}: {exc}") from None
    raise DocumentError(f"event {name!r} has an unrecognised specification")


def frame_from_document(doc: dict) -> Frame:
    if doc.get("kind") != "frame":
        raise DocumentError(f"expected a frame document, got kind {doc.get('kind')!r}")
    for key in ("possibilities", "refines", "agents"):
        if key not in doc:
            raise DocumentError(f"frame document lacks {key!r}")
    try:
        p = build_poset(doc["possibilities"], [tuple(x) for x in doc["refines"]])
    except PosetError as exc:
        raise DocumentError(str(exc)) from None
    named: dict[str, Event] = {}
    generators: dict[str, Event] = {}
    ev = doc.get("events", "all-regular-open")
    if ev == "all-regular-open":
        fam = all_regular_open(p)
    elif isinstance(ev, dict):
        gens = {k: _event_spec(p, k, v) for k, v in ev.items()}
        fam, _ = generate_family(p, {k: e.members for k, e in gens.items()})
        named.update(gens)
        generators = gens
    else:
        raise DocumentError("'events' must be \"all-regular-open\" or a map of named generators")
    for k, v in doc.get("base_events", {}).items():
        e = _event_spec(p, k, v)
        if not fam.contains(e):
            raise DocumentError(f"base event {k!r} is not in the event family")
        named[k] = e
    try:
        frame = build_frame(p, fam, doc["agents"], named, doc.get("groups", {}), name=doc.get("name", ""))
    except (FrameError, PosetError) as exc:
        raise DocumentError(str(exc)) from None
    frame.reports["document"] = doc
    if generators:
        frame.reports["generators"] = generators
    return frame


def parse_frame(text: str, validate: bool = True) -> Frame:
    """Build a frame from document text; with ``validate`` the validation report is attached.

    A frame that fails validation is still returned so it can be inspected;
    see ``frame.reports["validation"]``.
    """
    frame = frame_from_document(_loads(text))
    if validate:
        validate_frame(frame)
    return frame


def load_frame(path, validate: bool = True) -> Frame:
    with open(path, encoding="utf-8") as fh:
        return parse_frame(fh.read(), validate=validate)


def _in_order(p: Poset, ids) -> list[str]:
    return [p.labels[i] for i in sorted(ids)]


def frame_to_document(frame: Frame) -> dict:
    p = frame.poset
    refines = []
    for x in range(p.n):
        for z in p.upper_covers[x]:
            refines.append([p.labels[x], p.labels[z]])
    agents = {}
    for name, a in frame.agents.items():
        tabs = {}
        for key, c in (("aware", a.aware), ("know", a.know), ("believe", a.believe)):
            if c is not None:
                tabs[key] = {p.labels[w]: _in_order(p, np.flatnonzero(c.matrix[w]).tolist()) for w in range(p.n)}
        agents[name] = tabs
    doc = {"format_version": FORMAT_VERSION, "kind": "frame", "name": frame.name,
           "possibilities": list(p.labels), "refines": refines, "agents": agents}
    if frame.events.all_regular_open:
        doc["events"] = "all-regular-open"
        doc["base_events"] = {k: _in_order(p, e.members) for k, e in frame.named.items()}
    else:
        gens = frame.reports.get("generators")
        if not gens or generate_family(p, {k: e.members for k, e in gens.items()})[0].atoms != frame.events.atoms:
            # write each atom as a generator so the family is reproduced exactly
            gens = {f"atom{j}": Event(p, a) for j, a in enumerate(frame.events.atoms)}
        doc["events"] = {k: _in_order(p, e.members) for k, e in gens.items()}
        doc["base_events"] = {k: _in_order(p, e.members) for k, e in frame.named.items()
                              if k not in gens or gens[k] != e}
    if frame.groups:
        doc["groups"] = {k: _in_order(p, v) for k, v in frame.groups.items()}
    return doc


def serialize_frame(frame: Frame) -> str:
    return dumps(frame_to_document(frame))


# -- algebras ---------------------------------------------------------------

def algebra_from_document(doc: dict):
    if doc.get("kind") != "algebra":
        raise DocumentError(f"expected an algebra document, got kind {doc.get('kind')!r}")
    enc = doc.get("encoding", "atoms")
    agent = doc.get("agent", "i")
    try:
        if enc == "atoms":
            atoms = doc["atoms"]
            base = FiniteBooleanAlgebra(len(atoms), atoms)
            tabs = {}
            for key in ("A", "K", "B"):
                t = doc["tables"][key]
                if len(t) != base.size or any(not isinstance(x, int) or not 0 <= x < base.size for x in t):
                    raise DocumentError(f"table {key} must list {base.size} element indices")
                tabs[key] = np.array(t, dtype=np.int64)
        elif enc == "elements":
            base, mask = FiniteBooleanAlgebra.from_order(doc["elements"], [tuple(x) for x in doc["order"]])
            tabs = {}
            for key in ("A", "K", "B"):
                t = np.zeros(base.size, dtype=np.int64)
                for src, dst in doc["tables"][key].items():
                    t[mask[src]] = mask[dst]
                if set(doc["tables"][key]) != set(doc["elements"]):
                    raise DocumentError(f"table {key} must be total")
                tabs[key] = t
        else:
            raise DocumentError(f"unknown algebra encoding {enc!r}")
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed algebra document: {exc}") from None
    except BooleanAlgebraError as exc:
        raise DocumentError(str(exc)) from None
    return EpistemicAwarenessAlgebra(base, tabs["A"], tabs["K"], tabs["B"], agent=agent, name=doc.get("name", ""))


def parse_algebra(text: str):
    return algebra_from_document(_loads(text))


def load_algebra(path):
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def algebra_to_document(alg) -> dict:
    return {"format_version": FORMAT_VERSION, "kind": "algebra", "name": alg.name, "agent": alg.agent,
            "encoding": "atoms", "atoms": list(alg.base.atom_labels),
            "tables": {"A": alg.A.tolist(), "K": alg.K.tolist(), "B": alg.B.tolist()}}


def serialize_algebra(alg) -> str:
    return dumps(algebra_to_document(alg))


def load_any(path):
    """Load a frame or an algebra, dispatching on the document kind."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    doc = _loads(text)
    if doc.get("kind") == "frame":
        return parse_frame(text)
    if doc.get("kind") == "algebra":
        return algebra_from_document(doc)
    raise DocumentError(f"unknown document kind {doc.get('kind')!r}")
