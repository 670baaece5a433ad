"""Vectorized operator tables over many events at once.

The per-event operators in :mod:`possframes.frames` cost a few matrix
products each.  Audits and algebra construction need A, L, K and B for every
event of a family (up to 2^20 of them), so this module evaluates them over a
whole array of masks, one chunk of columns at a time.  States with the same
awareness set share the expensive part of the computation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import Agent, Frame, FrameError

CHUNK = 1 << 15
BATCH_MAX_POSSIBILITIES = 512
TABLE_LIMIT = 1 << 20


def _members(below: np.ndarray, masks: np.ndarray, full: int) -> np.ndarray:
    comp = np.uint64(full) & ~masks
    return (below[:, None] & comp[None, :]) == 0


def _to_masks(p, member: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    masks = np.zeros(member.shape[1], dtype=np.uint64)
    for k, w in enumerate(p.minimals):
        masks |= np.where(member[w], np.uint64(1 << k), np.uint64(0))
    ro = (_members(p.below_u64, masks, p.full_mask) == member).all(axis=0)
    return masks, ro


@dataclass
class AwarenessPlan:
    """Precomputed structure of an awareness correspondence.

    ``classes`` are the distinct awareness sets; ``terms[c]`` lists pairs
    ``(x, covers)`` such that ``x`` lies below some aware ``v`` but is not
    itself aware, and ``covers`` are the upper covers of ``x`` below that
    ``v``.  A state of class ``c`` is troubled by an event exactly when
    one of these ``x`` is a maximal element of the event (or its
    negation) below ``v``.
    """

    class_of: np.ndarray
    classes: list[frozenset[int]]
    terms: list[list[tuple[int, tuple[int, ...]]]]
    classes_below: list[list[int]]


def awareness_plan(frame: Frame, agent: Agent) -> AwarenessPlan:
    key = ("plan", agent.name)
    if key in frame._cache:
        return frame._cache[key]
    p = frame.poset
    aw = agent.aware.matrix
    rows: dict[bytes, int] = {}
    class_of = np.zeros(p.n, dtype=np.int64)
    classes: list[frozenset[int]] = []
    for w in range(p.n):
        k = aw[w].tobytes()
        if k not in rows:
            rows[k] = len(classes)
            classes.append(frozenset(np.flatnonzero(aw[w]).tolist()))
        class_of[w] = rows[k]
    terms = []
    for s in classes:
        ts = set()
        for v in s:
            for x in p.below[v]:
                if x in s:
                    continue
                zs = tuple(z for z in p.upper_covers[x] if p.leq[z, v])
                ts.add((x, zs))
        terms.append(sorted(ts))
    classes_below = [sorted({int(class_of[u]) for u in p.below[w]}) for w in range(p.n)]
    plan = AwarenessPlan(class_of, classes, terms, classes_below)
    frame._cache[key] = plan
    return plan


def _maximal_rows(inside: np.ndarray, x: int, zs: tuple[int, ...]) -> np.ndarray:
    row = inside[x]
    if zs:
        row = row & ~inside[list(zs)].any(axis=0)
    return row


def aware_members(frame: Frame, agent: Agent, masks: np.ndarray) -> np.ndarray:
    """(n, len(masks)) membership of A(E) for each event mask."""
    p = frame.poset
    plan = awareness_plan(frame, agent)
    in_e = _members(p.below_u64, masks, p.full_mask)
    in_n = (p.below_u64[:, None] & masks[None, :]) == 0
    bad = np.zeros((len(plan.classes), len(masks)), dtype=bool)
    for c, ts in enumerate(plan.terms):
        for x, zs in ts:
            bad[c] |= _maximal_rows(in_e, x, zs) | _maximal_rows(in_n, x, zs)
    member = np.empty((p.n, len(masks)), dtype=bool)
    for w in range(p.n):
        member[w] = ~bad[plan.classes_below[w]].any(axis=0)
    return member


def implicit_members(frame: Frame, rel, masks: np.ndarray) -> np.ndarray:
    p = frame.poset
    need = np.zeros(p.n, dtype=np.uint64)
    below = p.below_u64
    for w in range(p.n):
        xs = np.flatnonzero(rel.matrix[w])
        if len(xs):
            need[w] = np.bitwise_or.reduce(below[xs])
    comp = np.uint64(p.full_mask) & ~masks
    return (need[:, None] & comp[None, :]) == 0


@dataclass
class OperatorTables:
    """Operator results for a list of event masks.

    Each entry of ``masks`` maps operator name to result masks; ``regular``
    flags whether the raw result set was regular open (the mask is then
    only meaningful where the flag is set).
    """

    inputs: np.ndarray
    masks: dict[str, np.ndarray]
    regular: dict[str, np.ndarray]


def batch_operators(frame: Frame, agent: Agent, masks: np.ndarray, ops=("A", "LK", "LB", "K", "B")) -> OperatorTables:
    p = frame.poset
    if p.below_u64 is None:
        raise FrameError("batch evaluation needs at most 63 minimal possibilities")
    if p.n > BATCH_MAX_POSSIBILITIES:
        raise FrameError(f"batch evaluation is limited to {BATCH_MAX_POSSIBILITIES} possibilities")
    masks = np.asarray(masks, dtype=np.uint64)
    want = [o for o in ops if o in ("A", "U") or agent.epistemic]
    out_m = {o: np.zeros(len(masks), dtype=np.uint64) for o in want}
    out_r = {o: np.zeros(len(masks), dtype=bool) for o in want}
    for lo in range(0, len(masks), CHUNK):
        chunk = masks[lo:lo + CHUNK]
        sl = slice(lo, lo + len(chunk))
        mem = {}
        if any(o in want for o in ("A", "U", "K", "B")):
            mem["A"] = aware_members(frame, agent, chunk)
        if agent.epistemic and any(o in want for o in ("LK", "K")):
            mem["LK"] = implicit_members(frame, agent.know, chunk)
        if agent.epistemic and any(o in want for o in ("LB", "B")):
            mem["LB"] = implicit_members(frame, agent.believe, chunk)
        if "K" in want:
            mem["K"] = mem["LK"] & mem["A"]
        if "B" in want:
            mem["B"] = mem["LB"] & mem["A"]
        for o in want:
            if o == "U":
                m, r = _to_masks(p, mem["A"])
                out_m[o][sl] = np.uint64(p.full_mask) & ~m
                out_r[o][sl] = r
            else:
                out_m[o][sl], out_r[o][sl] = _to_masks(p, mem[o])
    return OperatorTables(masks, out_m, out_r)


def family_tables(frame: Frame, agent: Agent) -> OperatorTables:
    """Operator tables over every member of the frame's event family (cached)."""
    key = ("tables", agent.name)
    if key not in frame._cache:
        fam = frame.events
        if fam.size > TABLE_LIMIT:
            raise FrameError(f"family of {fam.size} events exceeds the tabulation limit {TABLE_LIMIT}")
        frame._cache[key] = batch_operators(frame, agent, fam.masks())
    return frame._cache[key]
