"""Checks that a frame satisfies the awareness and epistemic conditions.

Every check returns a :class:`ConditionResult` carrying concrete witnesses
on failure.  Checks over the event family run exhaustively when the family
is small enough and fall back to seeded sampling otherwise; the ``mode``
field says which happened.
"""
from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass, field

import numpy as np

from .events import Event, is_ro_vector, mask_of_vector, ro_columns
from .frames import Agent, Frame, FrameError, _agent, _relation, aware_vec, implicit_vec
from .poset import Poset
from .tables import BATCH_MAX_POSSIBILITIES, TABLE_LIMIT, batch_operators, family_tables

MAX_WITNESSES = 3


@dataclass
class Settings:
    n_max: int = 3
    seed: int = 0
    samples: int = 200
    join_exhaustive_limit: int = 1 << 12
    tuple_cap: int = 20000
    standard_cap: int = 256


@dataclass
class ConditionResult:
    name: str
    holds: bool
    mode: str = "exhaustive"
    witnesses: list[dict] = field(default_factory=list)
    note: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "holds": self.holds, "mode": self.mode, "witnesses": self.witnesses}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class ValidationReport:
    agent: str
    kind: str
    conditions: list[ConditionResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.conditions)

    def failed(self) -> list[ConditionResult]:
        return [c for c in self.conditions if not c.holds]

    def __getitem__(self, name: str) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"agent": self.agent, "kind": self.kind, "ok": self.ok,
                "conditions": [c.to_dict() for c in self.conditions]}


def describe_event(p: Poset, mask: int) -> list[str]:
    """An event written as its coarsest members (it is their regularized downset)."""
    vec = Event(p, int(mask)).vector
    return p.names(_maximal(p, vec))


def _maximal(p: Poset, vec: np.ndarray) -> list[int]:
    idx = np.flatnonzero(vec)
    out = []
    for x in idx:
        if not any(vec[z] for z in p.upper_covers[x]):
            out.append(int(x))
    return out


def _maximal_vec(p: Poset, vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=bool)
    if not vec.any():
        return vec.copy()
    blocked = (p.cover_matrix @ vec.astype(np.float32)) > 0
    return vec & ~np.asarray(blocked).ravel()


def _can_batch(frame: Frame) -> bool:
    p = frame.poset
    return p.below_u64 is not None and p.n <= BATCH_MAX_POSSIBILITIES


def _sample_elements(frame: Frame, rng: np.random.Generator, count: int) -> np.ndarray:
    fam = frame.events
    if fam.size <= count:
        return np.arange(fam.size, dtype=np.uint64)
    if fam.k <= 62:
        return rng.integers(0, fam.size, size=count, dtype=np.uint64)
    raise FrameError("family too wide to sample")


# -- awareness -------------------------------------------------------------

def validate_awareness(frame: Frame, agent=None, settings: Settings | None = None) -> ValidationReport:
    s = settings or Settings()
    a = _agent(frame, agent)
    p = frame.poset
    if p.maximum is None:
        raise FrameError("awareness needs a maximum possibility; this poset has none")
    m = p.maximum
    aw = a.aware.matrix
    rep = ValidationReport(a.name, "awareness")
    lab = p.labels

    bad = np.flatnonzero(~aw[:, m])
    rep.conditions.append(ConditionResult("nonvacuity", not len(bad),
                                          witnesses=[{"possibility": lab[w]} for w in bad[:MAX_WITNESSES]]))

    wit = []
    for v in np.flatnonzero(aw.any(axis=0)):
        down = p.leq[:, v]
        ok = bool(ro_columns(p, down[:, None])[0])
        if ok:
            ok = frame.events.contains(mask_of_vector(p, down))
        if not ok:
            w = int(np.flatnonzero(aw[:, v])[0])
            wit.append({"possibility": lab[w], "target": lab[int(v)]})
    rep.conditions.append(ConditionResult("expressibility", not wit, witnesses=wit[:MAX_WITNESSES]))

    wit = []
    for x in range(p.n):
        for z in p.upper_covers[x]:
            lost = aw[z] & ~aw[x]
            if lost.any():
                wit.append({"possibility": lab[z], "refinement": lab[x], "target": lab[int(np.flatnonzero(lost)[0])]})
    rep.conditions.append(ConditionResult("persistence", not wit, witnesses=wit[:MAX_WITNESSES]))

    rep.conditions.append(_refinability_of_columns(p, aw, "refinability"))
    rep.conditions.append(check_joinability(frame, a, s))
    rep.conditions.append(_closure_condition(frame, a, s, "A", "closure_A"))
    rep.conditions.append(is_quasi_principal(frame, s))
    return rep


def _refinability_of_columns(p: Poset, mat: np.ndarray, name: str) -> ConditionResult:
    """For each column set X: if every minimal below w lies in X then w is in X."""
    mins = list(p.minimals)
    inc = p.leq[mins, :].T.astype(np.float32)
    missing = inc @ (~mat[mins, :]).astype(np.float32)
    viol = (missing < 0.5) & ~mat
    wit = [{"possibility": p.labels[int(w)], "target": p.labels[int(v)]} for w, v in np.argwhere(viol)[:MAX_WITNESSES]]
    return ConditionResult(name, not viol.any(), witnesses=wit)


def _max_below(p: Poset, vec: np.ndarray, v: int) -> np.ndarray:
    return _maximal_vec(p, vec & p.leq[:, v])


def check_finite_joinability(frame: Frame, agent=None, n_max: int = 3, cap: int | None = None,
                             seed: int = 0) -> ConditionResult:
    """Possibility-tuple form of joinability for tuples of size 2..n_max.

    With ``cap`` the tuples of each (awareness set, v) pair are sampled
    (seeded) once their number exceeds the cap.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    a = _agent(frame, agent)
    p = frame.poset
    aw = a.aware.matrix
    rng = np.random.default_rng(seed)
    sampled = False
    seen = set()
    for w in range(p.n):
        key = aw[w].tobytes()
        if key in seen:
            continue
        seen.add(key)
        sset = np.flatnonzero(aw[w])
        if aw[w].all():
            continue
        for v in sset:
            cands = [int(u) for u in sset if u != v and p.leq[u, v] and _ro_down(p, int(u))]
            combos = []
            total = sum(_ncr(len(cands), r) for r in range(2, n_max + 1))
            if cap is not None and total > cap:
                sampled = True
                for _ in range(cap):
                    r = int(rng.integers(2, min(n_max, len(cands)) + 1))
                    combos.append(tuple(sorted(rng.choice(len(cands), size=r, replace=False).tolist())))
                combos = [tuple(cands[i] for i in c) for c in combos]
            else:
                combos = itertools.chain.from_iterable(itertools.combinations(cands, r) for r in range(2, n_max + 1))
            for tup in combos:
                mask = 0
                for u in tup:
                    mask |= p.below_mask[u]
                mx = _max_below(p, Event(p, mask).vector, int(v))
                out = mx & ~aw[w]
                if out.any():
                    return ConditionResult("joinability", False, f"finite-join(n_max={n_max})", [{
                        "possibility": p.labels[w], "target": p.labels[int(v)],
                        "tuple": [p.labels[u] for u in tup],
                        "missing": p.labels[int(np.flatnonzero(out)[0])]}])
    mode = f"finite-join(n_max={n_max})" + ("+sampled" if sampled else "")
    return ConditionResult("joinability", True, mode)


def _ncr(n: int, r: int) -> int:
    return comb(n, r) if 0 <= r <= n else 0


def _ro_down(p: Poset, v: int) -> bool:
    return bool(ro_columns(p, p.leq[:, v][:, None])[0])


def _class_terms(p: Poset, sset: frozenset[int], v: int) -> list[tuple[int, tuple[int, ...]]]:
    return [(x, tuple(z for z in p.upper_covers[x] if p.leq[z, v])) for x in sorted(p.below[v]) if x not in sset]


def check_joinability(frame: Frame, agent=None, settings: Settings | None = None) -> ConditionResult:
    """Joinability over event pairs when the family is small, else the tuple form plus sampled pairs."""
    s = settings or Settings()
    a = _agent(frame, agent)
    fam = frame.events
    if fam.size <= s.join_exhaustive_limit and _can_batch(frame):
        return _join_pairs(frame, a, np.arange(fam.size, dtype=np.int64), None)
    res = check_finite_joinability(frame, a, s.n_max, cap=s.tuple_cap, seed=s.seed)
    if not res.holds or not _can_batch(frame):
        return res
    rng = np.random.default_rng(s.seed)
    if fam.size <= 2 * s.samples:
        pair_res = _join_pairs(frame, a, np.arange(fam.size, dtype=np.int64), None)
    else:
        pairs = _sample_elements(frame, rng, 2 * s.samples).astype(np.int64).reshape(-1, 2)
        pair_res = _join_pairs(frame, a, None, pairs)
    if not pair_res.holds:
        return pair_res
    return ConditionResult("joinability", True, res.mode + "+sampled-pairs",
                           note=f"tuple form plus {s.samples} seeded event pairs (seed {s.seed})")


def _join_pairs(frame: Frame, a: Agent, elements, pairs) -> ConditionResult:
    """Check the event form of joinability over all elements, or over given element pairs."""
    p = frame.poset
    fam = frame.events
    aw = a.aware.matrix
    seen = set()
    for w in range(p.n):
        key = aw[w].tobytes()
        if key in seen or aw[w].all():
            continue
        seen.add(key)
        sset = frozenset(np.flatnonzero(aw[w]).tolist())
        for v in sorted(sset):
            terms = _class_terms(p, sset, v)
            if not terms:
                continue

            def ok_of(els):
                masks = fam.elements_to_masks(np.asarray(els, dtype=np.uint64))
                inside = (p.below_u64[:, None] & (np.uint64(p.full_mask) & ~masks)[None, :]) == 0
                badv = np.zeros(len(masks), dtype=bool)
                for x, zs in terms:
                    row = inside[x]
                    if zs:
                        row = row & ~inside[list(zs)].any(axis=0)
                    badv |= row
                return ~badv

            if elements is not None:
                ok = ok_of(elements)
                good = np.flatnonzero(ok)
                for e1 in good:
                    joined = good | e1
                    bad = ~ok[joined]
                    if bad.any():
                        e2 = int(good[np.flatnonzero(bad)[0]])
                        return _join_fail(frame, w, v, int(e1), e2, "exhaustive")
            else:
                e1s, e2s = pairs[:, 0], pairs[:, 1]
                ok1, ok2, ok12 = ok_of(e1s), ok_of(e2s), ok_of(e1s | e2s)
                bad = ok1 & ok2 & ~ok12
                if bad.any():
                    i = int(np.flatnonzero(bad)[0])
                    return _join_fail(frame, w, v, int(e1s[i]), int(e2s[i]), "sampled-pairs")
    return ConditionResult("joinability", True, "exhaustive" if elements is not None else "sampled-pairs")


def _join_fail(frame, w, v, e1, e2, mode) -> ConditionResult:
    p = frame.poset
    fam = frame.events
    return ConditionResult("joinability", False, mode, [{
        "possibility": p.labels[w], "target": p.labels[v],
        "events": [describe_event(p, fam.mask_of(e1)), describe_event(p, fam.mask_of(e2))]}])


def _closure_condition(frame: Frame, a: Agent, s: Settings, op: str, name: str) -> ConditionResult:
    """Membership of op(E) in the family for every (or sampled) E."""
    p = frame.poset
    fam = frame.events
    rng = np.random.default_rng(s.seed)
    if _can_batch(frame):
        if fam.size <= TABLE_LIMIT:
            tabs = family_tables(frame, a)
            inputs = np.arange(fam.size, dtype=np.uint64)
            mode = "exhaustive"
        else:
            inputs = _sample_elements(frame, rng, s.samples)
            tabs = batch_operators(frame, a, fam.elements_to_masks(inputs), ops=(op,))
            mode = "sampled"
        res_m = tabs.masks[op]
        reg = tabs.regular[op]
        inside = fam.masks_to_elements(res_m) >= 0
        viol = np.flatnonzero(~(reg & inside))
        wit = []
        for i in viol[:MAX_WITNESSES]:
            e = int(inputs[i])
            wit.append({"event": describe_event(p, fam.mask_of(e)),
                        "problem": "not regular open" if not reg[i] else "not in the family"})
        note = "" if mode == "exhaustive" else f"{len(inputs)} seeded events (seed {s.seed})"
        return ConditionResult(name, not len(viol), mode, wit, note)
    # large frame: per-event evaluation on a sample
    inputs = _sample_elements(frame, rng, min(s.samples, 32))
    wit = []
    for e in inputs:
        ev = fam.event(int(e))
        if op == "A":
            vec = aware_vec(frame, a, ev)
        else:
            vec = implicit_vec(_relation(a, "know" if op == "LK" else "believe"), ev.vector)
        if not is_ro_vector(p, vec):
            wit.append({"event": describe_event(p, ev.mask), "problem": "not regular open"})
        elif not fam.contains(mask_of_vector(p, vec)):
            wit.append({"event": describe_event(p, ev.mask), "problem": "not in the family"})
    return ConditionResult(name, not wit, "sampled", wit[:MAX_WITNESSES],
                           f"{len(inputs)} seeded events (seed {s.seed})")


def is_quasi_principal(frame: Frame, settings: Settings | None = None) -> ConditionResult:
    """Every member of every event lies below a maximal member of that event."""
    s = settings or Settings()
    p = frame.poset
    fam = frame.events
    if fam.size <= s.join_exhaustive_limit:
        els, mode = range(fam.size), "exhaustive"
    else:
        els, mode = _sample_elements(frame, np.random.default_rng(s.seed), s.samples), "sampled"
    for e in els:
        vec = fam.event(int(e)).vector
        mx = _maximal_vec(p, vec)
        covered = p.leq[:, mx].any(axis=1)
        if (vec & ~covered).any():
            w = int(np.flatnonzero(vec & ~covered)[0])
            return ConditionResult("quasi_principal", False, mode,
                                   [{"event": describe_event(p, fam.mask_of(int(e))), "possibility": p.labels[w]}])
    return ConditionResult("quasi_principal", True, mode)


# -- standardness ------------------------------------------------------------

@dataclass
class StandardResult:
    holds: bool
    witness: dict | None
    reduced_holds: bool
    reduced_witness: dict | None
    mode: str = "exhaustive"

    @property
    def forms_agree(self) -> bool:
        return self.holds == self.reduced_holds

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {"holds": self.holds, "witness": self.witness, "reduced_form_holds": self.reduced_holds,
                "reduced_witness": self.reduced_witness, "forms_agree": self.forms_agree, "mode": self.mode}


def is_standard(frame: Frame, agent=None, settings: Settings | None = None) -> StandardResult:
    """Awareness of a possibility v must give awareness of the event ↓v.

    The definition is checked directly.  The reduced form (only the
    coarsest refinements incompatible with v) is evaluated alongside; it
    drops the meet part of the definition, so on posets that are not trees
    the two can differ and the report says whether they agree.
    """
    s = settings or Settings()
    a = _agent(frame, agent)
    p = frame.poset
    aw = a.aware.matrix
    targets = [int(v) for v in np.flatnonzero(aw.any(axis=0))]
    mode = "exhaustive"
    cap = s.standard_cap if _can_batch(frame) else min(s.standard_cap, 32)
    if len(targets) > cap:
        rng = np.random.default_rng(s.seed)
        targets = sorted(rng.choice(targets, size=cap, replace=False).tolist())
        mode = "sampled"
    witness = None
    downs = [p.leq[:, v] for v in targets]
    not_ro = [v for v, d in zip(targets, downs) if not ro_columns(p, d[:, None])[0]]
    if not_ro:
        v = not_ro[0]
        witness = {"possibility": p.labels[int(np.flatnonzero(aw[:, v])[0])], "target": p.labels[v],
                   "problem": "principal downset is not regular open"}
    else:
        masks = np.array([mask_of_vector(p, d) for d in downs], dtype=np.uint64)
        if _can_batch(frame):
            res = batch_operators(frame, a, masks, ops=("A",))
            member = (p.below_u64[:, None] & (np.uint64(p.full_mask) & ~res.masks["A"])[None, :]) == 0
        else:
            member = np.stack([aware_vec(frame, a, Event(p, int(mk))) for mk in masks], axis=1)
        for j, v in enumerate(targets):
            viol = aw[:, v] & ~member[:, j]
            if viol.any():
                witness = {"possibility": p.labels[int(np.flatnonzero(viol)[0])], "target": p.labels[v]}
                break

    reduced_witness = None
    seen = set()
    compat = (p.below_u64[:, None] & p.below_u64[None, :]) != 0 if p.below_u64 is not None else \
        np.array([[bool(x & y) for y in p.below_mask] for x in p.below_mask])
    for w in range(p.n):
        key = aw[w].tobytes()
        if key in seen or reduced_witness:
            continue
        seen.add(key)
        sset = np.flatnonzero(aw[w])
        if aw[w].all():
            continue
        tv = [v for v in sset if v in set(targets)] if mode == "sampled" else sset
        for v in tv:
            incompatible = ~compat[:, v]
            for v2 in sset:
                mx = _maximal_vec(p, p.leq[:, v2] & incompatible)
                out = mx & ~aw[w]
                if out.any():
                    reduced_witness = {"possibility": p.labels[w], "target": p.labels[int(v)],
                                       "other": p.labels[int(v2)], "missing": p.labels[int(np.flatnonzero(out)[0])]}
                    break
            if reduced_witness:
                break
    return StandardResult(witness is None, witness, reduced_witness is None, reduced_witness, mode)


# -- epistemic -------------------------------------------------------------

def validate_epistemic(frame: Frame, agent=None, settings: Settings | None = None) -> ValidationReport:
    s = settings or Settings()
    a = _agent(frame, agent)
    if not a.epistemic:
        raise FrameError(f"agent {a.name!r} has no know/believe tables")
    p = frame.poset
    rep = ValidationReport(a.name, "epistemic")
    lab = p.labels
    for which, short in (("know", "K"), ("believe", "B")):
        r = _relation(a, which).matrix
        wit = []
        for x in range(p.n):
            for z in p.upper_covers[x]:
                extra = r[x] & ~r[z]
                if extra.any():
                    wit.append({"possibility": lab[z], "refinement": lab[x], "target": lab[int(np.flatnonzero(extra)[0])]})
        mono = ConditionResult(f"{short}_monotonicity", not wit, witnesses=wit[:MAX_WITNESSES])
        rows_ro = ro_columns(p, r.T)
        reg = ConditionResult(f"{short}_regularity", bool(rows_ro.all()),
                              witnesses=[{"possibility": lab[int(w)]} for w in np.flatnonzero(~rows_ro)[:MAX_WITNESSES]])
        rep.conditions += [mono, reg, _relation_refinability(p, r, f"{short}_refinability", mono.holds and reg.holds)]
        rep.conditions.append(_closure_condition(frame, a, s, "L" + short, f"closure_L{short}"))
    k, b = a.know.matrix, a.believe.matrix
    bad = np.flatnonzero(~k.diagonal())
    rep.conditions.append(ConditionResult("factivity", not len(bad), witnesses=[{"possibility": lab[w]} for w in bad[:MAX_WITNESSES]]))
    bad = np.flatnonzero(~b.any(axis=1))
    rep.conditions.append(ConditionResult("consistency", not len(bad), witnesses=[{"possibility": lab[w]} for w in bad[:MAX_WITNESSES]]))
    viol = np.argwhere(b & ~k)
    rep.conditions.append(ConditionResult("inclusion", not len(viol), witnesses=[
        {"possibility": lab[w], "target": lab[v]} for w, v in viol[:MAX_WITNESSES]]))
    return rep


def _relation_refinability(p: Poset, r: np.ndarray, name: str, shortcut_ok: bool) -> ConditionResult:
    """If v is in R(w), some refinement w' of w has every refinement meeting R in ↓v."""
    if p.n <= BATCH_MAX_POSSIBILITIES or not shortcut_ok or p.below_u64 is None:
        leq = p.leq.astype(np.float32)
        y = (r.astype(np.float32) @ leq) > 0           # y[w'', v]: R(w'') meets ↓v
        int_y = (leq.T @ (~y).astype(np.float32)) < 0.5  # all refinements of w' are in y
        reach = (leq.T @ int_y.astype(np.float32)) > 0   # some refinement of w is in int(y)
        viol = r & ~reach
        mode = "exhaustive"
    else:
        # with monotonicity and regularity it suffices to look at minimal refinements
        rmask = np.array([mask_of_vector(p, r[w]) for w in range(p.n)], dtype=np.uint64)
        union = np.zeros(p.n, dtype=np.uint64)
        for w in range(p.n):
            for mu in p.below[w]:
                if mu in p.bit:
                    union[w] |= rmask[mu]
        meets = (union[:, None] & p.below_u64[None, :]) != 0
        viol = r & ~meets
        mode = "exhaustive(minimal-refinements)"
    wit = [{"possibility": p.labels[int(w)], "target": p.labels[int(v)]} for w, v in np.argwhere(viol)[:MAX_WITNESSES]]
    return ConditionResult(name, not viol.any(), mode, wit)


# -- whole frame -------------------------------------------------------------

@dataclass
class FrameValidation:
    awareness: dict[str, ValidationReport]
    standard: dict[str, StandardResult]
    epistemic: dict[str, ValidationReport]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.awareness.values()) and all(r.ok for r in self.epistemic.values())

    @property
    def is_standard(self) -> bool:
        return self.ok and all(s.holds for s in self.standard.values())

    @property
    def is_epistemic(self) -> bool:
        return self.ok and len(self.epistemic) == len(self.awareness)

    def to_dict(self) -> dict:
        return {
            "format_version": 1, "kind": "validation-report",
            "ok": self.ok, "standard": self.is_standard, "epistemic": self.is_epistemic,
            "agents": {a: {"awareness": self.awareness[a].to_dict(), "standard": self.standard[a].to_dict(),
                           **({"epistemic": self.epistemic[a].to_dict()} if a in self.epistemic else {})}
                       for a in sorted(self.awareness)},
        }


def validate_frame(frame: Frame, settings: Settings | None = None) -> FrameValidation:
    s = settings or Settings()
    aw, st, ep = {}, {}, {}
    for name in sorted(frame.agents):
        a = frame.agents[name]
        aw[name] = validate_awareness(frame, a, s)
        st[name] = is_standard(frame, a, s)
        if a.epistemic:
            ep[name] = validate_epistemic(frame, a, s)
    out = FrameValidation(aw, st, ep)
    frame.reports["validation"] = out
    return out
