"""The proper-filter frame of an epistemic awareness algebra.

Possibilities are the proper filters of the algebra ordered by reverse
inclusion.  In a finite Boolean algebra every filter is principal, so the
filter generated by ``c`` is stored as ``c`` itself; ``↑c ⊑ ↑d`` iff
``c ≤ d``.  The minimal possibilities are the atoms, which makes the event
mask of ``â`` equal to ``a`` and the hat map the identity on element codes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebras import EpistemicAwarenessAlgebra, eaa_isomorphic, frame_to_algebra, validate_eaa
from .boolean import FiniteBooleanAlgebra
from .events import Event, all_regular_open, event_from_set
from .frames import Correspondence, Frame, aware_op, believe_op, build_frame, know_op
from .poset import Poset
from .tables import BATCH_MAX_POSSIBILITIES, TABLE_LIMIT, family_tables
from .validation import FrameValidation, Settings, validate_frame

EXHAUSTIVE_CAP = 1 << 6
FILTER_ORACLE_CAP = 16
SAMPLED_EQUATIONS = 64


class RepresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Filter:
    members: frozenset[int]
    generator: int | None = None


def _is_proper_filter(b: FiniteBooleanAlgebra, s: frozenset[int]) -> bool:
    if not s or 0 in s:
        return False
    for x in s:
        for y in b.elements():
            if b.leq(x, y) and y not in s:
                return False
        for y in s:
            if x & y not in s:
                return False
    return True


def filters_by_subsets(b: FiniteBooleanAlgebra) -> list[frozenset[int]]:
    """Every proper filter by enumerating all subsets of the carrier (small algebras only)."""
    if b.size > FILTER_ORACLE_CAP:
        raise ValueError(f"subset enumeration is limited to {FILTER_ORACLE_CAP} elements")
    els = list(b.elements())
    up = [sum(1 << y for y in els if b.leq(x, y)) for x in els]
    out = []
    for s in range(1 << b.size):
        if not s or s & 1:  # empty, or contains 0
            continue
        if any(s >> x & 1 and up[x] & ~s for x in els):
            continue
        sset = frozenset(x for x in els if s >> x & 1)
        if all(x & y in sset for x in sset for y in sset):
            out.append(sset)
    return out


def principal_filter(b: FiniteBooleanAlgebra, c: int) -> frozenset[int]:
    return frozenset(x for x in b.elements() if b.leq(c, x))


def enumerate_proper_filters(b: FiniteBooleanAlgebra) -> list[Filter]:
    """The principal filters ↑c for c ≠ 0, in generator order.

    For algebras of at most 16 elements the list is compared with a
    subset enumeration to confirm that no other proper filters exist.
    """
    filters = [Filter(principal_filter(b, c), c) for c in range(1, b.size)]
    if b.size <= FILTER_ORACLE_CAP:
        literal = filters_by_subsets(b)
        if sorted(map(sorted, literal)) != sorted(sorted(f.members) for f in filters):
            raise AssertionError("principal filters do not exhaust the proper filters")
    return filters


# -- knowledge and belief on filters ---------------------------------------------

def _implicit_bounds(table: np.ndarray, n_atoms: int) -> np.ndarray:
    """``bound[c]``: the largest h with ↑h in the relation at ↑c.

    ↑h is related to ↑c iff every finite set S with c ≤ ⊔T[S] has h ≤ ⊔S.
    For an atom t this fails exactly when c ≤ J_t = ⊔{T[a] : a ≤ ¬t}, so
    the bound collects the atoms t with c ≰ J_t.
    """
    size = 1 << n_atoms
    top = size - 1
    els = np.arange(size)
    bound = np.zeros(size, dtype=np.int64)
    for j in range(n_atoms):
        t = 1 << j
        below_not_t = (els & t) == 0
        jt = int(np.bitwise_or.reduce(table[below_not_t])) if below_not_t.any() else 0
        ok = (els & ~jt & top) != 0  # c not below J_t
        bound |= np.where(ok, t, 0)
    return bound


def _implicit_by_tuples(table: np.ndarray, n_atoms: int) -> np.ndarray:
    """The same bound straight from the finite-join clause, over sets of up to ``n_atoms`` elements.

    A join of any family of elements is already the join of at most
    ``n_atoms`` of them, so larger sets add nothing.
    """
    size = 1 << n_atoms
    top = size - 1
    bound = np.full(size, top, dtype=np.int64)
    for r in range(0, n_atoms + 1):
        for s in itertools.combinations(range(size), r):
            js = 0
            jt = 0
            for a in s:
                js |= a
                jt |= int(table[a])
            for c in range(1, size):
                if c & ~jt == 0:
                    bound[c] &= js
    return bound


def build_filter_frame(alg: EpistemicAwarenessAlgebra, *, cross_check: bool | None = None) -> Frame:
    """The frame of proper filters with awareness, knowledge and belief read off the tables."""
    b = alg.base
    k = b.n_atoms
    size = b.size
    if size < 2:
        raise RepresentationError("the trivial algebra has no proper filters")
    gens = np.arange(1, size, dtype=np.int64)
    labels = [b.label(int(c)) for c in gens]
    leq = (gens[:, None] & ~gens[None, :]) == 0
    pos = {int(c): i for i, c in enumerate(gens)}
    covers = [(pos[int(c)], pos[int(c) | (1 << j)]) for c in gens for j in range(k) if not c >> j & 1]
    p = Poset(labels, leq, check=size <= 256, covers=covers)
    if tuple(p.minimals) != tuple(pos[1 << j] for j in range(k)):
        raise AssertionError("filter poset minimals are not the atoms in order")

    A, K, B = alg.A, alg.K, alg.B
    # awareness at ↑c: filters ↑a with Aa ∈ ↑c, i.e. c ≤ A[a]
    aware = (gens[:, None] & ~A[gens][None, :]) == 0
    if cross_check is None:
        cross_check = size <= FILTER_ORACLE_CAP
    rel = {}
    for key, table in (("know", K), ("believe", B)):
        bound = _implicit_bounds(table, k)
        if cross_check and not np.array_equal(bound[1:], _implicit_by_tuples(table, k)[1:]):
            raise AssertionError(f"closed-form and literal {key} clauses disagree")
        rel[key] = (gens[None, :] & ~bound[gens][:, None]) == 0
    tabs = {"aware": Correspondence(p, aware), "know": Correspondence(p, rel["know"]),
            "believe": Correspondence(p, rel["believe"])}
    frame = build_frame(p, all_regular_open(p), {alg.agent: tabs},
                        name=f"{alg.name}+filters" if alg.name else "filters")
    frame.reports["algebra"] = alg
    return frame


def hat_map(alg: EpistemicAwarenessAlgebra, a: int, frame: Frame | None = None) -> Event:
    """â: the filters containing ``a``, as an event of the filter frame."""
    frame = frame or build_filter_frame(alg)
    p = frame.poset
    members = [i for i, lab in enumerate(p.labels) if alg.base.leq(i + 1, a)]
    return event_from_set(p, members)


# -- verification --------------------------------------------------------------

@dataclass
class Check:
    name: str
    holds: bool
    mode: str = "exhaustive"
    witness: dict | None = None
    note: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "holds": self.holds, "mode": self.mode, "witness": self.witness}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class RepresentationReport:
    algebra_ok: bool
    validation: FrameValidation | None
    checks: list[Check] = field(default_factory=list)
    isomorphism: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return self.algebra_ok and self.validation is not None and self.validation.ok \
            and self.validation.is_standard and all(c.holds for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "algebra_ok": self.algebra_ok,
                "validation": self.validation.to_dict() if self.validation else None,
                "checks": [c.to_dict() for c in self.checks]}


def _elements(alg, seed: int, count: int):
    if alg.size <= EXHAUSTIVE_CAP:
        return list(range(alg.size)), "exhaustive"
    rng = np.random.default_rng(seed)
    return sorted(set(rng.integers(0, alg.size, size=count).tolist()) | {0, alg.top}), "sampled"


def verify_representation(alg: EpistemicAwarenessAlgebra, seed: int = 0,
                          settings: Settings | None = None) -> RepresentationReport:
    """Build the filter frame, validate it and check that the hat map is an isomorphism."""
    axioms = validate_eaa(alg, seed=seed)
    if not axioms.ok:
        return RepresentationReport(False, None, [Check("algebra_axioms", False, witness={"failed": axioms.failed()})])
    frame = build_filter_frame(alg)
    validation = validate_frame(frame, settings or Settings(seed=seed))
    rep = RepresentationReport(True, validation)
    p = frame.poset
    b = alg.base
    els, mode = _elements(alg, seed, SAMPLED_EQUATIONS)
    note = "" if mode == "exhaustive" else f"{len(els)} seeded elements (seed {seed}); exhaustive cap {EXHAUSTIVE_CAP}"
    hats = {a: hat_map(alg, a, frame) for a in els}

    bad = [a for a in els if hats[a].mask != a]
    rep.checks.append(Check("hat_bijection", not bad and frame.events.size == alg.size, mode,
                            {"a": b.label(bad[0])} if bad else None,
                            note or "hat(a) has minimal mask a; the family has as many events as the algebra"))

    def first_bad(pred):
        for a in els:
            for c in els:
                if not pred(a, c):
                    return {"a": b.label(a), "b": b.label(c)}
        return None

    w = next(({"a": b.label(a)} for a in els
              if hats[a].members and p.maximal_elements(hats[a].members) != {a - 1}), None)
    rep.checks.append(Check("hat_maximum", w is None, mode, w, note))
    rep.checks.append(Check("poset_maximum", p.maximum == alg.top - 1, "exhaustive"))
    w = next(({"a": b.label(a)} for a in els
              if (b.neg(a) in hats and hats[b.neg(a)].members != p.interior(p.all - hats[a].members))), None)
    rep.checks.append(Check("hat_negation", w is None, mode, w, note))
    w = first_bad(lambda a, c: (a & c) not in hats or hats[a & c].members == hats[a].members & hats[c].members)
    rep.checks.append(Check("hat_meet", w is None, mode, w, note))

    # operators: frame operator on â against the hat of the table value
    ag = frame.agents[alg.agent]
    if frame.events.size <= TABLE_LIMIT and p.n <= BATCH_MAX_POSSIBILITIES:
        tabs = family_tables(frame, ag)
        got = {key: tabs.masks[key] for key in ("A", "K", "B")}
        for key in ("A", "K", "B"):
            want = alg.op(key)
            idx = np.asarray(els)
            diff = np.flatnonzero(got[key][idx].astype(np.int64) != want[idx])
            wit = {"a": b.label(int(idx[diff[0]]))} if len(diff) else None
            rep.checks.append(Check(f"hat_{key}", not len(diff), mode, wit, note))
        found = eaa_isomorphic(frame_to_algebra(frame, alg.agent), alg, prefer=np.arange(alg.size))
        same = found is not None and np.array_equal(found, np.arange(alg.size))
        rep.isomorphism = found
        rep.checks.append(Check("round_trip", same, "exhaustive", None if same else {"bijection": found is not None},
                                "the isomorphism found is the hat map" if same else ""))
    else:
        ops = {"A": aware_op, "K": know_op, "B": believe_op}
        for key, op in ops.items():
            want = alg.op(key)
            wit = next(({"a": b.label(a)} for a in els if op(frame, ag, hats[a]).mask != int(want[a])), None)
            rep.checks.append(Check(f"hat_{key}", wit is None, mode, wit, note))
    return rep
