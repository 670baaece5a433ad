"""Audits of awareness structures against axiom systems.

A :class:`View` exposes a structure of events with U, K, ¬ (and A, B when
available) over element indices, whether the structure is a frame (its
event family and operators) or an algebra (its tables).  Every check in
this module is written once against that interface.

Laws are predicates on arrays of element indices.  Unary laws run over
every event up to ``UNARY_LIMIT`` events, binary laws over every pair up to
``BINARY_LIMIT`` events; beyond that they run over seeded samples and the
verdict says so.
"""
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .algebras import EpistemicAwarenessAlgebra
from .frames import Frame, FrameError, _agent, aware_op, believe_op, know_op
from .tables import BATCH_MAX_POSSIBILITIES, TABLE_LIMIT, family_tables
from .validation import describe_event

UNARY_LIMIT = 1 << 20
BINARY_LIMIT = 1 << 12
DEFAULT_SAMPLES = 100_000
CHUNK = 1 << 16

DEFAULT_REQUIRED = ("au_introspection", "ku_introspection", "necessitation", "double_negation",
                    "nontrivial_plausibility")
UNWEAKENED_DLR = ("au_introspection", "plausibility", "ku_introspection", "necessitation", "double_negation")


# -- views -------------------------------------------------------------

class View:
    """Events as element indices 0..size-1 with bitwise Boolean structure (0 is the minimum)."""

    name = ""
    agent = ""

    def __init__(self, size: int):
        self.size = size
        self.top = size - 1

    def has(self, key: str) -> bool:
        raise NotImplementedError

    def apply(self, key: str, xs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self, x: int):
        raise NotImplementedError

    def separating(self, x: int, y: int) -> str | None:
        """A possibility in ``x`` but not in ``y``, when the structure has possibilities."""
        return None

    @property
    def exhaustible(self) -> bool:
        return self.size <= UNARY_LIMIT

    # shorthands used by the law definitions
    def neg(self, xs):
        return self.top ^ xs

    def A(self, xs):
        return self.apply("A", xs)

    def U(self, xs):
        return self.top ^ self.apply("A", xs)

    def K(self, xs):
        return self.apply("K", xs)

    def B(self, xs):
        return self.apply("B", xs)


class TableView(View):
    def __init__(self, tables: dict[str, np.ndarray], describe: Callable[[int], object],
                 separating: Callable[[int, int], str | None] | None = None, name: str = "", agent: str = ""):
        size = len(next(iter(tables.values())))
        super().__init__(size)
        self.tables = {k: np.asarray(v, dtype=np.int64) for k, v in tables.items()}
        self._describe = describe
        self._separating = separating
        self.name = name
        self.agent = agent

    def has(self, key: str) -> bool:
        return key in self.tables

    def apply(self, key, xs):
        return self.tables[key][np.asarray(xs, dtype=np.int64)]

    def describe(self, x):
        return self._describe(int(x))

    def separating(self, x, y):
        return self._separating(int(x), int(y)) if self._separating else None


class LazyFrameView(View):
    """Evaluates frame operators per event on demand, for frames too large to tabulate."""

    def __init__(self, frame: Frame, agent):
        self.frame = frame
        self.agent_obj = _agent(frame, agent)
        super().__init__(frame.events.size)
        self.name = frame.name
        self.agent = self.agent_obj.name
        self._cache: dict[tuple[str, int], int] = {}

    @property
    def exhaustible(self) -> bool:
        return self.size <= 1 << 12

    def has(self, key):
        return key == "A" or self.agent_obj.epistemic

    def apply(self, key, xs):
        fam = self.frame.events
        op = {"A": aware_op, "K": know_op, "B": believe_op}[key]
        out = np.empty(len(xs), dtype=np.int64)
        for i, x in enumerate(np.asarray(xs, dtype=np.int64)):
            k = (key, int(x))
            if k not in self._cache:
                self._cache[k] = fam.element_of(op(self.frame, self.agent_obj, fam.event(int(x))).mask)
            out[i] = self._cache[k]
        return out

    def describe(self, x):
        return describe_event(self.frame.poset, self.frame.events.mask_of(int(x)))

    def separating(self, x, y):
        return _separating(self.frame, int(x), int(y))


def _separating(frame: Frame, x: int, y: int) -> str | None:
    p = frame.poset
    mx, my = frame.events.mask_of(x), frame.events.mask_of(y)
    for w in range(p.n):
        bm = p.below_mask[w]
        if bm & ~mx == 0 and bm & ~my != 0:
            return p.labels[w]
    return None


def frame_view(frame: Frame, agent=None) -> View:
    a = _agent(frame, agent)
    fam = frame.events
    p = frame.poset
    if fam.size > TABLE_LIMIT or p.n > BATCH_MAX_POSSIBILITIES or p.below_u64 is None:
        return LazyFrameView(frame, a)
    tabs = family_tables(frame, a)
    keys = ("A", "K", "B") if a.epistemic else ("A",)
    tables = {}
    for key in keys:
        els = fam.masks_to_elements(tabs.masks[key])
        if (~tabs.regular[key]).any() or (els < 0).any():
            raise FrameError(f"{key} does not map the family into itself; validate the frame first")
        tables[key] = els
    return TableView(tables, lambda x: describe_event(p, fam.mask_of(x)), lambda x, y: _separating(frame, x, y),
                     name=frame.name, agent=a.name)


def algebra_view(alg: EpistemicAwarenessAlgebra) -> View:
    return TableView({"A": alg.A, "K": alg.K, "B": alg.B}, lambda x: [alg.base.label(x)],
                     name=alg.name, agent=alg.agent)


def as_view(obj, agent=None) -> View:
    if isinstance(obj, View):
        return obj
    if isinstance(obj, Frame):
        return frame_view(obj, agent)
    if isinstance(obj, EpistemicAwarenessAlgebra):
        return algebra_view(obj)
    raise TypeError(f"cannot audit {type(obj).__name__}")


# -- laws ---------------------------------------------------------------

def _le(x, y):
    return (x & ~y) == 0


@dataclass
class Law:
    """``ok(view, xs[, ys])`` gives a boolean per event (or pair); ``gap`` names the sides of the inclusion."""

    id: str
    title: str
    arity: int
    ok: Callable
    gap: Callable | None = None
    needs: tuple[str, ...] = ("A", "K")


def _unary(id, title, ok, gap=None, needs=("A", "K")):
    return Law(id, title, 1, ok, gap, needs)


DLR_LAWS = [
    _unary("au_introspection", "AU Introspection", lambda v, x: _le(v.U(x), v.U(v.U(x))),
           lambda v, x: (v.U(x), v.U(v.U(x)))),
    _unary("plausibility", "Plausibility", lambda v, x: _le(v.U(x), v.neg(v.K(x)) & v.neg(v.K(v.neg(v.K(x))))),
           lambda v, x: (v.U(x), v.neg(v.K(x)) & v.neg(v.K(v.neg(v.K(x)))))),
    _unary("ku_introspection", "KU Introspection", lambda v, x: v.K(v.U(x)) == 0,
           lambda v, x: (v.K(v.U(x)), np.zeros_like(x))),
    Law("necessitation", "Necessitation", 0, lambda v: v.K(np.array([v.top]))[0] == v.top,
        lambda v: (np.array([v.top]), v.K(np.array([v.top])))),
    Law("double_negation", "Double Negation", 0, lambda v: v.neg(v.neg(0)) == 0, needs=()),
    _unary("nontrivial_plausibility", "Nontrivial Plausibility",
           lambda v, x: _le(v.U(x), v.neg(v.K(x))) & ((v.neg(v.K(x)) == v.top) | _le(v.U(x), v.neg(v.K(v.neg(v.K(x)))))),
           lambda v, x: (v.U(x), v.neg(v.K(x)) & np.where(v.neg(v.K(x)) == v.top, v.top, v.neg(v.K(v.neg(v.K(x))))))),
    Law("monotonicity", "Monotonicity (informational)", 2, lambda v, x, y: _le(v.K(x), v.K(x | y)),
        lambda v, x, y: (v.K(x), v.K(x | y))),
]

CONVERSE_LAWS = [
    _unary("converse_plausibility", "Converse Plausibility",
           lambda v, x: _le(v.neg(v.K(x)) & v.neg(v.K(v.neg(v.K(x)))), v.U(x)),
           lambda v, x: (v.neg(v.K(x)) & v.neg(v.K(v.neg(v.K(x)))), v.U(x))),
    _unary("noncontradictory_belief_knowledge", "Noncontradictory Belief and Knowledge",
           lambda v, x: _le(v.B(x), v.neg(v.K(v.neg(x)))), lambda v, x: (v.B(x), v.neg(v.K(v.neg(x)))),
           needs=("A", "K", "B")),
    _unary("belief_requires_awareness", "Belief Requires Awareness", lambda v, x: (v.B(x) & v.U(x)) == 0,
           lambda v, x: (v.B(x) & v.U(x), np.zeros_like(x)), needs=("A", "K", "B")),
    _unary("believed_knowledge_implies_unawareness", "B(K(E)) and not K(E) implies U(E)",
           lambda v, x: _le(v.B(v.K(x)) & v.neg(v.K(x)), v.U(x)),
           lambda v, x: (v.B(v.K(x)) & v.neg(v.K(x)), v.U(x)), needs=("A", "K", "B")),
    _unary("no_overconfidence", "No overconfidence: B(E), B(K(E)) and not K(E) never together",
           lambda v, x: (v.B(x) & v.B(v.K(x)) & v.neg(v.K(x))) == 0,
           lambda v, x: (v.B(x) & v.B(v.K(x)) & v.neg(v.K(x)), np.zeros_like(x)), needs=("A", "K", "B")),
]


def _fitch_event(v: View, x):
    return x & v.A(x) & v.neg(v.K(x))


FITCH_LAWS = [
    _unary("fitch_unknowable", "K(E') = 0 for E' = E, A(E), not K(E)", lambda v, x: v.K(_fitch_event(v, x)) == 0,
           lambda v, x: (v.K(_fitch_event(v, x)), np.zeros_like(x))),
    _unary("fitch_aware", "U(E') = 0 for E' = E, A(E), not K(E)", lambda v, x: v.U(_fitch_event(v, x)) == 0,
           lambda v, x: (v.U(_fitch_event(v, x)), np.zeros_like(x))),
]


def _moore_event(v: View, x):
    return x & v.neg(v.B(x))


MOORE_LAWS = [
    _unary("no_moorean_beliefs", "No Moorean Beliefs", lambda v, x: v.B(_moore_event(v, x)) == 0,
           lambda v, x: (v.B(_moore_event(v, x)), np.zeros_like(x)), needs=("A", "B")),
    Law("belief_necessitation", "Necessitation for B", 0, lambda v: v.B(np.array([v.top]))[0] == v.top,
        lambda v: (np.array([v.top]), v.B(np.array([v.top]))), needs=("A", "B")),
    _unary("belief_plausibility_second_half", "U(E) within not B not B(E)",
           lambda v, x: _le(v.U(x), v.neg(v.B(v.neg(v.B(x))))), lambda v, x: (v.U(x), v.neg(v.B(v.neg(v.B(x))))),
           needs=("A", "B")),
    _unary("moore_aware", "U(E and not B(E)) = 0", lambda v, x: v.U(_moore_event(v, x)) == 0,
           lambda v, x: (v.U(_moore_event(v, x)), np.zeros_like(x)), needs=("A", "B")),
]

HMS_LAWS = [
    _unary("ak_self_reflection", "Nontrivial AK-Self Reflection", lambda v, x: (v.K(x) == 0) | (v.A(v.K(x)) == v.A(x)),
           lambda v, x: (v.A(v.K(x)) ^ v.A(x), np.zeros_like(x))),
    _unary("aa_self_reflection", "AA-Self Reflection", lambda v, x: v.A(v.A(x)) == v.A(x),
           lambda v, x: (v.A(v.A(x)) ^ v.A(x), np.zeros_like(x)), needs=("A",)),
    _unary("a_introspection", "A-Introspection", lambda v, x: v.K(v.A(x)) == v.A(x),
           lambda v, x: (v.A(x), v.K(v.A(x)))),
]

STALNAKER_LAWS = [
    _unary("k_positive_introspection", "Positive Introspection for K", lambda v, x: _le(v.K(x), v.K(v.K(x))),
           lambda v, x: (v.K(x), v.K(v.K(x)))),
    _unary("b_positive_introspection", "Positive Introspection for B", lambda v, x: _le(v.B(x), v.K(v.B(x))),
           lambda v, x: (v.B(x), v.K(v.B(x))), needs=("A", "K", "B")),
    _unary("weak_negative_introspection_belief", "Weak Negative Introspection for Belief",
           lambda v, x: _le(v.neg(v.B(x)) & v.A(v.neg(v.B(x))), v.K(v.neg(v.B(x)))),
           lambda v, x: (v.neg(v.B(x)) & v.A(v.neg(v.B(x))), v.K(v.neg(v.B(x)))), needs=("A", "K", "B")),
    _unary("strong_belief", "Strong Belief", lambda v, x: _le(v.B(x), v.B(v.K(x))),
           lambda v, x: (v.B(x), v.B(v.K(x))), needs=("A", "K", "B")),
]

SUITES = {"dlr": DLR_LAWS, "converse": CONVERSE_LAWS, "fitch": FITCH_LAWS, "moore": MOORE_LAWS,
          "hms": HMS_LAWS, "stalnaker": STALNAKER_LAWS}
SUITE_ORDER = ("dlr", "converse", "fitch", "moore", "hms", "stalnaker")


# -- verdicts --------------------------------------------------------------

@dataclass
class Verdict:
    id: str
    title: str
    suite: str
    status: str  # holds | fails | sampled-holds | skipped
    mode: str
    witness: dict | None = None
    seed: int | None = None
    n: int | None = None
    required: bool = False
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status in ("holds", "sampled-holds")

    @property
    def fails(self) -> bool:
        return self.status == "fails"

    def to_dict(self) -> dict:
        d = {"id": self.id, "title": self.title, "suite": self.suite, "status": self.status, "mode": self.mode,
             "required": self.required, "witness": self.witness}
        if self.seed is not None:
            d["seed"], d["n"] = self.seed, self.n
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class AuditReport:
    structure: str
    agent: str
    events: int
    mode: str
    verdicts: list[Verdict] = field(default_factory=list)
    conclusions: dict = field(default_factory=dict)
    required: tuple[str, ...] = DEFAULT_REQUIRED

    def __getitem__(self, id: str) -> Verdict:
        for v in self.verdicts:
            if v.id == id:
                return v
        raise KeyError(id)

    def __contains__(self, id: str) -> bool:
        return any(v.id == id for v in self.verdicts)

    @property
    def required_ok(self) -> bool:
        return not any(v.fails for v in self.verdicts if v.id in self.required)

    def failed(self) -> list[str]:
        return [v.id for v in self.verdicts if v.fails]

    def to_dict(self) -> dict:
        return {"format_version": 1, "kind": "audit-report", "structure": self.structure, "agent": self.agent,
                "events": self.events, "mode": self.mode, "required": list(self.required),
                "required_ok": self.required_ok, "verdicts": [v.to_dict() for v in self.verdicts],
                "conclusions": self.conclusions}


def _minimize(view: View, law: Law, xs: list[int]) -> list[int]:
    """Greedily clear bits of the witness event(s) while the law keeps failing."""
    xs = list(xs)

    def fails(cand):
        args = [np.array([c], dtype=np.int64) for c in cand]
        return not bool(law.ok(view, *args)[0])

    for i in range(len(xs)):
        bit = 1
        while bit <= xs[i]:
            if xs[i] & bit:
                trial = xs.copy()
                trial[i] = xs[i] & ~bit
                if fails(trial):
                    xs = trial
            bit <<= 1
    return xs


def _witness(view: View, law: Law, xs: list[int]) -> dict:
    xs = _minimize(view, law, xs)
    w: dict = {"events": [view.describe(x) for x in xs]}
    if law.gap is not None:
        lhs, rhs = law.gap(view, *[np.array([x], dtype=np.int64) for x in xs])
        poss = view.separating(int(lhs[0]), int(rhs[0]))
        if poss is not None:
            w["possibility"] = poss
    return w


def _first_failure(view, law, batches):
    for args in batches:
        ok = np.asarray(law.ok(view, *args), dtype=bool)
        if not ok.all():
            i = int(np.flatnonzero(~ok)[0])
            return [int(a[i]) for a in args]
    return None


def run_law(view: View, law: Law, suite: str, mode: str = "exhaustive", seed: int = 0,
            samples: int = DEFAULT_SAMPLES, required: tuple[str, ...] = DEFAULT_REQUIRED) -> Verdict:
    req = law.id in required
    if any(not view.has(k) for k in law.needs):
        return Verdict(law.id, law.title, suite, "skipped", "n/a", required=req,
                       note="structure lacks " + "/".join(k for k in law.needs if not view.has(k)))
    if law.arity == 0:
        ok = bool(law.ok(view))
        wit = None
        if not ok:
            wit = {"events": [view.describe(view.top if law.id != "double_negation" else 0)]}
            if law.gap is not None:
                lhs, rhs = law.gap(view)
                poss = view.separating(int(lhs[0]), int(rhs[0]))
                if poss is not None:
                    wit["possibility"] = poss
        return Verdict(law.id, law.title, suite, "holds" if ok else "fails", "exhaustive", wit, required=req)
    rng = np.random.default_rng(seed)
    limit = UNARY_LIMIT if law.arity == 1 else BINARY_LIMIT
    exhaustive = mode == "exhaustive" and view.size <= limit and (law.arity == 2 or view.exhaustible)
    if exhaustive:
        if law.arity == 1:
            batches = ((np.arange(lo, min(lo + CHUNK, view.size), dtype=np.int64),)
                       for lo in range(0, view.size, CHUNK))
        else:
            ys = np.arange(view.size, dtype=np.int64)
            batches = ((np.full(view.size, x, dtype=np.int64), ys) for x in range(view.size))
        n = None
    else:
        if isinstance(view, LazyFrameView):
            samples = min(samples, 64)
        args = [rng.integers(0, view.size, size=samples, dtype=np.int64) for _ in range(law.arity)]
        batches = [args]
        n = samples
    found = _first_failure(view, law, batches)
    m = "exhaustive" if exhaustive else "sampled"
    if found is not None:
        return Verdict(law.id, law.title, suite, "fails", m, _witness(view, law, found),
                       None if exhaustive else seed, n, req)
    if exhaustive:
        return Verdict(law.id, law.title, suite, "holds", m, required=req)
    return Verdict(law.id, law.title, suite, "sampled-holds", m, seed=seed, n=n, required=req)


# -- suites ------------------------------------------------------------------

def _report(view: View, mode: str, required) -> AuditReport:
    return AuditReport(view.name, view.agent, view.size, mode, required=tuple(required))


def _run(view, suite, mode, seed, samples, required, report):
    for law in SUITES[suite]:
        report.verdicts.append(run_law(view, law, suite, mode, seed, samples, tuple(required)))


def check_dlr(obj, mode: str = "exhaustive", seed: int = 0, samples: int = DEFAULT_SAMPLES,
              required=DEFAULT_REQUIRED, agent=None) -> AuditReport:
    view = as_view(obj, agent)
    rep = _report(view, mode, required)
    _run(view, "dlr", mode, seed, samples, required, rep)
    rep.conclusions["dekel"] = check_dekel_consistency(rep, view)
    return rep


def nontrivial_unawareness(view: View, seed: int = 0, samples: int = DEFAULT_SAMPLES) -> dict:
    """Search for an event with U(E) ≠ 0 (all events when feasible)."""
    if view.exhaustible:
        for lo in range(0, view.size, CHUNK):
            xs = np.arange(lo, min(lo + CHUNK, view.size), dtype=np.int64)
            u = view.U(xs)
            hit = np.flatnonzero(u != 0)
            if len(hit):
                x = int(xs[hit[0]])
                return {"found": True, "searched": "exhaustive", "event": view.describe(x),
                        "unaware_at": view.describe(int(u[hit[0]]))}
        return {"found": False, "searched": "exhaustive"}
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, view.size, size=min(samples, 64) if isinstance(view, LazyFrameView) else samples,
                      dtype=np.int64)
    u = view.U(xs)
    hit = np.flatnonzero(u != 0)
    if len(hit):
        return {"found": True, "searched": "sampled", "event": view.describe(int(xs[hit[0]])),
                "unaware_at": view.describe(int(u[hit[0]]))}
    return {"found": False, "searched": "sampled"}


def check_dekel_consistency(report: AuditReport, view: View | None = None, unawareness: dict | None = None) -> dict:
    """Nontrivial unawareness must come with a failed unweakened DLR axiom.

    ``unawareness`` may be given directly (for example to test corrupted
    reports); otherwise it is computed from ``view``.
    """
    if unawareness is None:
        if view is None:
            raise ValueError("need a view or an unawareness record")
        unawareness = nontrivial_unawareness(view)
    failing = [i for i in UNWEAKENED_DLR if i in report and report[i].fails]
    unchecked = [i for i in UNWEAKENED_DLR if i not in report or report[i].status == "skipped"]
    if unawareness["found"]:
        consistent = bool(failing)
    else:
        consistent = True
    out = {"nontrivial_unawareness": unawareness["found"], "failing_dlr_axioms": failing,
           "consistent": consistent, "unawareness": unawareness}
    if unchecked:
        out["unchecked"] = unchecked
    if not consistent:
        out["flag"] = "inconsistent verdicts: unawareness is nontrivial yet every unweakened axiom holds"
    return out


def overconfidence(view: View, limit: int = UNARY_LIMIT) -> dict:
    """Events E with states in B(E), B(K(E)) and not K(E)."""
    if not (view.has("B") and view.exhaustible and view.size <= limit):
        return {"searched": False}
    count, example = 0, None
    for lo in range(0, view.size, CHUNK):
        xs = np.arange(lo, min(lo + CHUNK, view.size), dtype=np.int64)
        s = view.B(xs) & view.B(view.K(xs)) & view.neg(view.K(xs))
        hit = np.flatnonzero(s)
        count += len(hit)
        if example is None and len(hit):
            x = int(xs[hit[0]])
            example = {"event": view.describe(x), "states": view.describe(int(s[hit[0]]))}
    return {"searched": True, "events": count, "example": example}


def check_converse_plausibility(obj, mode="exhaustive", seed=0, samples=DEFAULT_SAMPLES,
                                required=DEFAULT_REQUIRED, agent=None) -> AuditReport:
    view = as_view(obj, agent)
    rep = _report(view, mode, required)
    _run(view, "converse", mode, seed, samples, required, rep)
    rep.conclusions["overconfidence"] = overconfidence(view)
    return rep


@dataclass
class FitchRecord:
    event: list
    reduced: list
    known: list
    unaware: list
    live_counterexample: bool

    def to_dict(self) -> dict:
        return {"event": self.event, "reduced": self.reduced, "K_reduced": self.known, "U_reduced": self.unaware,
                "live_counterexample": self.live_counterexample}


def fitch_record(obj, e: int, agent=None) -> tuple[FitchRecord, int, int, int]:
    """E' = E ⊓ A(E) ⊓ ¬K(E) with K(E') and U(E'); also returns the raw element indices."""
    view = as_view(obj, agent)
    x = np.array([e], dtype=np.int64)
    red = _fitch_event(view, x)
    k, u = view.K(red), view.U(red)
    rec = FitchRecord(view.describe(e), view.describe(int(red[0])), view.describe(int(k[0])),
                      view.describe(int(u[0])), bool(u[0] != 0))
    return rec, int(red[0]), int(k[0]), int(u[0])


def check_fitch(obj, e: int | None = None, mode="exhaustive", seed=0, samples=DEFAULT_SAMPLES,
                required=DEFAULT_REQUIRED, agent=None):
    """With ``e`` return the record for that event; otherwise audit the Fitch laws over all events."""
    if e is not None:
        return fitch_record(obj, e, agent)[0]
    view = as_view(obj, agent)
    rep = _report(view, mode, required)
    _run(view, "fitch", mode, seed, samples, required, rep)
    v = rep["fitch_aware"]
    rep.conclusions["fitch"] = {"second_half_plausibility_refuted": v.fails,
                                "witness": v.witness}
    return rep


def check_moore(obj, mode="exhaustive", seed=0, samples=DEFAULT_SAMPLES, required=DEFAULT_REQUIRED,
                agent=None) -> AuditReport:
    view = as_view(obj, agent)
    rep = _report(view, mode, required)
    _run(view, "moore", mode, seed, samples, required, rep)
    v = rep["moore_aware"]
    rep.conclusions["moore"] = {"belief_plausibility_refuted": v.fails, "witness": v.witness}
    return rep


def check_hms_principles(obj, mode="exhaustive", seed=0, samples=DEFAULT_SAMPLES, required=DEFAULT_REQUIRED,
                         agent=None) -> AuditReport:
    view = as_view(obj, agent)
    rep = _report(view, mode, required)
    _run(view, "hms", mode, seed, samples, required, rep)
    return rep


def check_stalnaker(obj, mode="exhaustive", seed=0, samples=DEFAULT_SAMPLES, required=DEFAULT_REQUIRED,
                    agent=None) -> AuditReport:
    view = as_view(obj, agent)
    rep = _report(view, mode, required)
    _run(view, "stalnaker", mode, seed, samples, required, rep)
    return rep


def audit(obj, suites=("all",), mode="exhaustive", seed=0, samples=DEFAULT_SAMPLES,
          required=DEFAULT_REQUIRED, agent=None) -> AuditReport:
    """Run several suites into one report, in a fixed order."""
    view = as_view(obj, agent)
    chosen = SUITE_ORDER if "all" in suites else tuple(s for s in SUITE_ORDER if s in suites)
    unknown = [s for s in suites if s != "all" and s not in SUITES]
    if unknown:
        raise ValueError("unknown suite(s): " + ", ".join(unknown))
    rep = _report(view, mode, required)
    for suite in chosen:
        _run(view, suite, mode, seed, samples, required, rep)
    if "dlr" in chosen:
        rep.conclusions["dekel"] = check_dekel_consistency(rep, view)
    if "converse" in chosen:
        rep.conclusions["overconfidence"] = overconfidence(view)
    if "fitch" in chosen:
        v = rep["fitch_aware"]
        rep.conclusions["fitch"] = {"second_half_plausibility_refuted": v.fails, "witness": v.witness}
    if "moore" in chosen:
        v = rep["moore_aware"]
        rep.conclusions["moore"] = {"belief_plausibility_refuted": v.fails, "witness": v.witness}
    return rep


# -- introspection from first-order conditions ---------------------------------------

@dataclass
class IntrospectionRecord:
    condition: bool
    principle: bool
    k_condition: bool | None
    k_principle: bool | None
    mode: str

    @property
    def sufficiency_respected(self) -> bool:
        ok = not (self.condition and not self.principle)
        if self.k_condition is not None:
            ok = ok and not (self.k_condition and not self.k_principle)
        return ok

    def to_dict(self) -> dict:
        return {"condition": self.condition, "principle_A_in_AA": self.principle,
                "k_condition": self.k_condition, "principle_A_in_KA": self.k_principle, "mode": self.mode,
                "sufficiency_respected": self.sufficiency_respected}


def _first_order(frame: Frame, a, targets_of) -> bool:
    p = frame.poset
    aw = a.aware.matrix
    full = aw.all(axis=1)
    rows = [aw[w].tobytes() for w in range(p.n)]
    below_rows = [{rows[u] for u in p.below[w]} for w in range(p.n)]
    for w in range(p.n):
        targets = targets_of(w)
        if targets is None:
            continue
        for v in targets:
            for v2 in p.below[int(v)]:
                if not full[v2] and rows[v2] not in below_rows[w]:
                    return False
    return True


def check_introspection_sufficient(frame: Frame, agent=None, mode="exhaustive", seed=0,
                                   samples=DEFAULT_SAMPLES) -> IntrospectionRecord:
    """First-order conditions on awareness and the introspection principles they guarantee.

    Only the direction condition ⇒ principle is asserted; a frame may
    satisfy a principle without the condition.
    """
    a = _agent(frame, agent)
    aw = a.aware.matrix
    cond = _first_order(frame, a, lambda w: None if aw[w].all() else np.flatnonzero(aw[w]))
    view = as_view(frame, a)
    aa = _unary("a_in_aa", "A(E) within A(A(E))", lambda v, x: _le(v.A(x), v.A(v.A(x))), needs=("A",))
    principle = run_law(view, aa, "introspection", mode, seed, samples).holds
    k_cond = k_principle = None
    if a.epistemic:
        kn = a.know.matrix
        k_cond = cond and _first_order(frame, a, lambda w: np.flatnonzero(kn[w]))
        ka = _unary("a_in_ka", "A(E) within K(A(E))", lambda v, x: _le(v.A(x), v.K(v.A(x))))
        k_principle = run_law(view, ka, "introspection", mode, seed, samples).holds
    rec = IntrospectionRecord(cond, principle, k_cond, k_principle,
                              "exhaustive" if view.exhaustible and mode == "exhaustive" else "sampled")
    if not rec.sufficiency_respected:
        raise AssertionError("first-order condition holds but the introspection principle fails")
    return rec
