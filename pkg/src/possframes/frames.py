"""Possibility frames with per-agent awareness, knowledge and belief.

Correspondences are boolean matrices: ``matrix[w, v]`` says ``v`` is in the
agent's set at ``w``.  Operators return :class:`Event` values; the ``*_vec``
helpers return raw membership vectors and are what the validators use, since
on a broken frame the result need not be regular open.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .events import (Event, EventFamily, all_regular_open, event_from_set, generate_family, is_ro_vector,
                     mask_of_vector)
from .poset import Poset, Ref, separative_quotient


class FrameError(ValueError):
    pass


class Correspondence:
    """A map from possibilities to sets of possibilities."""

    def __init__(self, poset: Poset, matrix):
        m = np.array(matrix, dtype=bool)
        if m.shape != (poset.n, poset.n):
            raise FrameError(f"correspondence has shape {m.shape}, expected {(poset.n, poset.n)}")
        m.setflags(write=False)
        self.poset = poset
        self.matrix = m

    @classmethod
    def from_mapping(cls, poset: Poset, mapping: Mapping[Ref, Iterable[Ref]]) -> "Correspondence":
        m = np.zeros((poset.n, poset.n), dtype=bool)
        seen = set()
        for w, vs in mapping.items():
            i = poset.id(w)
            seen.add(i)
            for v in vs:
                m[i, poset.id(v)] = True
        missing = [poset.labels[i] for i in range(poset.n) if i not in seen]
        if missing:
            raise FrameError("correspondence has no entry for " + ", ".join(missing))
        return cls(poset, m)

    def of(self, w: Ref) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.matrix[self.poset.id(w)]).tolist())

    def to_mapping(self) -> dict[str, list[str]]:
        p = self.poset
        return {p.labels[i]: p.names(np.flatnonzero(self.matrix[i]).tolist()) for i in range(p.n)}

    def __eq__(self, other) -> bool:
        return isinstance(other, Correspondence) and np.array_equal(self.matrix, other.matrix)

    __hash__ = None


@dataclass
class Agent:
    name: str
    aware: Correspondence
    know: Correspondence | None = None
    believe: Correspondence | None = None

    @property
    def epistemic(self) -> bool:
        return self.know is not None and self.believe is not None


@dataclass(eq=False)
class Frame:
    poset: Poset
    events: EventFamily
    agents: dict[str, Agent]
    named: dict[str, Event] = field(default_factory=dict)
    groups: dict[str, frozenset[int]] = field(default_factory=dict)
    strict: bool = False
    name: str = ""
    reports: dict = field(default_factory=dict)

    def __post_init__(self):
        self._cache: dict = {}
        if self.events.poset is not self.poset:
            raise FrameError("event family belongs to a different poset")
        for a in self.agents.values():
            for c in (a.aware, a.know, a.believe):
                if c is not None and c.poset is not self.poset:
                    raise FrameError(f"correspondence of agent {a.name!r} belongs to a different poset")

    def agent(self, name: str | None = None) -> Agent:
        if name is None:
            if len(self.agents) != 1:
                raise FrameError("frame has several agents; name one")
            return next(iter(self.agents.values()))
        try:
            return self.agents[name]
        except KeyError:
            raise FrameError(f"unknown agent {name!r}") from None

    def event(self, name: str) -> Event:
        try:
            return self.named[name]
        except KeyError:
            raise FrameError(f"unknown event {name!r}") from None

    def group(self, name: str) -> frozenset[int]:
        return self.groups[name]

    @property
    def top(self) -> Event:
        return Event(self.poset, self.poset.full_mask)

    @property
    def bottom(self) -> Event:
        return Event(self.poset, 0)

    def check_argument(self, e: Event) -> None:
        if e.poset is not self.poset:
            raise FrameError("event belongs to a different poset")
        if self.strict and not self.events.contains(e):
            raise FrameError(f"{e!r} is not in the frame's event family")

    # convenience wrappers
    def A(self, agent, e):
        return aware_op(self, agent, e)

    def U(self, agent, e):
        return unaware_op(self, agent, e)

    def K(self, agent, e):
        return know_op(self, agent, e)

    def B(self, agent, e):
        return believe_op(self, agent, e)

    def L(self, agent, e, which="know"):
        return implicit_op(self, agent, e, which)


# -- raw machinery --------------------------------------------------------

def maxima_matrix(p: Poset, inside: np.ndarray) -> np.ndarray:
    """``T[x, v]`` is True when ``x`` is a maximal element of ``E ∩ ↓v``.

    ``inside`` must be a down-closed membership vector (true of every
    regular open set).  Then ``x`` fails to be maximal exactly when some
    upper cover of ``x`` is in ``E`` and below ``v``.
    """
    inside = np.asarray(inside, dtype=bool)
    if not inside.any():
        return np.zeros((p.n, p.n), dtype=bool)
    cov_in = p.cover_matrix[:, np.flatnonzero(inside)]
    blocked = np.asarray(cov_in @ p.leq_f32[inside, :]) > 0
    return p.leq & inside[:, None] & ~blocked


def awareness_classes(frame: Frame, agent: Agent) -> tuple[np.ndarray, np.ndarray]:
    """Distinct awareness rows (C, n) and the class index of each possibility."""
    key = ("classes", agent.name)
    if key not in frame._cache:
        aw = agent.aware.matrix
        index: dict[bytes, int] = {}
        class_of = np.empty(len(aw), dtype=np.int64)
        for w, packed in enumerate(np.packbits(aw, axis=1)):
            class_of[w] = index.setdefault(packed.tobytes(), len(index))
        firsts = [int(np.flatnonzero(class_of == k)[0]) for k in range(len(index))]
        frame._cache[key] = (aw[firsts], class_of)
    return frame._cache[key]


def _aware_of_cells(frame: Frame, agent: Agent, cells: Sequence[np.ndarray]) -> np.ndarray:
    p = frame.poset
    rows, class_of = awareness_classes(frame, agent)
    bad_class = np.zeros(len(rows), dtype=bool)
    for c in cells:
        t = maxima_matrix(p, c)
        if len(rows) <= 8:
            # a class is troubled when a maximal element below one of its targets lies outside it
            for k, row in enumerate(rows):
                bad_class[k] |= t[np.ix_(~row, row)].any()
        else:
            outside = (t.T.astype(np.float32) @ (~rows).T.astype(np.float32)) > 0
            bad_class |= (rows & outside.T).any(axis=1)
    bad = bad_class[class_of]
    # ω is in the result iff no refinement of ω is troubled
    return ~((bad.astype(np.float32) @ p.leq_f32) > 0)


def aware_vec(frame: Frame, agent: Agent, e: Event) -> np.ndarray:
    key = ("A", agent.name, e.mask)
    if key not in frame._cache:
        frame._cache[key] = _aware_of_cells(frame, agent, [e.vector, (~e).vector])
    return frame._cache[key]


def implicit_vec(rel: Correspondence, vec: np.ndarray) -> np.ndarray:
    return ~(rel.matrix & ~np.asarray(vec, dtype=bool)[None, :]).any(axis=1)


def _as_event(frame: Frame, vec: np.ndarray, what: str) -> Event:
    if not is_ro_vector(frame.poset, vec):
        raise FrameError(f"{what} is not regular open; the frame violates its correspondence conditions")
    return Event(frame.poset, mask_of_vector(frame.poset, vec))


def _agent(frame: Frame, agent) -> Agent:
    return agent if isinstance(agent, Agent) else frame.agent(agent)


def _relation(agent: Agent, which: str) -> Correspondence:
    if which not in ("know", "believe"):
        raise ValueError(f"which must be 'know' or 'believe', not {which!r}")
    rel = agent.know if which == "know" else agent.believe
    if rel is None:
        raise FrameError(f"agent {agent.name!r} has no {which} table (awareness-only agent)")
    return rel


# -- operators ------------------------------------------------------------

def aware_op(frame: Frame, agent, e: Event) -> Event:
    a = _agent(frame, agent)
    frame.check_argument(e)
    return _as_event(frame, aware_vec(frame, a, e), f"A({e!r})")


def unaware_op(frame: Frame, agent, e: Event) -> Event:
    return ~aware_op(frame, agent, e)


def implicit_op(frame: Frame, agent, e: Event, which: str = "know") -> Event:
    a = _agent(frame, agent)
    if e.poset is not frame.poset:
        raise FrameError("event belongs to a different poset")
    rel = _relation(a, which)
    return _as_event(frame, implicit_vec(rel, e.vector), f"L({e!r})")


def know_op(frame: Frame, agent, e: Event) -> Event:
    return implicit_op(frame, agent, e, "know") & aware_op(frame, agent, e)


def believe_op(frame: Frame, agent, e: Event) -> Event:
    return implicit_op(frame, agent, e, "believe") & aware_op(frame, agent, e)


def aware_question(frame: Frame, agent, cells: Sequence[Event]) -> Event:
    """Awareness of a partitional question given by pairwise disjoint cells joining to Ω."""
    a = _agent(frame, agent)
    cells = list(cells)
    if not cells:
        raise FrameError("a question needs at least one cell")
    acc = 0
    for c in cells:
        frame.check_argument(c)
        if acc & c.mask:
            raise FrameError("question cells are not pairwise disjoint")
        acc |= c.mask
    if acc != frame.poset.full_mask:
        raise FrameError("question cells do not join to Ω")
    vec = _aware_of_cells(frame, a, [c.vector for c in cells])
    return _as_event(frame, vec, "question awareness")


def common_op(frame: Frame, agents: Iterable, e: Event, which: str = "know") -> Event:
    """Common knowledge (or belief) among ``agents``.

    Iterates ``F_{n+1} = ⋂_i X_i(F_n)`` from ``F_1`` = everyone's operator on
    ``e`` and intersects the iterates; the sequence of events is finite so a
    repeated term ends the loop.
    """
    ops = [(_agent(frame, x)) for x in agents]
    if not ops:
        raise FrameError("common operator needs at least one agent")
    op = know_op if which == "know" else believe_op if which == "believe" else None
    if op is None:
        raise ValueError(f"which must be 'know' or 'believe', not {which!r}")

    def everyone(x: Event) -> Event:
        out = frame.top
        for a in ops:
            out = out & op(frame, a, x)
        return out

    cur = everyone(e)
    acc = cur
    seen = {cur.mask}
    while True:
        cur = everyone(cur)
        acc = acc & cur
        if cur.mask in seen:
            return acc
        seen.add(cur.mask)


def information_based(frame: Frame, agent, w: Ref) -> bool:
    a = _agent(frame, agent)
    aw = a.aware.matrix
    kn = _relation(a, "know").matrix
    be = _relation(a, "believe").matrix
    p = frame.poset
    for v in p.below[p.id(w)]:
        if (aw[v] & kn[v] & ~be[v]).any():
            return False
    return True


def information_based_witness(frame: Frame, agent, w: Ref) -> tuple[str, str] | None:
    a = _agent(frame, agent)
    p = frame.poset
    for v in sorted(p.below[p.id(w)]):
        bad = a.aware.matrix[v] & a.know.matrix[v] & ~a.believe.matrix[v]
        if bad.any():
            return p.labels[v], p.labels[int(np.flatnonzero(bad)[0])]
    return None


def build_frame(poset: Poset, events: EventFamily, agents: Mapping[str, Mapping[str, Mapping | None]],
                named: Mapping[str, Event] | None = None, groups: Mapping[str, Iterable[Ref]] | None = None,
                strict: bool | None = None, name: str = "") -> Frame:
    """Assemble a frame from label mappings ``{agent: {aware, know?, believe?}}``."""
    built = {}
    for aid, tabs in agents.items():
        aware = tabs.get("aware")
        if aware is None:
            raise FrameError(f"agent {aid!r} has no awareness table")
        know = tabs.get("know")
        believe = tabs.get("believe")
        if (know is None) != (believe is None):
            raise FrameError(f"agent {aid!r} needs both know and believe tables, or neither")
        conv = lambda t: t if isinstance(t, Correspondence) else Correspondence.from_mapping(poset, t)
        built[aid] = Agent(aid, conv(aware), conv(know) if know is not None else None,
                           conv(believe) if believe is not None else None)
    grp = {k: poset.ids(v) for k, v in (groups or {}).items()}
    if strict is None:
        strict = not events.all_regular_open
    return Frame(poset, events, built, dict(named or {}), grp, strict, name)


def quotient_frame(frame: Frame) -> Frame:
    """The frame over the separative quotient of the poset.

    Correspondences and named events are carried over by taking images of
    sets; each correspondence must give the same image on all members of a
    class, otherwise the frame does not descend to the quotient.
    """
    p = frame.poset
    q, class_of = separative_quotient(p)
    cls = np.asarray(class_of)

    def image(vec: np.ndarray) -> np.ndarray:
        out = np.zeros(q.n, dtype=bool)
        out[cls[np.flatnonzero(vec)]] = True
        return out

    agents = {}
    for name, a in frame.agents.items():
        tabs = {}
        for key, c in (("aware", a.aware), ("know", a.know), ("believe", a.believe)):
            if c is None:
                continue
            m = np.zeros((q.n, q.n), dtype=bool)
            seen = np.zeros(q.n, dtype=bool)
            for w in range(p.n):
                row = image(c.matrix[w])
                k = cls[w]
                if seen[k] and not np.array_equal(m[k], row):
                    raise FrameError(f"{key} table of agent {name!r} differs within the class of {p.labels[w]!r}")
                m[k], seen[k] = row, True
            tabs[key] = Correspondence(q, m)
        agents[name] = tabs
    named = {k: event_from_set(q, np.flatnonzero(image(e.vector)).tolist()) for k, e in frame.named.items()}
    if frame.events.all_regular_open:
        fam = all_regular_open(q)
    else:
        gens = [np.flatnonzero(image(frame.events.event(1 << j).vector)).tolist() for j in range(frame.events.k)]
        fam, _ = generate_family(q, gens)
    groups = {k: frozenset(int(cls[w]) for w in v) for k, v in frame.groups.items()}
    return build_frame(q, fam, agents, named, groups, name=f"{frame.name}-quotient" if frame.name else "")
