"""Regular open events as bitmasks over minimal possibilities.

On a finite poset every regular open set is fixed by the minimal
possibilities it contains: ``E = {w : every minimal below w lies in E}``.
An :class:`Event` therefore stores an integer ``mask`` with bit ``k`` set
when the ``k``-th minimal element is in the set.  Boolean operations are
bit operations, which is what makes large event algebras tractable.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .boolean import FiniteBooleanAlgebra
from .poset import Poset, Ref


class NotRegularOpenError(ValueError):
    def __init__(self, check: "RegularityCheck"):
        super().__init__(check.message())
        self.check = check


def members_vector(p: Poset, mask: int) -> np.ndarray:
    """Boolean membership vector of the regular open set with this mask."""
    if p.below_u64 is not None:
        comp = np.uint64(p.full_mask & ~mask)
        return (p.below_u64 & comp) == 0
    return np.array([(b & ~mask) == 0 for b in p.below_mask], dtype=bool)


def mask_of_vector(p: Poset, vec) -> int:
    m = 0
    for k, w in enumerate(p.minimals):
        if vec[w]:
            m |= 1 << k
    return m


def is_ro_vector(p: Poset, vec) -> bool:
    vec = np.asarray(vec, dtype=bool)
    return bool((members_vector(p, mask_of_vector(p, vec)) == vec).all())


def ro_columns(p: Poset, mat: np.ndarray) -> np.ndarray:
    """For a boolean (n, c) matrix, which columns are regular open sets."""
    inc = p.min_incidence
    if inc is None:
        return np.array([is_ro_vector(p, mat[:, j]) for j in range(mat.shape[1])], dtype=bool)
    mins = mat[list(p.minimals), :].astype(np.float32)
    # w is in the regularization iff every minimal below w is in the set
    missing = inc.astype(np.float32) @ (1.0 - mins)
    regular = missing < 0.5
    return (regular == mat).all(axis=0)


@dataclass(frozen=True, eq=False)
class Event:
    poset: Poset = field(repr=False)
    mask: int

    def __eq__(self, other) -> bool:
        return isinstance(other, Event) and other.poset is self.poset and other.mask == self.mask

    def __hash__(self) -> int:
        return hash((id(self.poset), self.mask))

    @cached_property
    def vector(self) -> np.ndarray:
        v = members_vector(self.poset, self.mask)
        v.setflags(write=False)
        return v

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.vector).tolist())

    def labels(self) -> list[str]:
        return self.poset.names(self.members)

    def __contains__(self, w: Ref) -> bool:
        return bool(self.vector[self.poset.id(w)])

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: "Event") -> bool:
        return self.mask & ~other.mask == 0

    def __and__(self, other: "Event") -> "Event":
        return Event(self.poset, self.mask & other.mask)

    def __or__(self, other: "Event") -> "Event":
        return Event(self.poset, self.mask | other.mask)

    def __invert__(self) -> "Event":
        return Event(self.poset, self.poset.full_mask & ~self.mask)

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_top(self) -> bool:
        return self.mask == self.poset.full_mask

    def __repr__(self) -> str:
        return "Event{" + ", ".join(self.labels()) + "}"


def event_from_minimals(p: Poset, minimals: Iterable[Ref]) -> Event:
    m = 0
    for w in p.ids(minimals):
        if w not in p.bit:
            raise ValueError(f"{p.labels[w]!r} is not a minimal possibility")
        m |= 1 << p.bit[w]
    return Event(p, m)


def minimals_of(e: Event) -> frozenset[int]:
    p = e.poset
    return frozenset(w for k, w in enumerate(p.minimals) if e.mask >> k & 1)


def full(p: Poset) -> Event:
    return Event(p, p.full_mask)


def empty(p: Poset) -> Event:
    return Event(p, 0)


def down_event(p: Poset, v: Ref) -> Event:
    """The event ``↓v``; raises when the principal downset is not regular open."""
    return event_from_set(p, p.below[p.id(v)])


def neg(e: Event) -> Event:
    return ~e


def meet(e: Event, f: Event) -> Event:
    return e & f


def join(e: Event, f: Event) -> Event:
    return e | f


def join_family(p: Poset, es: Iterable[Event]) -> Event:
    """Join of any number of events; the empty join is the empty event."""
    m = 0
    for e in es:
        m |= e.mask
    return Event(p, m)


def leq(e: Event, f: Event) -> bool:
    return e <= f


@dataclass
class RegularityCheck:
    ok: bool
    condition: str | None = None
    witness: str | None = None
    refinement: str | None = None
    chain: dict[str, str] = field(default_factory=dict)

    def message(self) -> str:
        if self.ok:
            return "regular open"
        if self.condition == "persistence":
            return f"not persistent: {self.witness!r} is in the set but its refinement {self.refinement!r} is not"
        return f"not refinable: {self.witness!r} is outside the set yet every refinement has a refinement inside"

    def to_dict(self) -> dict:
        return {"ok": self.ok, "condition": self.condition, "witness": self.witness,
                "refinement": self.refinement, "chain": dict(sorted(self.chain.items()))}


def is_regular_open(p: Poset, s: Iterable[Ref]) -> RegularityCheck:
    """Check persistence and refinability directly, reporting a witness on failure."""
    s = p.ids(s)
    for w in sorted(s):
        for v in sorted(p.below[w]):
            if v not in s:
                return RegularityCheck(False, "persistence", p.labels[w], p.labels[v])
    for w in range(p.n):
        if w in s:
            continue
        chain = {}
        for v in sorted(p.below[w]):
            inside = sorted(p.below[v] & s)
            if not inside:
                break
            chain[p.labels[v]] = p.labels[inside[0]]
        else:
            return RegularityCheck(False, "refinability", p.labels[w], None, chain)
    return RegularityCheck(True)


def event_from_set(p: Poset, s: Iterable[Ref]) -> Event:
    s = p.ids(s)
    vec = np.zeros(p.n, dtype=bool)
    vec[list(s)] = True
    m = mask_of_vector(p, vec)
    if not (members_vector(p, m) == vec).all():
        raise NotRegularOpenError(is_regular_open(p, s))
    return Event(p, m)


def regularized_event(p: Poset, s: Iterable[Ref]) -> Event:
    return event_from_set(p, p.regularize(s))


class EventFamily:
    """A Boolean subalgebra of the regular open sets, stored by its atoms.

    ``atoms`` are disjoint nonzero masks covering all minimal elements.
    The member with element index ``e`` is the union of the atoms whose bit
    is set in ``e``; so the family is isomorphic to the algebra with
    ``len(atoms)`` atoms.
    """

    MATERIALIZE_LIMIT = 1 << 16

    def __init__(self, poset: Poset, atoms: Iterable[int]):
        atoms = sorted(int(a) for a in atoms)
        acc = 0
        for a in atoms:
            if a == 0 or acc & a:
                raise ValueError("family atoms must be nonzero and disjoint")
            acc |= a
        if acc != poset.full_mask:
            raise ValueError("family atoms must cover every minimal possibility")
        atoms.sort(key=lambda a: (a & -a))
        self.poset = poset
        self.atoms: tuple[int, ...] = tuple(atoms)
        self.k = len(atoms)
        self.all_regular_open = all(a & (a - 1) == 0 for a in atoms)

    @property
    def size(self) -> int:
        return 1 << self.k

    @property
    def implicit(self) -> bool:
        return self.size > self.MATERIALIZE_LIMIT

    def contains(self, e: Event | int) -> bool:
        m = e.mask if isinstance(e, Event) else int(e)
        if m & ~self.poset.full_mask:
            return False
        return all((m & a) in (0, a) for a in self.atoms)

    def __contains__(self, e) -> bool:
        return self.contains(e)

    def element_of(self, m: int) -> int:
        if self.all_regular_open:
            return m
        e = 0
        for j, a in enumerate(self.atoms):
            part = m & a
            if part == a:
                e |= 1 << j
            elif part:
                raise ValueError("mask is not a member of the family")
        return e

    def mask_of(self, e: int) -> int:
        if self.all_regular_open:
            return e
        m = 0
        for j, a in enumerate(self.atoms):
            if e >> j & 1:
                m |= a
        return m

    def masks(self) -> np.ndarray:
        """All member masks, indexed by element index (uint64)."""
        if self.k > 26:
            raise ValueError(f"family of 2^{self.k} events is too large to enumerate")
        e = np.arange(self.size, dtype=np.uint64)
        if self.all_regular_open:
            return e
        out = np.zeros(self.size, dtype=np.uint64)
        for j, a in enumerate(self.atoms):
            out |= np.where((e >> np.uint64(j)) & np.uint64(1), np.uint64(a), np.uint64(0))
        return out

    def elements_to_masks(self, es: np.ndarray) -> np.ndarray:
        es = np.asarray(es, dtype=np.uint64)
        if self.all_regular_open:
            return es
        out = np.zeros(es.shape, dtype=np.uint64)
        for j, a in enumerate(self.atoms):
            out |= np.where((es >> np.uint64(j)) & np.uint64(1), np.uint64(a), np.uint64(0))
        return out

    def masks_to_elements(self, ms: np.ndarray) -> np.ndarray:
        """Element indices for masks; -1 where a mask is not in the family."""
        ms = np.asarray(ms, dtype=np.uint64)
        if self.all_regular_open:
            return ms.astype(np.int64)
        out = np.zeros(ms.shape, dtype=np.int64)
        bad = np.zeros(ms.shape, dtype=bool)
        for j, a in enumerate(self.atoms):
            part = ms & np.uint64(a)
            whole = part == np.uint64(a)
            bad |= (part != 0) & ~whole
            out |= np.where(whole, 1 << j, 0)
        out[bad] = -1
        return out

    def events(self) -> list[Event]:
        if self.implicit:
            raise ValueError(f"family of 2^{self.k} events is kept implicit")
        return [Event(self.poset, int(m)) for m in self.masks()]

    def event(self, e: int) -> Event:
        return Event(self.poset, self.mask_of(e))

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        kind = "all regular open" if self.all_regular_open else "generated"
        return f"EventFamily({kind}, 2^{self.k} events)"


def all_regular_open(p: Poset) -> EventFamily:
    return EventFamily(p, [1 << k for k in range(p.n_minimals)])


def generate_family(p: Poset, generators: Mapping[str, Iterable[Ref]] | Iterable[Iterable[Ref]],
                    regularize: bool = False) -> tuple[EventFamily, dict[str, Event]]:
    """Close named generators under intersection and negation.

    Returns the family and the generator events by name.  With
    ``regularize`` a non-regular-open generator is replaced by its
    regularization; otherwise it is rejected.
    """
    if not isinstance(generators, Mapping):
        generators = {f"g{i}": g for i, g in enumerate(generators)}
    named: dict[str, Event] = {}
    for name, members in generators.items():
        s = p.ids(members)
        named[name] = regularized_event(p, s) if regularize else event_from_set(p, s)
    blocks = [p.full_mask] if p.full_mask else []
    for ev in named.values():
        nxt = []
        for b in blocks:
            for part in (b & ev.mask, b & ~ev.mask):
                if part:
                    nxt.append(part)
        blocks = nxt
    fam = EventFamily(p, blocks)
    for ev in named.values():
        if not fam.contains(ev):
            raise AssertionError("generated family misses a generator")
    return fam, named


def is_quasi_principal(family: EventFamily, elements: Iterable[int] | None = None) -> tuple[bool, tuple[str, ...] | None]:
    """Every member of each event lies below a maximal member of that event.

    Returns ``(holds, witness)`` with witness ``(event labels..., possibility)``.
    Checks all events unless ``elements`` (element indices) is given.
    """
    p = family.poset
    els = range(family.size) if elements is None else elements
    for e in els:
        ev = family.event(int(e))
        mx = p.maximal_elements(ev.members)
        for w in ev.members:
            if not any(p.leq[w, x] for x in mx):
                return False, (*ev.labels(), p.labels[w])
    return True, None


def algebra_to_ro_frame(b) -> tuple[Poset, EventFamily, dict[int, Event]]:
    """The poset of nonzero elements of a finite Boolean algebra.

    Every element ``b`` maps to ``{a != 0 : a <= b}``; the map is checked to
    be a Boolean isomorphism onto the regular open sets using the set-based
    definitions (so it is meant for small algebras).
    """
    assert isinstance(b, FiniteBooleanAlgebra)
    nonzero = [x for x in b.elements() if x != 0]
    labels = [b.label(x) for x in nonzero]
    arr = np.array(nonzero, dtype=np.int64)
    leq = (arr[:, None] & ~arr[None, :]) == 0
    p = Poset(labels, leq, check=True)
    pos = {x: i for i, x in enumerate(nonzero)}
    image: dict[int, Event] = {}
    for x in b.elements():
        s = {pos[a] for a in nonzero if b.leq(a, x)}
        image[x] = event_from_set(p, s)
    if len(set(image.values())) != b.size or b.size != 1 << p.n_minimals:
        raise AssertionError("element map is not a bijection onto the regular open sets")
    for x in b.elements():
        ex = image[x]
        neg_set = p.interior(p.all - ex.members)
        if image[b.neg(x)].members != neg_set:
            raise AssertionError("element map does not preserve negation")
        for y in b.elements():
            if image[b.meet(x, y)].members != ex.members & image[y].members:
                raise AssertionError("element map does not preserve meets")
    return p, all_regular_open(p), image
