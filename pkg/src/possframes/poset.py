"""Finite posets of possibilities ordered by refinement.

``leq[i, j]`` is True when possibility ``i`` refines ``j``.  The set
operations in this module (down-closure, interior, closure, regularization)
are written straight from their definitions on Python sets.  The bitmask
machinery in :mod:`possframes.events` is tested against them.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from functools import cached_property

import numpy as np
from scipy import sparse


class PosetError(ValueError):
    """Raised for malformed refinement relations."""


Ref = int | str


class Poset:
    """A finite partial order on labelled possibilities.

    Elements are addressed by integer index; most methods also accept labels.
    """

    def __init__(self, labels: Sequence[str], leq, *, check: bool = True, covers=None):
        self.labels: tuple[str, ...] = tuple(str(x) for x in labels)
        self.n = len(self.labels)
        self.index: dict[str, int] = {}
        for i, lab in enumerate(self.labels):
            if lab in self.index:
                raise PosetError(f"duplicate possibility label {lab!r}")
            self.index[lab] = i
        leq = np.array(leq, dtype=bool)
        if leq.shape != (self.n, self.n):
            raise PosetError(f"order matrix has shape {leq.shape}, expected {(self.n, self.n)}")
        if check:
            _check_partial_order(leq, self.labels)
        leq.setflags(write=False)
        self.leq = leq
        self._derive(covers)

    # -- construction helpers -------------------------------------------------

    def _derive(self, covers) -> None:
        n = self.n
        leq = self.leq
        strict = leq & ~np.eye(n, dtype=bool)
        self.below: tuple[frozenset[int], ...] = tuple(frozenset(np.flatnonzero(leq[:, i]).tolist()) for i in range(n))
        self.above: tuple[frozenset[int], ...] = tuple(frozenset(np.flatnonzero(leq[i, :]).tolist()) for i in range(n))
        self.minimals: tuple[int, ...] = tuple(i for i in range(n) if not strict[:, i].any())
        self.bit: dict[int, int] = {w: k for k, w in enumerate(self.minimals)}
        tops = [i for i in range(n) if leq[:, i].all()]
        self.maximum: int | None = tops[0] if tops else None

        if covers is None:
            if n:
                s = strict.astype(np.float32)
                two_step = (s @ s) > 0
                cov = strict & ~two_step
            else:
                cov = np.zeros((0, 0), dtype=bool)
        else:
            cov = np.zeros((n, n), dtype=bool)
            for lo, hi in covers:
                cov[lo, hi] = True
        self.cover_matrix = sparse.csr_matrix(cov.astype(np.float32))
        self.upper_covers: tuple[tuple[int, ...], ...] = tuple(
            tuple(self.cover_matrix.indices[self.cover_matrix.indptr[i]:self.cover_matrix.indptr[i + 1]].tolist())
            for i in range(n)
        )

        masks = []
        for i in range(n):
            m = 0
            for w in self.below[i]:
                if w in self.bit:
                    m |= 1 << self.bit[w]
            masks.append(m)
        self.below_mask: tuple[int, ...] = tuple(masks)
        self.n_minimals = len(self.minimals)
        self.full_mask = (1 << self.n_minimals) - 1
        if self.n_minimals <= 63:
            self.below_u64 = np.array(masks, dtype=np.uint64)
            # minimal-by-element incidence, used for vectorized RO checks
            inc = np.zeros((n, self.n_minimals), dtype=bool)
            for k, w in enumerate(self.minimals):
                inc[:, k] = leq[w, :]
            self.min_incidence = inc
        else:
            self.below_u64 = None
            self.min_incidence = None

    @cached_property
    def leq_f32(self) -> np.ndarray:
        """The order matrix as float32, for matrix products."""
        return self.leq.astype(np.float32)

    # -- lookup ---------------------------------------------------------------

    def id(self, x: Ref) -> int:
        if isinstance(x, (int, np.integer)):
            if not 0 <= int(x) < self.n:
                raise PosetError(f"possibility index {x} out of range")
            return int(x)
        try:
            return self.index[x]
        except KeyError:
            raise PosetError(f"unknown possibility {x!r}") from None

    def ids(self, xs: Iterable[Ref]) -> frozenset[int]:
        return frozenset(self.id(x) for x in xs)

    def names(self, xs: Iterable[int]) -> list[str]:
        return sorted(self.labels[i] for i in xs)

    def refines(self, a: Ref, b: Ref) -> bool:
        return bool(self.leq[self.id(a), self.id(b)])

    @property
    def all(self) -> frozenset[int]:
        return frozenset(range(self.n))

    # -- definitional set operations ------------------------------------------

    def down_closure(self, s: Iterable[Ref]) -> frozenset[int]:
        out: set[int] = set()
        for v in self.ids(s):
            out |= self.below[v]
        return frozenset(out)

    def interior(self, s: Iterable[Ref]) -> frozenset[int]:
        s = self.ids(s)
        return frozenset(w for w in range(self.n) if self.below[w] <= s)

    def closure(self, s: Iterable[Ref]) -> frozenset[int]:
        s = self.ids(s)
        return frozenset(w for w in range(self.n) if self.below[w] & s)

    def regularize(self, s: Iterable[Ref]) -> frozenset[int]:
        return self.interior(self.closure(self.down_closure(s)))

    def is_regular_open(self, s: Iterable[Ref]) -> bool:
        s = self.ids(s)
        return self.regularize(s) == s

    def maximal_elements(self, s: Iterable[Ref]) -> frozenset[int]:
        s = self.ids(s)
        return frozenset(x for x in s if not any(y != x and y in s for y in self.above[x]))

    def compatible(self, a: Ref, b: Ref) -> bool:
        return bool(self.below[self.id(a)] & self.below[self.id(b)])

    def is_separative(self) -> bool:
        return all(self.is_regular_open(self.below[w]) for w in range(self.n))

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, minimals={self.n_minimals})"


def _check_partial_order(leq: np.ndarray, labels: Sequence[str]) -> None:
    n = leq.shape[0]
    if n == 0:
        return
    if not leq.diagonal().all():
        bad = int(np.flatnonzero(~leq.diagonal())[0])
        raise PosetError(f"order is not reflexive at {labels[bad]!r}")
    sym = leq & leq.T & ~np.eye(n, dtype=bool)
    if sym.any():
        i, j = map(int, np.argwhere(sym)[0])
        raise PosetError(f"refinement cycle: {labels[i]!r} and {labels[j]!r} refine each other")
    f = leq.astype(np.float32)
    if ((f @ f > 0) & ~leq).any():
        i, j = map(int, np.argwhere((f @ f > 0) & ~leq)[0])
        raise PosetError(f"order is not transitive between {labels[i]!r} and {labels[j]!r}")


def build_poset(labels: Sequence[str], refines: Iterable[tuple[str, str]]) -> Poset:
    """Build a poset from covering pairs ``(child, parent)`` meaning child refines parent.

    The reflexive-transitive closure is taken; cycles are rejected with a
    message naming the possibilities involved.
    """
    labels = [str(x) for x in labels]
    index: dict[str, int] = {}
    for i, lab in enumerate(labels):
        if lab in index:
            raise PosetError(f"duplicate possibility label {lab!r}")
        index[lab] = i
    n = len(labels)
    leq = np.eye(n, dtype=bool)
    for child, parent in refines:
        for x in (child, parent):
            if x not in index:
                raise PosetError(f"unknown possibility {x!r} in refinement pair")
        if child == parent:
            continue
        leq[index[child], index[parent]] = True
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])
    cyc = leq & leq.T & ~np.eye(n, dtype=bool)
    if cyc.any():
        members = sorted(labels[i] for i in np.flatnonzero(cyc.any(axis=1)))
        raise PosetError("refinement cycle through " + ", ".join(repr(m) for m in members))
    return Poset(labels, leq, check=False)


def separative_quotient(p: Poset) -> tuple[Poset, tuple[int, ...]]:
    """Identify possibilities with the same regularized principal downset.

    Returns the quotient poset and, for every original index, its class index.
    Class labels join member labels with ``=``.
    """
    keys: dict[frozenset[int], int] = {}
    class_of = []
    reps: list[int] = []
    for w in range(p.n):
        r = p.regularize({w})
        if r not in keys:
            keys[r] = len(reps)
            reps.append(w)
        class_of.append(keys[r])
    members: list[list[int]] = [[] for _ in reps]
    for w, c in enumerate(class_of):
        members[c].append(w)
    k = len(reps)
    leq = np.zeros((k, k), dtype=bool)
    rho = [p.regularize({reps[c]}) for c in range(k)]
    for a in range(k):
        for b in range(k):
            leq[a, b] = reps[a] in rho[b]
    labels = ["=".join(p.labels[w] for w in ms) for ms in members]
    return Poset(labels, leq, check=True), tuple(class_of)
