"""Finite Boolean algebras as bitmasks over their atoms."""
from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np


class BooleanAlgebraError(ValueError):
    pass


class FiniteBooleanAlgebra:
    """The algebra of subsets of ``n_atoms`` atoms.

    Element ``x`` is an int whose bit ``j`` says atom ``j`` lies below it.
    Optional element labels are used for printing and parsing.
    """

    def __init__(self, n_atoms: int, atom_labels: Sequence[str] | None = None,
                 element_labels: dict[int, str] | None = None):
        if n_atoms < 0:
            raise BooleanAlgebraError("number of atoms must be non-negative")
        self.n_atoms = n_atoms
        self.size = 1 << n_atoms
        self.top = self.size - 1
        self.atom_labels = tuple(atom_labels) if atom_labels is not None else tuple(f"a{j}" for j in range(n_atoms))
        if len(self.atom_labels) != n_atoms or len(set(self.atom_labels)) != n_atoms:
            raise BooleanAlgebraError("atom labels must be distinct, one per atom")
        self.element_labels = dict(element_labels or {})
        self._by_label = {v: k for k, v in self.element_labels.items()}

    def elements(self) -> range:
        return range(self.size)

    def atoms(self) -> list[int]:
        return [1 << j for j in range(self.n_atoms)]

    def meet(self, x, y):
        return x & y

    def join(self, x, y):
        return x | y

    def neg(self, x):
        return self.top ^ x

    def leq(self, x, y) -> bool:
        return x & ~y == 0

    def label(self, x: int) -> str:
        if x in self.element_labels:
            return self.element_labels[x]
        if x == 0:
            return "0"
        if x == self.top:
            return "1"
        return "+".join(self.atom_labels[j] for j in range(self.n_atoms) if x >> j & 1)

    def parse(self, text: str) -> int:
        if text in self._by_label:
            return self._by_label[text]
        if text == "0":
            return 0
        if text == "1":
            return self.top
        x = 0
        for part in text.split("+"):
            try:
                x |= 1 << self.atom_labels.index(part)
            except ValueError:
                raise BooleanAlgebraError(f"unknown element {text!r}") from None
        return x

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteBooleanAlgebra) and other.n_atoms == self.n_atoms

    def __hash__(self) -> int:
        return hash(self.n_atoms)

    def __repr__(self) -> str:
        return f"FiniteBooleanAlgebra({self.size} elements)"

    @classmethod
    def from_order(cls, labels: Sequence[str], leq_pairs: Iterable[tuple[str, str]]) -> tuple["FiniteBooleanAlgebra", dict[str, int]]:
        """Recognise a Boolean algebra given by its order (pairs ``x <= y``).

        The lattice laws are checked by brute force, so this is meant for
        small carriers.  Returns the algebra and the label-to-mask map.
        """
        labels = list(labels)
        n = len(labels)
        idx = {lab: i for i, lab in enumerate(labels)}
        if len(idx) != n or n == 0:
            raise BooleanAlgebraError("element labels must be distinct and non-empty")
        leq = np.eye(n, dtype=bool)
        for a, b in leq_pairs:
            if a not in idx or b not in idx:
                raise BooleanAlgebraError(f"unknown element in pair ({a!r}, {b!r})")
            leq[idx[a], idx[b]] = True
        for k in range(n):
            leq |= np.outer(leq[:, k], leq[k, :])
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            raise BooleanAlgebraError("order is not antisymmetric")
        bottoms = [i for i in range(n) if leq[i, :].all()]
        tops = [i for i in range(n) if leq[:, i].all()]
        if not bottoms or not tops:
            raise BooleanAlgebraError("order has no bottom or no top")
        bot, top = bottoms[0], tops[0]

        def bound(i, j, upper):
            cands = np.flatnonzero(leq[i, :] & leq[j, :]) if upper else np.flatnonzero(leq[:, i] & leq[:, j])
            best = [c for c in cands if all(leq[c, d] if upper else leq[d, c] for d in cands)]
            if not best:
                raise BooleanAlgebraError(f"{labels[i]!r} and {labels[j]!r} have no {'join' if upper else 'meet'}")
            return int(best[0])

        jn = np.array([[bound(i, j, True) for j in range(n)] for i in range(n)])
        mt = np.array([[bound(i, j, False) for j in range(n)] for i in range(n)])
        for i in range(n):
            if not any(jn[i, j] == top and mt[i, j] == bot for j in range(n)):
                raise BooleanAlgebraError(f"{labels[i]!r} has no complement")
            for j in range(n):
                for k in range(n):
                    if mt[i, jn[j, k]] != jn[mt[i, j], mt[i, k]]:
                        raise BooleanAlgebraError("lattice is not distributive")
        atoms = [i for i in range(n) if i != bot and all(j in (bot, i) for j in np.flatnonzero(leq[:, i]))]
        if 1 << len(atoms) != n:
            raise BooleanAlgebraError("carrier size is not a power of two")
        mask = {}
        for i in range(n):
            mask[labels[i]] = sum(1 << j for j, t in enumerate(atoms) if leq[t, i])
        if len(set(mask.values())) != n:
            raise BooleanAlgebraError("elements are not determined by the atoms below them")
        alg = cls(len(atoms), [labels[t] for t in atoms], {m: lab for lab, m in mask.items()})
        for a in labels:
            for b in labels:
                if bool(leq[idx[a], idx[b]]) != alg.leq(mask[a], mask[b]):
                    raise BooleanAlgebraError("order does not match the atom representation")
        return alg, mask
