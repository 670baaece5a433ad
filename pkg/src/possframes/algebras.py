"""Epistemic awareness algebras: finite Boolean algebras with A, K and B tables."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .boolean import FiniteBooleanAlgebra
from .events import EventFamily
from .frames import Frame, FrameError, _agent
from .tables import TABLE_LIMIT, family_tables

BINARY_EXHAUSTIVE_LIMIT = 1 << 12
UNARY_EXHAUSTIVE_LIMIT = 1 << 20
PAIR_SAMPLES = 100_000


class EpistemicAwarenessAlgebra:
    """A Boolean algebra (atom-mask encoding) with operation tables indexed by element."""

    def __init__(self, base: FiniteBooleanAlgebra, A, K, B, agent: str = "i", name: str = ""):
        self.base = base
        self.A = self._table(A, "A")
        self.K = self._table(K, "K")
        self.B = self._table(B, "B")
        self.agent = agent
        self.name = name

    def _table(self, t, key) -> np.ndarray:
        t = np.asarray(t, dtype=np.int64)
        if t.shape != (self.base.size,):
            raise ValueError(f"{key} table must have {self.base.size} entries")
        if (t < 0).any() or (t >= self.base.size).any():
            raise ValueError(f"{key} table has entries outside the carrier")
        t.setflags(write=False)
        return t

    @property
    def size(self) -> int:
        return self.base.size

    @property
    def top(self) -> int:
        return self.base.top

    def U(self, x):
        return self.top ^ self.A[x]

    def op(self, key: str) -> np.ndarray:
        if key == "U":
            return self.top ^ self.A
        return {"A": self.A, "K": self.K, "B": self.B}[key]

    def __repr__(self) -> str:
        return f"EpistemicAwarenessAlgebra({self.size} elements, agent {self.agent!r})"


@dataclass
class AxiomResult:
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
class AxiomReport:
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.results)

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failed(self) -> list[str]:
        return [r.name for r in self.results if not r.holds]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "axioms": [r.to_dict() for r in self.results]}


def _leq(x, y):
    return (x & ~y) == 0


def _unary(alg, name, ok: np.ndarray, extra=None) -> AxiomResult:
    bad = np.flatnonzero(~ok)
    if len(bad):
        x = int(bad[0])
        w = {"a": alg.base.label(x)}
        if extra:
            w.update(extra(x))
        return AxiomResult(name, False, witness=w)
    return AxiomResult(name, True)


def _pairs(alg, seed: int, samples: int):
    """Yield (xs, ys) arrays covering all pairs (row by row) or a seeded sample."""
    n = alg.size
    if n <= BINARY_EXHAUSTIVE_LIMIT:
        ys = np.arange(n, dtype=np.int64)
        for x in range(n):
            yield np.full(n, x, dtype=np.int64), ys
    else:
        rng = np.random.default_rng(seed)
        yield rng.integers(0, n, size=samples, dtype=np.int64), rng.integers(0, n, size=samples, dtype=np.int64)


def _binary(alg, name, pred, seed, samples) -> AxiomResult:
    mode = "exhaustive" if alg.size <= BINARY_EXHAUSTIVE_LIMIT else "sampled"
    for xs, ys in _pairs(alg, seed, samples):
        ok = pred(xs, ys)
        if not ok.all():
            i = int(np.flatnonzero(~ok)[0])
            return AxiomResult(name, False, mode, {"a": alg.base.label(int(xs[i])), "b": alg.base.label(int(ys[i]))})
    note = "" if mode == "exhaustive" else f"{samples} seeded pairs (seed {seed})"
    return AxiomResult(name, True, mode, note=note)


def validate_eaa(alg: EpistemicAwarenessAlgebra, seed: int = 0, samples: int = PAIR_SAMPLES) -> AxiomReport:
    top = alg.top
    A, K, B = alg.A, alg.K, alg.B
    els = np.arange(alg.size, dtype=np.int64)
    rep = AxiomReport()
    r = rep.results
    r.append(AxiomResult("A_tautology", bool(A[top] == top), witness=None if A[top] == top else {"a": "1"}))
    r.append(_unary(alg, "A_symmetry", A[els] == A[top ^ els]))
    r.append(_binary(alg, "A_agglomeration", lambda x, y: _leq(A[x] & A[y], A[x & y]), seed, samples))
    r.append(AxiomResult("K_necessitation", bool(K[top] == top), witness=None if K[top] == top else {"a": "1"}))
    for key, T in (("K", K), ("B", B)):
        r.append(_binary(alg, f"{key}_agglomeration", lambda x, y, T=T: _leq(T[x] & T[y], T[x & y]), seed, samples))
    for key, T in (("K", K), ("B", B)):
        # a <= b is forced by testing the pair (a, a | b)
        r.append(_binary(alg, f"{key}_restricted_monotonicity",
                         lambda x, y, T=T: _leq(T[x] & A[x | y], T[x | y]), seed, samples))
    r.append(_unary(alg, "K_factivity", _leq(K[els], els)))
    r.append(AxiomResult("B_consistency", bool(B[0] == 0), witness=None if B[0] == 0 else {"a": "0"}))
    r.append(_unary(alg, "K_entails_B", _leq(K[els], B[els])))
    r.append(_unary(alg, "B_entails_A", _leq(B[els], A[els])))
    # consequences of the axioms
    r.append(AxiomResult("B_necessitation", bool(B[top] == top), witness=None if B[top] == top else {"a": "1"}))
    r.append(_unary(alg, "K_entails_A", _leq(K[els], A[els])))
    return rep


AXIOMS = ("A_tautology", "A_symmetry", "A_agglomeration", "K_necessitation", "K_agglomeration",
          "B_agglomeration", "K_restricted_monotonicity", "B_restricted_monotonicity", "K_factivity",
          "B_consistency", "K_entails_B", "B_entails_A")


def is_eaa(alg: EpistemicAwarenessAlgebra) -> bool:
    rep = validate_eaa(alg)
    return all(rep[name].holds for name in AXIOMS)


def check_join_closure(alg: EpistemicAwarenessAlgebra, seed: int = 0, samples: int = PAIR_SAMPLES) -> AxiomResult:
    """Aa ⊓ Ab ≤ A(a ⊔ b); a consequence of the axioms, so a failure flags an inconsistency."""
    A = alg.A
    res = _binary(alg, "A_join_closure", lambda x, y: _leq(A[x] & A[y], A[x | y]), seed, samples)
    if not res.holds:
        base = validate_eaa(alg, seed, samples)
        res.note = ("downstream of failed axioms: " + ", ".join(base.failed())) if not base.ok else \
            "inconsistency: the axioms pass but join closure fails"
    return res


# -- frames to algebras ------------------------------------------------------------

def family_algebra(fam: EventFamily) -> FiniteBooleanAlgebra:
    p = fam.poset
    labels = []
    for a in fam.atoms:
        names = [p.labels[w] for k, w in enumerate(p.minimals) if a >> k & 1]
        labels.append(names[0] if len(names) == 1 else "{" + ",".join(names) + "}")
    return FiniteBooleanAlgebra(fam.k, labels)


def frame_to_algebra(frame: Frame, agent=None) -> EpistemicAwarenessAlgebra:
    """The algebra of the frame's events with the frame's A, K and B as tables."""
    a = _agent(frame, agent)
    if not a.epistemic:
        raise FrameError(f"agent {a.name!r} has no know/believe tables")
    fam = frame.events
    if fam.size > TABLE_LIMIT:
        raise FrameError(f"family of {fam.size} events is too large for explicit tabulation")
    tabs = family_tables(frame, a)
    out = {}
    for key in ("A", "K", "B"):
        els = fam.masks_to_elements(tabs.masks[key])
        if (~tabs.regular[key]).any() or (els < 0).any():
            raise FrameError(f"the family is not closed under {key}; validate the frame first")
        out[key] = els
    return EpistemicAwarenessAlgebra(family_algebra(fam), out["A"], out["K"], out["B"], agent=a.name,
                                     name=f"{frame.name}+" if frame.name else "")


def awareness_subalgebra(frame: Frame, agent, w) -> EventFamily:
    """The events the agent is aware of at ``w``, as a Boolean subfamily."""
    a = _agent(frame, agent)
    p = frame.poset
    w = p.id(w)
    fam = frame.events
    tabs = family_tables(frame, a)
    aware_at = (np.uint64(p.below_mask[w]) & ~tabs.masks["A"]) == 0
    chosen = np.flatnonzero(aware_at)
    if fam.size - 1 not in set(chosen.tolist()):
        raise AssertionError("awareness subalgebra misses Ω")
    # closed under meets and negation iff it is exactly the unions of its minimal nonzero members
    nonzero = [int(e) for e in chosen if e]
    atoms = [e for e in nonzero if not any(f != e and (f & ~e) == 0 for f in nonzero)]
    acc = 0
    for t in atoms:
        if acc & t:
            raise AssertionError("awareness subalgebra is not closed under meets")
        acc |= t
    if acc != fam.size - 1 or len(chosen) != 1 << len(atoms):
        raise AssertionError("awareness subalgebra is not closed under meets and negation")
    return EventFamily(p, [fam.mask_of(t) for t in atoms])


# -- isomorphism -----------------------------------------------------------

def _fingerprint(alg: EpistemicAwarenessAlgebra, t: int) -> tuple:
    top = alg.top
    out = []
    for T in (alg.A, alg.K, alg.B):
        for x in (t, top ^ t):
            out += [bin(int(T[x])).count("1"), bool(T[x] & t)]
    return tuple(out)


def _map_elements(perm: list[int], n_atoms: int) -> np.ndarray:
    """Element bijection induced by the atom bijection ``perm`` (atom j -> atom perm[j])."""
    els = np.arange(1 << n_atoms, dtype=np.int64)
    out = np.zeros_like(els)
    for j, pj in enumerate(perm):
        out |= np.where((els >> j) & 1, 1 << pj, 0)
    return out


def _commutes(x: EpistemicAwarenessAlgebra, y: EpistemicAwarenessAlgebra, f: np.ndarray) -> bool:
    return all(np.array_equal(f[tx], ty[f]) for tx, ty in ((x.A, y.A), (x.K, y.K), (x.B, y.B)))


def eaa_isomorphic(x: EpistemicAwarenessAlgebra, y: EpistemicAwarenessAlgebra, prefer: np.ndarray | None = None):
    """An element bijection preserving order and commuting with A, K, B, or None.

    Order isomorphisms of finite Boolean algebras come from bijections of
    atoms, so the search runs over atom matchings with equal fingerprints.
    """
    if x.base.n_atoms != y.base.n_atoms:
        return None
    k = x.base.n_atoms
    if prefer is not None:
        prefer = np.asarray(prefer, dtype=np.int64)
        atoms_ok = all(bin(int(prefer[1 << j])).count("1") == 1 for j in range(k))
        if atoms_ok:
            perm = [int(prefer[1 << j]).bit_length() - 1 for j in range(k)]
            f = _map_elements(perm, k)
            if np.array_equal(f, prefer) and _commutes(x, y, f):
                return f
    fx = [_fingerprint(x, 1 << j) for j in range(k)]
    fy = [_fingerprint(y, 1 << j) for j in range(k)]
    if sorted(fx) != sorted(fy):
        return None
    perm = [-1] * k
    used = [False] * k

    def partial_ok(depth: int) -> bool:
        # check elements built from the first depth+1 atoms that contain atom `depth`
        dom = (1 << (depth + 1)) - 1
        img = 0
        for j in range(depth + 1):
            img |= 1 << perm[j]
        sub = np.arange(1 << depth, dtype=np.int64) | (1 << depth)
        m = _map_elements(perm[:depth + 1] + [0] * (k - depth - 1), k)
        for tx, ty in ((x.A, y.A), (x.K, y.K), (x.B, y.B)):
            lhs = m[tx[sub] & dom]
            rhs = ty[m[sub]] & img
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def search(depth: int):
        if depth == k:
            f = _map_elements(perm, k)
            return f if _commutes(x, y, f) else None
        for c in range(k):
            if used[c] or fy[c] != fx[depth]:
                continue
            perm[depth] = c
            used[c] = True
            if partial_ok(depth):
                found = search(depth + 1)
                if found is not None:
                    return found
            used[c] = False
            perm[depth] = -1
        return None

    if k == 0:
        f = np.zeros(1, dtype=np.int64)
        return f if _commutes(x, y, f) else None
    return search(0)


# -- enumeration -----------------------------------------------------------

def enumerate_eaas(n_atoms: int) -> list[EpistemicAwarenessAlgebra]:
    """All epistemic awareness algebras on the Boolean algebra with ``n_atoms`` atoms.

    Tables are enumerated exhaustively in stages: A tables satisfying the
    A-only axioms, K and B tables satisfying their single-operator axioms,
    then every triple is checked against the full axiom list.
    """
    if n_atoms > 2:
        raise ValueError("exhaustive enumeration is only feasible for at most 2 atoms")
    base = FiniteBooleanAlgebra(n_atoms)
    n = base.size
    top = base.top
    tables = [np.array(t, dtype=np.int64) for t in itertools.product(range(n), repeat=n)]
    els = np.arange(n)

    def agglomerative(T):
        return all(_leq(T[a] & T[b], T[a & b]) for a in range(n) for b in range(n))

    a_ok = [T for T in tables if T[top] == top and (T[els] == T[top ^ els]).all() and agglomerative(T)]
    k_ok = [T for T in tables if T[top] == top and _leq(T[els], els).all() and agglomerative(T)]
    b_ok = [T for T in tables if T[0] == 0 and agglomerative(T)]
    out = []
    for A in a_ok:
        ks = [K for K in k_ok if _leq(K[els], A[els]).all()]
        bs = [B for B in b_ok if _leq(B[els], A[els]).all()]
        for K in ks:
            for B in bs:
                alg = EpistemicAwarenessAlgebra(base, A, K, B)
                if is_eaa(alg):
                    out.append(alg)
    return out
