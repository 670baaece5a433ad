"""Brute-force reference implementations used as test oracles.

Everything here works on plain Python sets over an explicit order
relation ``le`` (a set of pairs ``(x, y)`` meaning x refines y) and
shares no code with the package.
"""
from __future__ import annotations

import itertools


def order_pairs(poset) -> set[tuple[int, int]]:
    n = poset.n
    return {(x, y) for x in range(n) for y in range(n) if poset.leq[x, y]}


def below(le, n, x):
    return {y for y in range(n) if (y, x) in le}


def interior(le, n, s):
    return {x for x in range(n) if below(le, n, x) <= s}


def closure(le, n, s):
    return {x for x in range(n) if below(le, n, x) & s}


def down(le, n, s):
    return {y for x in s for y in below(le, n, x)}


def rho(le, n, s):
    return interior(le, n, closure(le, n, down(le, n, s)))


def is_ro(le, n, s):
    return rho(le, n, set(s)) == set(s)


def ro_sets(le, n):
    return [set(c) for r in range(n + 1) for c in itertools.combinations(range(n), r) if is_ro(le, n, set(c))]


def maxima(le, n, s):
    return {x for x in s if not any(y != x and (x, y) in le for y in s)}


def ro_neg(le, n, e):
    return interior(le, n, set(range(n)) - set(e))


def ro_join(le, n, e, f):
    return rho(le, n, set(e) | set(f))


# -- operators ------------------------------------------------------------

def aware(le, n, aw, e):
    """ω is in A(E) iff at every refinement ω′ and every ν aware at ω′,
    the maxima of E∩↓ν and ¬E∩↓ν are all aware at ω′."""
    e = set(e)
    ne = ro_neg(le, n, e)
    out = set()
    for w in range(n):
        ok = True
        for w2 in below(le, n, w):
            for v in aw[w2]:
                dv = below(le, n, v)
                if not (maxima(le, n, e & dv) | maxima(le, n, ne & dv)) <= aw[w2]:
                    ok = False
        if ok:
            out.add(w)
    return out


def box(rel, n, e):
    return {w for w in range(n) if rel[w] <= set(e)}


def know(le, n, aw, kn, e):
    return box(kn, n, e) & aware(le, n, aw, e)


def sets_of(matrix):
    return [set(int(j) for j in range(matrix.shape[1]) if matrix[i, j]) for i in range(matrix.shape[0])]


# -- frame conditions (family = all regular open sets) ----------------------------

def awareness_conditions(le, n, aw, m) -> dict[str, bool]:
    ros = ro_sets(le, n)
    ro_keys = {frozenset(s) for s in ros}
    out = {"nonvacuity": all(m in aw[w] for w in range(n))}
    out["expressibility"] = all(frozenset(below(le, n, v)) in ro_keys for w in range(n) for v in aw[w])
    out["persistence"] = all(aw[w] <= aw[w2] for w in range(n) for w2 in below(le, n, w))
    out["refinability"] = all(
        any(all(v not in aw[w3] for w3 in below(le, n, w2)) for w2 in below(le, n, w))
        for w in range(n) for v in range(n) if v not in aw[w])
    ok = True
    for w in range(n):
        for v in aw[w]:
            dv = below(le, n, v)
            good = [e for e in ros if maxima(le, n, e & dv) <= aw[w]]
            for e, f in itertools.combinations_with_replacement(good, 2):
                if not maxima(le, n, ro_join(le, n, e, f) & dv) <= aw[w]:
                    ok = False
    out["joinability"] = ok
    return out


def finite_join_condition(le, n, aw) -> bool:
    """The possibility-tuple form: for ν aware and aware ν1..νk below ν, the maxima of
    (↓ν1 ⊔ ... ⊔ ↓νk) ∩ ↓ν are aware (tuples of every size)."""
    for w in range(n):
        for v in aw[w]:
            dv = below(le, n, v)
            inside = sorted(u for u in aw[w] if u in dv)
            for r in range(1, len(inside) + 1):
                for tup in itertools.combinations(inside, r):
                    j = rho(le, n, set().union(*(below(le, n, u) for u in tup)))
                    if not maxima(le, n, j & dv) <= aw[w]:
                        return False
    return True


def standard(le, n, aw) -> bool:
    return all(w in aware(le, n, aw, below(le, n, v)) for w in range(n) for v in aw[w])
