"""Seeded random posets and random valid frames for property tests.

Frames are sampled from a few simple awareness shapes (full awareness
on a regular open region, constant awareness of a generated subalgebra,
and mixtures) and kept only when they pass validation.
"""
from __future__ import annotations

import numpy as np

from possframes.events import all_regular_open
from possframes.frames import Correspondence, build_frame
from possframes.poset import Poset, build_poset
from possframes.validation import validate_frame


def random_poset(rng: np.random.Generator, n: int, density: float | None = None, with_top: bool = False) -> Poset:
    """A random order on ``n`` labelled points (plus a top ``m`` when asked)."""
    density = rng.uniform(0.15, 0.6) if density is None else density
    labels = [f"w{i}" for i in range(n)]
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    if with_top:
        labels.append("m")
        pairs += [(lab, "m") for lab in labels[:-1]]
    return build_poset(labels, pairs)


def _ro_downs(p: Poset) -> list[int]:
    return [v for v in range(p.n) if p.is_regular_open(p.below[v])]


def _random_ro(p: Poset, rng) -> frozenset[int]:
    mins = [w for w in p.minimals if rng.random() < 0.5]
    return p.interior(p.closure(p.down_closure(mins)))


def _subalgebra_aware(p: Poset, gens: list[frozenset[int]], cands: list[int]) -> set[int]:
    """Possibilities ν whose ↓ν is in the algebra generated by ``gens``."""
    blocks = [frozenset(p.minimals)]
    for g in gens:
        gm = frozenset(w for w in p.minimals if w in g)
        blocks = [b for blk in blocks for b in (blk & gm, blk - gm) if b]
    out = set()
    for v in cands:
        mv = frozenset(w for w in p.minimals if w in p.below[v])
        if all(b <= mv or not (b & mv) for b in blocks):
            out.add(v)
    return out


def random_frame(rng: np.random.Generator, n: int | None = None, epistemic: bool = True,
                 attempts: int = 200, name: str = "random"):
    """A frame that passes validation, or None after ``attempts`` tries."""
    for _ in range(attempts):
        size = int(rng.integers(1, 6)) if n is None else n - 1
        p = random_poset(rng, size, with_top=True)
        m = p.maximum
        cands = _ro_downs(p)
        shape = rng.integers(0, 3)
        aw = np.zeros((p.n, p.n), dtype=bool)
        if shape == 0:
            region = _random_ro(p, rng)
            for w in range(p.n):
                aw[w, cands if w in region else [m]] = True
        elif shape == 1:
            gens = [_random_ro(p, rng) for _ in range(int(rng.integers(0, 3)))]
            for w in range(p.n):
                aw[w, sorted(_subalgebra_aware(p, gens, cands))] = True
        else:
            gens = [_random_ro(p, rng)]
            region = _random_ro(p, rng)
            small = sorted(_subalgebra_aware(p, gens, cands))
            for w in range(p.n):
                aw[w, cands if w in region else small] = True
        aw[:, m] = True
        tabs = {"aware": Correspondence(p, aw)}
        if epistemic:
            kn = np.zeros_like(aw)
            for w in range(p.n):
                kn[w, sorted(p.regularize({w}))] = True
            if rng.random() < 0.3:
                kn[:] = True
            be = kn.copy()
            tabs.update(know=Correspondence(p, kn), believe=Correspondence(p, be))
        frame = build_frame(p, all_regular_open(p), {"i": tabs}, name=name)
        if validate_frame(frame).ok:
            return frame
    return None


def random_frames(seed: int, count: int, **kw):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        f = random_frame(rng, name=f"random{len(out)}", **kw)
        if f is not None:
            out.append(f)
    return out
