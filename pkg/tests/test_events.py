import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from possframes.boolean import FiniteBooleanAlgebra
from possframes.events import (Event, NotRegularOpenError, algebra_to_ro_frame, all_regular_open, empty,
                               event_from_minimals, event_from_set, full, generate_family, is_quasi_principal,
                               is_regular_open, join, join_family, leq, meet, minimals_of, neg)
from possframes.poset import build_poset
from test_poset import posets


@pytest.fixture
def tree():
    return build_poset(["m", "b", "bbar"], [("b", "m"), ("bbar", "m")])


def test_regular_open_checks(tree):
    assert is_regular_open(tree, ["b"]).ok
    assert is_regular_open(tree, tree.all).ok
    chain = build_poset(["w", "v"], [("w", "v")])
    res = is_regular_open(chain, ["w"])
    assert not res.ok and res.condition == "refinability" and res.witness == "v"
    res = is_regular_open(tree, ["m"])
    assert not res.ok and res.condition == "persistence"


def test_negation_and_boolean_identities(tree):
    barks = event_from_set(tree, ["b"])
    assert neg(barks).labels() == ["bbar"]
    assert neg(full(tree)) == empty(tree)
    assert join(barks, neg(barks)) == full(tree)
    assert meet(barks, neg(barks)) == empty(tree)


def test_event_from_set_rejects_non_ro(tree):
    with pytest.raises(NotRegularOpenError, match="not persistent"):
        event_from_set(tree, ["m"])


def test_minimal_masks(tree):
    e = event_from_minimals(tree, ["b"])
    assert e.labels() == ["b"]
    assert minimals_of(e) == frozenset({tree.id("b")})
    assert Event(tree, tree.full_mask) == full(tree)
    assert Event(tree, 0).members == frozenset()
    with pytest.raises(ValueError):
        event_from_minimals(tree, ["m"])


def test_join_is_regularized_union(game):
    p = game.poset
    parts = [game.named[k] for k in ("Up3", "Middle3", "Down3")]
    j = join_family(p, parts)
    assert "l3" in j
    assert not any("l3" in e for e in parts)
    union = frozenset().union(*(e.members for e in parts))
    assert union < j.members


def test_generate_family_small(tree):
    fam, named = generate_family(tree, {"Barks": ["b"]})
    assert fam.size == 4
    assert sorted(sorted(e.labels()) for e in fam.events()) == [[], ["b"], ["b", "bbar", "m"], ["bbar"]]
    fam0, _ = generate_family(tree, {})
    assert [sorted(e.labels()) for e in fam0.events()] == [[], ["b", "bbar", "m"]]


def test_generate_family_regularize_flag():
    chain = build_poset(["w", "v"], [("w", "v")])
    with pytest.raises(NotRegularOpenError):
        generate_family(chain, {"X": ["w"]})
    fam, named = generate_family(chain, {"X": ["w"]}, regularize=True)
    assert sorted(named["X"].labels()) == ["v", "w"] and fam.size == 2


def test_game_family_is_implicit(game):
    assert game.events.size == 2 ** 20
    assert game.events.implicit


def test_quasi_principal(watson, overconfident):
    assert is_quasi_principal(watson.events) == (True, None)
    assert is_quasi_principal(overconfident.events)[0]


def test_quasi_principal_game_sampled(game):
    assert is_quasi_principal(game.events, elements=range(0, 2 ** 20, 4099))[0]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_algebra_to_ro_frame(k):
    b = FiniteBooleanAlgebra(k)
    p, fam, image = algebra_to_ro_frame(b)
    assert p.n == 2 ** k - 1 and fam.size == 2 ** k
    for x, y in itertools.product(b.elements(), repeat=2):
        assert image[x & y] == image[x] & image[y]
        assert image[x | y] == image[x] | image[y]
    for x in b.elements():
        assert image[b.neg(x)] == ~image[x]


def test_tree_from_four_element_algebra():
    p, fam, _ = algebra_to_ro_frame(FiniteBooleanAlgebra(2))
    assert p.n == 3 and p.maximum is not None and len(p.minimals) == 2


# -- properties -----------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(posets, st.data())
def test_mask_events_agree_with_definitional_ro(p, data):
    le = O.order_pairs(p)
    s = set(data.draw(st.sets(st.integers(0, p.n - 1))))
    r = O.rho(le, p.n, s)
    mask = event_from_set(p, r).mask
    assert Event(p, mask).members == frozenset(r)
    assert is_regular_open(p, s).ok == O.is_ro(le, p.n, s)


@settings(max_examples=80, deadline=None)
@given(posets, st.data())
def test_boolean_laws(p, data):
    k = p.n_minimals
    e, f, g = (Event(p, data.draw(st.integers(0, 2 ** k - 1))) for _ in range(3))
    le = O.order_pairs(p)
    assert neg(neg(e)) == e
    assert meet(e, neg(e)).is_empty and join(e, neg(e)).is_top
    assert neg(meet(e, f)) == join(neg(e), neg(f))
    assert neg(join(e, f)) == meet(neg(e), neg(f))
    assert leq(e, f) == (meet(e, f) == e)
    assert meet(e, join(f, g)) == join(meet(e, f), meet(e, g))
    assert e.members | f.members <= join(e, f).members
    # operations match the definitional ones
    assert neg(e).members == frozenset(O.ro_neg(le, p.n, e.members))
    assert join(e, f).members == frozenset(O.ro_join(le, p.n, e.members, f.members))
    assert meet(e, f).members == e.members & f.members


@settings(max_examples=60, deadline=None)
@given(posets, st.data())
def test_generated_family_closed(p, data):
    gens = [O.rho(O.order_pairs(p), p.n, set(data.draw(st.sets(st.integers(0, p.n - 1)))))
            for _ in range(data.draw(st.integers(0, 3)))]
    fam, named = generate_family(p, {f"g{i}": g for i, g in enumerate(gens)})
    evs = fam.events()
    masks = {e.mask for e in evs}
    assert p.full_mask in masks
    for e in evs:
        assert (~e).mask in masks
        for f in evs:
            assert (e & f).mask in masks
    assert all(fam.contains(ev) for ev in named.values())
    assert all_regular_open(p).size == 2 ** p.n_minimals
