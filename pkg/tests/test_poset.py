import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from possframes.poset import PosetError, build_poset, separative_quotient
from possframes.events import all_regular_open


@pytest.fixture
def tree():
    return build_poset(["m", "b", "bbar"], [("b", "m"), ("bbar", "m")])


@pytest.fixture
def chain():
    return build_poset(["w", "v"], [("w", "v")])


def test_watson_tree(tree):
    assert tree.labels[tree.maximum] == "m"
    assert set(tree.names(tree.minimals)) == {"b", "bbar"}


def test_singleton():
    p = build_poset(["x"], [])
    assert p.maximum == 0 and p.minimals == (0,)


def test_cycle_rejected():
    with pytest.raises(PosetError, match="cycle"):
        build_poset(["a", "b"], [("a", "b"), ("b", "a")])


def test_unknown_label_rejected():
    with pytest.raises(PosetError, match="unknown"):
        build_poset(["a"], [("a", "z")])


def test_duplicate_label_rejected():
    with pytest.raises(PosetError, match="duplicate"):
        build_poset(["a", "a"], [])


def test_transitive_closure():
    p = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert p.refines("a", "c") and not p.refines("c", "a")


def test_down_closure(tree):
    assert tree.down_closure(["m"]) == tree.all
    assert tree.names(tree.down_closure(["b"])) == ["b"]
    assert tree.down_closure([]) == frozenset()


def test_compatibility(tree):
    assert tree.compatible("b", "m")
    assert not tree.compatible("b", "bbar")
    assert all(tree.compatible(w, w) for w in range(tree.n))


def test_interior_and_closure(tree):
    assert set(tree.names(tree.interior(["b", "m"]))) == {"b"}
    assert set(tree.names(tree.closure(["b"]))) == {"b", "m"}
    assert tree.interior(tree.all) == tree.all


def test_regularize(tree, chain):
    assert set(chain.names(chain.regularize(["w"]))) == {"w", "v"}
    assert tree.names(tree.regularize(["b"])) == ["b"]
    assert tree.regularize([]) == frozenset()


def test_maximal_elements(tree):
    assert set(tree.names(tree.maximal_elements(["b", "bbar"]))) == {"b", "bbar"}
    assert tree.names(tree.maximal_elements(tree.all)) == ["m"]
    assert tree.maximal_elements([]) == frozenset()


def test_separativity(tree, chain):
    assert not chain.is_separative()
    assert tree.is_separative()
    assert build_poset(list("abc"), []).is_separative()


def test_quotient_of_chain(chain):
    q, cls = separative_quotient(chain)
    assert q.n == 1 and cls == (0, 0)


def test_quotient_of_tree_is_identity(tree):
    q, cls = separative_quotient(tree)
    assert cls == (0, 1, 2) and q.labels == tree.labels
    assert np.array_equal(q.leq, tree.leq)


# -- properties on random posets ------------------------------------------------

posets = st.builds(
    lambda n, bits: build_poset([f"w{i}" for i in range(n)],
                                [(f"w{i}", f"w{j}") for k, (i, j) in enumerate(
                                    (i, j) for i in range(n) for j in range(i + 1, n)) if bits >> k & 1]),
    st.integers(1, 7), st.integers(0, 2 ** 21 - 1))


@settings(max_examples=60, deadline=None)
@given(posets, st.data())
def test_regularize_is_a_closure_operator(p, data):
    s = frozenset(data.draw(st.sets(st.integers(0, p.n - 1))))
    t = s | frozenset(data.draw(st.sets(st.integers(0, p.n - 1))))
    rs = p.regularize(s)
    assert p.down_closure(s) <= rs
    assert rs <= p.regularize(t)
    assert p.regularize(rs) == rs
    assert p.is_regular_open(rs)


@settings(max_examples=60, deadline=None)
@given(posets, st.data())
def test_nucleus_law_on_downsets(p, data):
    e = p.down_closure(data.draw(st.sets(st.integers(0, p.n - 1))))
    f = p.down_closure(data.draw(st.sets(st.integers(0, p.n - 1))))
    assert p.regularize(e) & p.regularize(f) <= p.regularize(e & f)


@settings(max_examples=60, deadline=None)
@given(posets, st.data())
def test_down_closure_idempotent_and_monotone(p, data):
    s = frozenset(data.draw(st.sets(st.integers(0, p.n - 1))))
    t = s | frozenset(data.draw(st.sets(st.integers(0, p.n - 1))))
    d = p.down_closure(s)
    assert p.down_closure(d) == d
    assert d <= p.down_closure(t)


@settings(max_examples=40, deadline=None)
@given(posets)
def test_quotient_is_separative_with_isomorphic_ro_algebra(p):
    q, cls = separative_quotient(p)
    assert q.is_separative()
    le, qle = O.order_pairs(p), O.order_pairs(q)
    ro_p = O.ro_sets(le, p.n)
    ro_q = {frozenset(s) for s in O.ro_sets(qle, q.n)}
    assert len(ro_p) == len(ro_q)
    # E ↦ the classes of its members is a bijection between the two algebras
    images = {frozenset(cls[w] for w in e) for e in ro_p}
    assert images == ro_q
    # and it is order-preserving both ways
    for e in ro_p:
        for f in ro_p:
            ie = frozenset(cls[w] for w in e)
            jf = frozenset(cls[w] for w in f)
            assert (e <= f) == (ie <= jf)
    assert all_regular_open(q).size == len(ro_q)
