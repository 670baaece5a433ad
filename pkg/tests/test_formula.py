import pytest
from hypothesis import given, settings, strategies as st

from possframes.formula import (And, Atom, Bot, Common, FormulaError, FormulaSyntaxError, Modal, Not, Or, Top,
                                eval_formula, parse_formula, query, to_text)
from possframes.frames import aware_op, common_op, know_op, unaware_op


def test_parse_shapes():
    assert parse_formula("~K.i(U.i(Barks))") == Not(Modal("K", "i", Modal("U", "i", Atom("Barks"))))
    assert parse_formula("Up | Middle | Down") == Or(Or(Atom("Up"), Atom("Middle")), Atom("Down"))
    assert parse_formula("a | b & ~c") == Or(Atom("a"), And(Atom("b"), Not(Atom("c"))))
    assert parse_formula("(a | b) & c") == And(Or(Atom("a"), Atom("b")), Atom("c"))
    assert parse_formula("CK.{i,j}(TOP)") == Common("CK", ("i", "j"), Top())
    assert parse_formula("CB.i(BOT)") == Common("CB", ("i",), Bot())
    assert parse_formula("LB.i2(x)") == Modal("LB", "i2", Atom("x"))


def test_syntax_errors():
    with pytest.raises(FormulaSyntaxError, match="end of input"):
        parse_formula("A.i(")
    with pytest.raises(FormulaSyntaxError, match="position 2"):
        parse_formula("a $ b")
    with pytest.raises(FormulaSyntaxError, match="unknown operator"):
        parse_formula("Q.i(a)")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("a b")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("")
    err = None
    try:
        parse_formula("a & (b")
    except FormulaSyntaxError as exc:
        err = exc
    assert err is not None and err.position == 6


# -- round trip ---------------------------------------------------------------

names = st.sampled_from(["Barks", "Up", "x1", "f_2"])
agents = st.sampled_from(["i", "j", "i2"])
formulas = st.recursive(
    st.one_of(names.map(Atom), st.just(Top()), st.just(Bot())),
    lambda sub: st.one_of(
        sub.map(Not),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Modal, st.sampled_from(["A", "U", "K", "B", "LK", "LB"]), agents, sub),
        st.builds(Common, st.sampled_from(["CK", "CB"]),
                  st.lists(agents, min_size=1, max_size=3, unique=True).map(tuple), sub),
    ),
    max_leaves=12,
)


@settings(max_examples=300)
@given(formulas)
def test_print_parse_round_trip(f):
    text = to_text(f)
    assert parse_formula(text) == f
    assert to_text(parse_formula(text)) == text


# -- evaluation ------------------------------------------------------------------

def test_watson_queries(watson):
    assert eval_formula(watson, "~K.i(U.i(Barks))").is_top
    assert query(watson, "~K.i(U.i(Barks))", "valid")
    assert query(watson, "A.i(Barks)", "holds_at", at="b")
    assert not query(watson, "A.i(Barks)", "holds_at", at="bbar")
    assert query(watson, "U.i(Barks)", "holds_at", at="bbar")
    assert query(watson, "Barks | ~Barks")
    assert query(watson, "K.i(Barks)", "subset", other="Barks")
    assert query(watson, "A.i(Barks)", "equal", other="A.i(~Barks)")
    assert not query(watson, "Barks", "equal", other="TOP")


def test_evaluation_delegates_to_operators(watson, game):
    barks = watson.named["Barks"]
    assert eval_formula(watson, "U.i(Barks)") == unaware_op(watson, "i", barks)
    assert eval_formula(watson, "K.i2(A.i(Barks))") == know_op(watson, "i2", aware_op(watson, "i", barks))
    assert eval_formula(watson, "CK.{i,i2}(TOP)") == common_op(watson, ["i", "i2"], watson.top)
    mid = eval_formula(game, "Up3 | Middle3 | Down3")
    assert "l3" in mid
    assert eval_formula(game, "BOT").is_empty


def test_resolution_errors(watson):
    with pytest.raises(FormulaError, match="event"):
        eval_formula(watson, "Meows")
    with pytest.raises(FormulaError, match="agent"):
        eval_formula(watson, "K.nobody(Barks)")
    with pytest.raises(FormulaError, match="agent"):
        eval_formula(watson, "CK.{i,nobody}(Barks)")
    with pytest.raises(FormulaError):
        query(watson, "Barks", "holds_at")
    with pytest.raises(FormulaError):
        query(watson, "Barks", "holds_at", at="zz")
    with pytest.raises(FormulaError):
        query(watson, "Barks", "equal")
    with pytest.raises(FormulaError):
        query(watson, "Barks", "sometimes")
