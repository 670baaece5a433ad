import copy

import numpy as np
import pytest

from framegen import random_frames
from possframes.algebras import enumerate_eaas, frame_to_algebra
from possframes.audit import (DEFAULT_REQUIRED, SUITES, LazyFrameView, TableView, as_view,
                              audit, check_converse_plausibility, check_dekel_consistency, check_dlr, check_fitch,
                              check_hms_principles, check_introspection_sufficient, check_moore, check_stalnaker,
                              fitch_record, frame_view)
from possframes.documents import frame_from_document, frame_to_document
from possframes.events import all_regular_open
from possframes.frames import build_frame
from possframes.poset import build_poset


def element(frame, e):
    return frame.events.element_of(e.mask)


def full_awareness(frame):
    doc = copy.deepcopy(frame_to_document(frame))
    for tabs in doc["agents"].values():
        tabs["aware"] = {w: list(frame.poset.labels) for w in frame.poset.labels}
    return frame_from_document(doc)


def statuses(rep):
    return {v.id: v.status for v in rep.verdicts}


# -- DLR ---------------------------------------------------------------------------

def test_watson_dlr(watson):
    rep = check_dlr(watson, agent="i")
    s = statuses(rep)
    assert s["plausibility"] == "fails"
    assert rep["plausibility"].witness == {"events": [["bbar"]], "possibility": "bbar"}
    for law in ("au_introspection", "ku_introspection", "necessitation", "double_negation", "nontrivial_plausibility"):
        assert s[law] == "holds", law
    assert rep.required_ok
    dek = rep.conclusions["dekel"]
    assert dek["nontrivial_unawareness"] and dek["consistent"] and dek["failing_dlr_axioms"] == ["plausibility"]


def test_watson_plausibility_failure_is_at_bbar_only(watson):
    v = frame_view(watson, "i")
    for x in range(v.size):
        xs = np.array([x])
        lhs = v.U(xs)[0]
        rhs = (v.neg(v.K(xs)) & v.neg(v.K(v.neg(v.K(xs)))))[0]
        bad = lhs & ~rhs
        barks = element(watson, watson.named["Barks"])
        assert bad == (0 if x != v.top ^ barks else v.top ^ barks)


def test_overconfident_dlr(overconfident):
    rep = check_dlr(overconfident, agent="i")
    assert rep["plausibility"].fails
    assert rep.required_ok
    assert rep["monotonicity"].fails and not rep["monotonicity"].required
    assert rep.conclusions["dekel"]["consistent"]


def test_full_awareness_dlr(watson, overconfident):
    for frame in (watson, overconfident):
        full = full_awareness(frame)
        rep = check_dlr(full, agent="i")
        assert all(rep[law].status == "holds" for law in
                   ("au_introspection", "plausibility", "ku_introspection", "necessitation", "double_negation"))
        dek = rep.conclusions["dekel"]
        assert not dek["nontrivial_unawareness"] and dek["consistent"]


def test_dekel_flags_corrupted_report(watson):
    rep = check_dlr(watson, agent="i")
    for v in rep.verdicts:
        v.status = "holds"
    out = check_dekel_consistency(rep, unawareness={"found": True})
    assert not out["consistent"] and "flag" in out
    with pytest.raises(ValueError):
        check_dekel_consistency(rep)


def test_dekel_reports_unchecked_axioms():
    p = build_poset(["m", "a", "b"], [("a", "m"), ("b", "m")])
    f = build_frame(p, all_regular_open(p), {"i": {"aware": {"m": ["m"], "a": ["m"], "b": ["m"]}}})
    rep = check_dlr(f)
    assert rep["plausibility"].status == "skipped"
    assert "plausibility" in rep.conclusions["dekel"]["unchecked"]


# -- converse plausibility and overconfidence -----------------------------------------------

def test_overconfidence_in_profit(overconfident):
    f = overconfident
    v = frame_view(f, "i")
    x = np.array([element(f, f.named["Profit"])])
    states = int((v.B(x) & v.B(v.K(x)) & v.neg(v.K(x)))[0])
    names = set(f.poset.names(f.events.event(states).members))
    assert {"f1", "nf1", "f2", "nf2"} <= names
    assert not names & {"p", "pb", "pbu", "pbnu"}
    rep = check_converse_plausibility(f, agent="i")
    assert rep["no_overconfidence"].fails
    assert rep.conclusions["overconfidence"]["events"] > 0
    assert rep["belief_requires_awareness"].status == "holds"
    assert rep["noncontradictory_belief_knowledge"].status == "holds"
    # f2 is aware of Profit and still overconfident in it
    assert rep["believed_knowledge_implies_unawareness"].fails
    assert rep["converse_plausibility"].fails


def test_no_overconfidence_in_watson(watson):
    rep = check_converse_plausibility(watson, agent="i")
    assert rep.conclusions["overconfidence"]["events"] == 0
    assert rep["no_overconfidence"].status == "holds"


def test_full_awareness_knowledge_is_belief(watson):
    rep = check_converse_plausibility(full_awareness(watson), agent="i2")
    assert rep.conclusions["overconfidence"]["events"] == 0


# -- Fitch and Moore ------------------------------------------------------------------------

def test_fitch_fraud(overconfident):
    f = overconfident
    rec, red, k, u = fitch_record(f, element(f, f.named["Fraud"]), agent="i")
    assert sorted(f.poset.names(f.events.event(red).members)) == ["f2", "f4"]
    assert f.events.event(u).members == f.group("blue") | f.group("green")
    assert k == 0 and rec.live_counterexample
    rep = check_fitch(f, agent="i")
    assert rep["fitch_aware"].fails and rep["fitch_unknowable"].status == "holds"
    assert rep.conclusions["fitch"]["second_half_plausibility_refuted"]


def test_fitch_top_reduces_to_empty(watson, overconfident):
    for f in (watson, overconfident):
        rec, red, k, u = fitch_record(f, f.events.size - 1, agent="i")
        assert red == k == u == 0 and not rec.live_counterexample


def test_fitch_watson_barks(watson):
    rec = check_fitch(watson, element(watson, watson.named["Barks"]), agent="i")
    # Barks ⊓ A(Barks) ⊓ ¬K(Barks) = {b} ∩ ¬{b}
    assert rec.reduced == [] and rec.unaware == []


def test_moore(watson, overconfident):
    rep = check_moore(watson, agent="i")
    assert rep["no_moorean_beliefs"].status == "holds"
    rep = check_moore(overconfident, agent="i")
    assert rep["no_moorean_beliefs"].status == "holds"
    assert rep["moore_aware"].fails
    assert rep.conclusions["moore"]["belief_plausibility_refuted"]


def test_moore_trivial_belief_table():
    tabs = {"A": [3, 3, 3, 3], "K": [0, 1, 2, 3], "B": [0, 0, 0, 3]}
    v = TableView(tabs, lambda x: [x])
    rep = check_moore(v)
    assert rep["no_moorean_beliefs"].status == "holds"


# -- HMS and Stalnaker ------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["watson", "overconfident"])
def test_hms_and_stalnaker_hold(name, request):
    f = request.getfixturevalue(name)
    rep = check_hms_principles(f, agent="i")
    assert all(v.status == "holds" for v in rep.verdicts), statuses(rep)
    rep = check_stalnaker(f, agent="i")
    assert all(v.status == "holds" for v in rep.verdicts), statuses(rep)
    assert len(rep.verdicts) == 4


def test_hms_failure_has_witness():
    # x is fully aware and the agent knows nothing, so K(A({x})) is empty while A({x}) = {x}
    p = build_poset(["m", "x", "y", "z"], [("x", "m"), ("y", "m"), ("z", "m")])
    all_ = ["m", "x", "y", "z"]
    aw = {"m": ["m"], "x": all_, "y": ["m"], "z": ["m"]}
    kn = {w: all_ for w in all_}
    f = build_frame(p, all_regular_open(p), {"i": {"aware": aw, "know": kn, "believe": kn}})
    rep = check_hms_principles(f)
    assert statuses(rep) == {"ak_self_reflection": "holds", "aa_self_reflection": "holds", "a_introspection": "fails"}
    assert rep["a_introspection"].witness == {"events": [["x"]], "possibility": "x"}


# -- introspection -----------------------------------------------------------------------------

def test_introspection_records(watson, overconfident):
    rec = check_introspection_sufficient(watson, "i")
    assert rec.condition and rec.principle
    rec = check_introspection_sufficient(overconfident, "i")
    assert rec.principle
    for f in random_frames(13, 30):
        assert check_introspection_sufficient(f, "i").sufficiency_respected


def test_introspection_condition_fails_principle_holds():
    # v4 is aware of everything below m; its refinement v1 has the same row, but v0 under v3 does not occur
    labels = ["v0", "v1", "v2", "v3", "v4", "m"]
    p = build_poset(labels, [("v0", "v3"), ("v1", "v4"), ("v2", "m"), ("v3", "m"), ("v4", "m")])
    wide = ["v2", "v3", "v4", "m"]
    aw = {"v0": ["m"], "v1": wide, "v2": ["m"], "v3": ["m"], "v4": wide, "m": ["m"]}
    f = build_frame(p, all_regular_open(p), {"i": {"aware": aw}})
    rec = check_introspection_sufficient(f)
    assert (rec.condition, rec.principle) == (False, True)
    assert rec.sufficiency_respected


# -- modes and views ------------------------------------------------------------------------------

def test_sampled_reproducible(overconfident):
    a = audit(overconfident, mode="sampled", seed=9, samples=500, agent="i")
    b = audit(overconfident, mode="sampled", seed=9, samples=500, agent="i")
    assert a.to_dict() == b.to_dict()
    assert all(v.seed == 9 and v.n == 500 for v in a.verdicts if v.status == "sampled-holds")


def test_exhaustive_and_sampled_agree(overconfident):
    ex = audit(overconfident, agent="i")
    sa = audit(overconfident, mode="sampled", seed=2, samples=20000, agent="i")
    for v in ex.verdicts:
        w = sa[v.id]
        if v.status == "holds":
            assert w.status in ("holds", "sampled-holds")
        elif v.fails:
            # a sample may miss a rare failure, but never reports one that is absent
            assert w.status in ("fails", "sampled-holds")
    for v in sa.verdicts:
        if v.fails:
            assert ex[v.id].fails


def test_frame_and_algebra_views_agree(watson, overconfident):
    for f in (watson, overconfident):
        a = audit(f, agent="i").verdicts
        b = audit(frame_to_algebra(f, "i")).verdicts
        assert [v.status for v in a] == [v.status for v in b]


def test_lazy_view_agrees_with_tables(watson):
    lazy = LazyFrameView(watson, "i")
    table = frame_view(watson, "i")
    xs = np.arange(4)
    for key in ("A", "K", "B"):
        assert np.array_equal(lazy.apply(key, xs), table.apply(key, xs))
    assert statuses(audit(lazy)) == statuses(audit(table))


def test_game_audit_modes(game):
    rep = audit(game, suites=("dlr",), agent="i")
    assert rep.events == 2 ** 20
    assert rep["plausibility"].status == "fails"
    assert rep["au_introspection"].mode == "exhaustive"
    assert rep["monotonicity"].mode == "sampled"
    assert rep.required_ok and rep.conclusions["dekel"]["consistent"]


def test_algebra_audits():
    for alg in enumerate_eaas(2):
        rep = audit(alg)
        assert rep.conclusions["dekel"]["consistent"]
        assert rep["necessitation"].status == "holds"


def test_suites_and_errors(watson):
    rep = audit(watson, suites=("hms", "dlr"), agent="i")
    assert [v.suite for v in rep.verdicts][0] == "dlr"
    with pytest.raises(ValueError):
        audit(watson, suites=("nope",), agent="i")
    with pytest.raises(TypeError):
        as_view(42)
    assert set(SUITES) == {"dlr", "converse", "fitch", "moore", "hms", "stalnaker"}


def test_report_serialization(watson):
    d = check_dlr(watson, agent="i").to_dict()
    assert d["format_version"] == 1 and d["kind"] == "audit-report"
    assert d["required"] == list(DEFAULT_REQUIRED)


def test_every_failure_has_a_witness(watson, overconfident, game):
    for f in (watson, overconfident):
        for v in audit(f, agent="i").verdicts:
            if v.fails:
                assert v.witness and v.witness["events"]
