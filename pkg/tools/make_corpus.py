"""Regenerate the corpus frame documents in canonical form.

Usage: python3 tools/make_corpus.py  (writes src/possframes/corpus/*.frame)
"""
from __future__ import annotations

import pathlib

from possframes.corpus import golden_reports
from possframes.documents import frame_from_document, parse_frame, serialize_frame
from possframes.poset import build_poset

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "possframes" / "corpus"


def tree_doc(name, children):
    labels, refines = [], []
    def walk(x):
        labels.append(x)
        for c in children.get(x, []):
            refines.append([c, x])
            walk(c)
    walk("m")
    return labels, refines


def down(p, xs):
    return [p.labels[i] for i in sorted(p.down_closure(xs))]


def watson():
    labels = ["m", "b", "bbar"]
    refines = [["b", "m"], ["bbar", "m"]]
    aware = {"m": ["m"], "b": labels, "bbar": ["m"]}
    know = {"m": labels, "b": ["b"], "bbar": labels}
    know2 = {"m": labels, "b": ["b"], "bbar": ["bbar"]}
    return {"format_version": 1, "kind": "frame", "name": "watson", "possibilities": labels,
            "refines": refines, "events": "all-regular-open", "base_events": {"Barks": ["b"]},
            "agents": {"i": {"aware": aware, "know": know, "believe": know},
                       "i2": {"aware": aware, "know": know2, "believe": know2}}}


def game():
    rows_g = ["lu", "ld", "ru", "rd"]
    rows_g3 = ["lu3", "lm3", "ld3", "ru3", "rm3", "rd3"]
    ch = {"m": ["g", "g3"], "g": ["l", "r"], "l": ["lu", "ld"], "r": ["ru", "rd"],
          "g3": ["l3", "r3"], "l3": ["lu3", "lm3", "ld3"], "r3": ["ru3", "rm3", "rd3"]}
    for row in rows_g + rows_g3:
        ch[row] = [f"{row}.blue", f"{row}.black"]
    labels, refines = tree_doc("game", ch)
    p = build_poset(labels, refines)
    red = ["m", "g", "l", "lu", "ld", "r", "ru", "rd", "g3"]
    blue = [f"{r}.blue" for r in rows_g] + ["l3", "r3"] + rows_g3 + [f"{r}.blue" for r in rows_g3]
    black = [f"{r}.black" for r in rows_g + rows_g3]
    assert sorted(red + blue + black) == sorted(labels) and len(labels) == 37
    aware = {w: (labels if w in black else red) for w in labels}
    # the example only specifies awareness; an uninformed agent completes it to an epistemic frame
    noinfo = {w: labels for w in labels}
    base = {"Up": down(p, ["lu", "ru"]), "Down": down(p, ["ld", "rd"]), "Up3": down(p, ["lu3", "ru3"]),
            "Middle3": down(p, ["lm3", "rm3"]), "Down3": down(p, ["ld3", "rd3"])}
    return {"format_version": 1, "kind": "frame", "name": "game", "possibilities": labels, "refines": refines,
            "events": "all-regular-open", "base_events": base, "agents": {"i": {"aware": aware, "know": noinfo, "believe": noinfo}},
            "groups": {"red": red, "blue": blue, "black": black}}


def overconfident():
    ch = {"m": ["p", "np"], "p": ["pb", "pnb"], "pb": ["pbu", "pbnu"], "pnb": ["pnbu", "pnbnu"],
          "np": ["npb", "npnb"], "npb": ["npbu", "npbnu"], "npnb": ["npnbu", "npnbnu"],
          "npbu": ["f1", "nf1"], "npbnu": ["f2", "nf2"], "npnbu": ["f3", "nf3"], "npnbnu": ["f4", "nf4"]}
    labels, refines = tree_doc("overconfident", ch)
    p = build_poset(labels, refines)
    red = ["m", "p", "pb", "pnb", "np", "npb", "npnb"]
    square, diamond = ["pb", "npb"], ["pnb", "npnb"]
    blue = ["pbu", "npbu", "f1", "nf1"]
    black = ["pbnu", "npbnu", "f2", "nf2"]
    green = ["pnbu", "npnbu", "f3", "nf3"]
    gray = ["pnbnu", "npnbnu", "f4", "nf4"]
    assert sorted(red + blue + black + green + gray) == sorted(labels) and len(labels) == 23
    aware = {w: (labels if w in black + gray else red) for w in labels}
    know, bel = {}, {}
    for w in labels:
        if w in square + blue:
            bel[w], know[w] = down(p, ["pb"]), down(p, [w, "pb"])
        elif w in black:
            bel[w], know[w] = ["pbnu"], down(p, [w, "pbnu"])
        elif w in diamond + green:
            bel[w] = know[w] = down(p, ["pnb", "npnb"])
        elif w in gray:
            bel[w] = know[w] = ["pnbnu", "npnbnu", "f4", "nf4"]
        elif w == "p":
            bel[w] = know[w] = down(p, ["p", "npnb"])
        else:  # np, m
            bel[w], know[w] = down(p, ["p", "npnb"]), labels
    return {"format_version": 1, "kind": "frame", "name": "overconfident", "possibilities": labels,
            "refines": refines, "events": "all-regular-open",
            "base_events": {"Profit": down(p, ["p"]), "Fraud": ["f1", "f2", "f3", "f4"]},
            "agents": {"i": {"aware": aware, "know": know, "believe": bel}},
            "groups": {"red": red, "square": square, "diamond": diamond, "blue": blue, "black": black,
                       "green": green, "gray": gray}}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for build in (watson, game, overconfident):
        doc = build()
        text = serialize_frame(frame_from_document(doc))
        (OUT / f"{doc['name']}.frame").write_text(text, encoding="utf-8")
        print("wrote", doc["name"])
        for fname, report in golden_reports(parse_frame(text, validate=False)).items():
            (OUT / fname).write_text(report, encoding="utf-8")
            print("wrote", fname)


if __name__ == "__main__":
    main()
