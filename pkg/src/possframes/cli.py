"""Command-line interface: ``possframes <command> ...``.

Exit codes: 0 when every required check passes, 1 when a check fails,
2 for usage, parse and resolution errors.
"""
from __future__ import annotations

import argparse
import sys

from . import corpus
from .algebras import EpistemicAwarenessAlgebra, check_join_closure, frame_to_algebra, validate_eaa
from .audit import DEFAULT_REQUIRED, DEFAULT_SAMPLES, SUITES, audit
from .documents import DocumentError, dumps, load_algebra, load_any, load_frame, serialize_algebra, serialize_frame
from .formula import QUERIES, FormulaError, eval_formula, parse_formula, query
from .frames import FrameError, quotient_frame
from .poset import PosetError
from .representation import RepresentationError, build_filter_frame, verify_representation
from .validation import Settings, validate_frame

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _mark(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# -- commands -------------------------------------------------------------

def cmd_validate(args) -> int:
    frame = load_frame(args.frame, validate=False)
    res = validate_frame(frame, Settings(seed=args.seed))
    if args.json:
        sys.stdout.write(dumps(res.to_dict()))
    else:
        for name, rep in res.awareness.items():
            print(f"agent {name}: awareness")
            for c in rep.conditions:
                print(f"  {_mark(c.holds)} {c.name} ({c.mode})" + (f" {c.witnesses[0]}" if c.witnesses else ""))
            st = res.standard[name]
            print(f"  {_mark(st.holds)} standard ({st.mode})" + (f" {st.witness}" if st.witness else ""))
            if name in res.epistemic:
                print(f"agent {name}: knowledge and belief")
                for c in res.epistemic[name].conditions:
                    print(f"  {_mark(c.holds)} {c.name} ({c.mode})" + (f" {c.witnesses[0]}" if c.witnesses else ""))
        print(f"{_mark(res.ok)} {frame.name or args.frame}")
    return OK if res.ok else FAILED


def cmd_eval(args) -> int:
    frame = load_frame(args.frame)
    f = parse_formula(args.formula)
    kind = args.query[0] if args.query else ("holds_at" if args.at is not None else None)
    if kind is None:
        e = eval_formula(frame, f)
        print(" ".join(e.labels()) if not e.is_empty else "(empty)")
        return OK
    if kind not in QUERIES:
        raise UsageError(f"unknown query {kind!r}; expected one of {', '.join(QUERIES)}")
    other = None
    if kind in ("equal", "subset"):
        if len(args.query) != 2:
            raise UsageError(f"--query {kind} needs a second formula")
        other = parse_formula(args.query[1])
    elif len(args.query or []) > 1:
        raise UsageError(f"--query {kind} takes no second formula")
    if kind == "holds_at" and args.at is None:
        raise UsageError("--query holds_at needs --at")
    res = query(frame, f, kind, at=args.at, other=other)
    print("true" if res else "false")
    return OK if res else FAILED


def _required(text: str | None) -> tuple[str, ...]:
    if text is None:
        return DEFAULT_REQUIRED
    ids = tuple(x.strip() for x in text.split(",") if x.strip())
    known = {law.id for laws in SUITES.values() for law in laws}
    unknown = [x for x in ids if x not in known]
    if unknown:
        raise UsageError("unknown axiom(s): " + ", ".join(unknown))
    return ids


def cmd_audit(args) -> int:
    obj = load_any(args.structure)
    required = _required(args.required)
    suites = tuple(args.suite or ["all"])
    mode = "exhaustive" if args.mode == "exhaustive" else "sampled"
    agent = args.agent
    agents = [agent] if agent else (sorted(obj.agents) if not isinstance(obj, EpistemicAwarenessAlgebra) else [None])
    ok = True
    docs = []
    for a in agents:
        rep = audit(obj, suites, mode=mode, seed=args.seed, samples=args.samples, required=required, agent=a)
        ok = ok and rep.required_ok
        if args.json:
            docs.append(rep.to_dict())
            continue
        print(f"audit of {rep.structure or args.structure} (agent {rep.agent}, {rep.events} events, mode {rep.mode})")
        for v in rep.verdicts:
            tag = {"holds": "PASS", "sampled-holds": "PASS", "fails": "FAIL", "skipped": "SKIP"}[v.status]
            extra = f" witness {v.witness}" if v.witness else ""
            if v.status == "sampled-holds":
                extra = f" (sampled n={v.n}, seed={v.seed})"
            req = " [required]" if v.required else ""
            print(f"  {tag} {v.title}{req}{extra}")
        dk = rep.conclusions.get("dekel")
        if dk:
            print(f"  dekel consistency: {'consistent' if dk['consistent'] else 'INCONSISTENT'}"
                  f" (nontrivial unawareness: {dk['nontrivial_unawareness']})")
        print(f"{_mark(rep.required_ok)} required axioms")
    if args.json:
        sys.stdout.write(dumps(docs[0] if len(docs) == 1 else {"format_version": 1, "kind": "audit-reports",
                                                               "reports": docs}))
    return OK if ok else FAILED


def cmd_algebra(args) -> int:
    frame = load_frame(args.frame)
    alg = frame_to_algebra(frame, args.agent)
    rep = validate_eaa(alg)
    jc = check_join_closure(alg)
    if args.out:
        _write(serialize_algebra(alg), args.out)
    print(f"algebra of {frame.name or args.frame} for agent {alg.agent}: {alg.size} elements, "
          f"{alg.base.n_atoms} atoms")
    for r in rep.results:
        print(f"  {_mark(r.holds)} {r.name} ({r.mode})" + (f" {r.witness}" if r.witness else ""))
    print(f"  {_mark(jc.holds)} {jc.name} ({jc.mode})")
    return OK if rep.ok and jc.holds else FAILED


def cmd_represent(args) -> int:
    alg = load_algebra(args.algebra)
    if args.verify:
        rep = verify_representation(alg, seed=args.seed)
        if not rep.algebra_ok:
            print("FAIL algebra axioms: " + ", ".join(rep.checks[0].witness["failed"]), file=sys.stderr)
            return FAILED
        frame = build_filter_frame(alg)
        _write(serialize_frame(frame), args.out)
        err = sys.stderr if not args.out else sys.stdout
        v = rep.validation
        print(f"{_mark(v.ok)} filter frame validation (standard: {v.is_standard}, epistemic: {v.is_epistemic})",
              file=err)
        for c in rep.checks:
            print(f"{_mark(c.holds)} {c.name} ({c.mode})", file=err)
        print(f"{_mark(rep.ok)} isomorphism", file=err)
        return OK if rep.ok else FAILED
    _write(serialize_frame(build_filter_frame(alg)), args.out)
    return OK


def cmd_quotient(args) -> int:
    frame = load_frame(args.frame, validate=False)
    q = quotient_frame(frame)
    _write(serialize_frame(q), args.out)
    return OK


def cmd_examples(args) -> int:
    if not args.install:
        for name in corpus.NAMES:
            print(corpus.corpus_path(name))
        return OK
    for path in corpus.install(args.install):
        print(path)
    return OK


# -- entry point -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="possframes", description="Possibility frames with awareness, knowledge and belief.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("validate", help="check the frame conditions")
    p.add_argument("frame")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("eval", help="evaluate an event formula")
    p.add_argument("frame")
    p.add_argument("formula")
    p.add_argument("--at", help="possibility label for holds_at")
    p.add_argument("--query", nargs="+", metavar="KIND", help="valid | holds_at | equal FORMULA | subset FORMULA")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("audit", help="audit a frame or algebra against axiom suites")
    p.add_argument("structure")
    p.add_argument("--suite", action="append", choices=sorted(SUITES) + ["all"])
    p.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--required", help="comma-separated axiom ids (default: %s)" % ",".join(DEFAULT_REQUIRED))
    p.add_argument("--agent")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_audit)

    p = sub.add_parser("algebra", help="tabulate the event algebra of a frame")
    p.add_argument("frame")
    p.add_argument("--agent")
    p.add_argument("--out")
    p.set_defaults(run=cmd_algebra)

    p = sub.add_parser("represent", help="build the filter frame of an algebra")
    p.add_argument("algebra")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(run=cmd_represent)

    p = sub.add_parser("quotient", help="separative quotient of a frame")
    p.add_argument("frame")
    p.add_argument("--out")
    p.set_defaults(run=cmd_quotient)

    p = sub.add_parser("examples", help="list or install the example corpus")
    p.add_argument("--install", metavar="DIR")
    p.set_defaults(run=cmd_examples)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.run(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except (DocumentError, FormulaError, PosetError, FrameError, RepresentationError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
