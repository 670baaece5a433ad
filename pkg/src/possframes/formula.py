"""Event formulas: parser, canonical printer and evaluator.

Grammar (``|`` binds loosest, ``~`` tightest; binary operators associate left)::

    formula  := or_expr
    or_expr  := and_expr ("|" and_expr)*
    and_expr := unary ("&" unary)*
    unary    := "~" unary | modal | primary
    modal    := ("A"|"U"|"K"|"B"|"LK"|"LB") "." agent "(" formula ")"
              | ("CK"|"CB") "." agentset "(" formula ")"
    agentset := agent | "{" agent ("," agent)* "}"
    primary  := atom | "TOP" | "BOT" | "(" formula ")"
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .events import Event
from .frames import Frame, FrameError, aware_op, believe_op, common_op, implicit_op, know_op, unaware_op
from .poset import PosetError

MODALS = ("A", "U", "K", "B", "LK", "LB")
COMMONS = ("CK", "CB")


class FormulaError(ValueError):
    pass


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, position: int, text: str):
        where = "end of input" if position >= len(text) else f"position {position}"
        super().__init__(f"syntax error at {where}: {message}")
        self.position = position


# -- AST ----------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Modal:
    op: str
    agent: str
    arg: "Formula"


@dataclass(frozen=True)
class Common:
    op: str
    agents: tuple[str, ...]
    arg: "Formula"


Formula = Atom | Top | Bot | Not | And | Or | Modal | Common


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(1) if m.group(1) else m.start(2)
        if m.group(1):
            toks.append(("ident", m.group(1), start))
        else:
            ch = m.group(2)
            if ch not in "~&|().{},":
                raise FormulaSyntaxError(f"unexpected character {ch!r}", start, text)
            toks.append((ch, ch, start))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("eof", "", len(self.text))

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {kind!r}, found {found}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.or_expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise FormulaSyntaxError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return f

    def or_expr(self):
        f = self.and_expr()
        while self.peek()[0] == "|":
            self.i += 1
            f = Or(f, self.and_expr())
        return f

    def and_expr(self):
        f = self.unary()
        while self.peek()[0] == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok[0] == "~":
            self.i += 1
            return Not(self.unary())
        if tok[0] == "ident" and self.peek(1)[0] == ".":
            return self.modal()
        return self.primary()

    def modal(self):
        kind, op, pos = self.expect("ident")
        self.expect(".")
        if op in MODALS:
            agent = self.expect("ident")[1]
            self.expect("(")
            f = self.or_expr()
            self.expect(")")
            return Modal(op, agent, f)
        if op in COMMONS:
            if self.peek()[0] == "{":
                self.i += 1
                agents = [self.expect("ident")[1]]
                while self.peek()[0] == ",":
                    self.i += 1
                    agents.append(self.expect("ident")[1])
                self.expect("}")
            else:
                agents = [self.expect("ident")[1]]
            self.expect("(")
            f = self.or_expr()
            self.expect(")")
            return Common(op, tuple(agents), f)
        raise FormulaSyntaxError(f"unknown operator {op!r}", pos, self.text)

    def primary(self):
        tok = self.peek()
        if tok[0] == "(":
            self.i += 1
            f = self.or_expr()
            self.expect(")")
            return f
        if tok[0] == "ident":
            self.i += 1
            if tok[1] == "TOP":
                return Top()
            if tok[1] == "BOT":
                return Bot()
            return Atom(tok[1])
        found = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise FormulaSyntaxError(f"expected a formula, found {found}", tok[2], self.text)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


# -- printing -------------------------------------------------------------

def _prec(f) -> int:
    return 0 if isinstance(f, Or) else 1 if isinstance(f, And) else 2


def to_text(f: Formula) -> str:
    """Canonical text; ``parse_formula(to_text(f)) == f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "TOP"
    if isinstance(f, Bot):
        return "BOT"
    if isinstance(f, Not):
        inner = to_text(f.arg)
        return "~" + (f"({inner})" if _prec(f.arg) < 2 else inner)
    if isinstance(f, (And, Or)):
        p = _prec(f)
        sym = " & " if isinstance(f, And) else " | "
        left = to_text(f.left)
        right = to_text(f.right)
        if _prec(f.left) < p:
            left = f"({left})"
        if _prec(f.right) <= p:
            right = f"({right})"
        return left + sym + right
    if isinstance(f, Modal):
        return f"{f.op}.{f.agent}({to_text(f.arg)})"
    if isinstance(f, Common):
        group = f.agents[0] if len(f.agents) == 1 else "{" + ",".join(f.agents) + "}"
        return f"{f.op}.{group}({to_text(f.arg)})"
    raise TypeError(f"not a formula: {f!r}")


# -- evaluation -------------------------------------------------------------

def _check_agent(frame: Frame, name: str):
    if name not in frame.agents:
        raise FormulaError(f"unknown agent {name!r}")


def eval_formula(frame: Frame, f: Formula) -> Event:
    """The event denoted by ``f`` in ``frame``."""
    if isinstance(f, str):
        f = parse_formula(f)
    if isinstance(f, Atom):
        if f.name not in frame.named:
            raise FormulaError(f"unknown event {f.name!r}")
        return frame.named[f.name]
    if isinstance(f, Top):
        return frame.top
    if isinstance(f, Bot):
        return frame.bottom
    if isinstance(f, Not):
        return ~eval_formula(frame, f.arg)
    if isinstance(f, And):
        return eval_formula(frame, f.left) & eval_formula(frame, f.right)
    if isinstance(f, Or):
        return eval_formula(frame, f.left) | eval_formula(frame, f.right)
    if isinstance(f, Modal):
        _check_agent(frame, f.agent)
        e = eval_formula(frame, f.arg)
        try:
            if f.op == "A":
                return aware_op(frame, f.agent, e)
            if f.op == "U":
                return unaware_op(frame, f.agent, e)
            if f.op == "K":
                return know_op(frame, f.agent, e)
            if f.op == "B":
                return believe_op(frame, f.agent, e)
            return implicit_op(frame, f.agent, e, "know" if f.op == "LK" else "believe")
        except FrameError as exc:
            raise FormulaError(str(exc)) from None
    if isinstance(f, Common):
        for a in f.agents:
            _check_agent(frame, a)
        e = eval_formula(frame, f.arg)
        try:
            return common_op(frame, f.agents, e, "know" if f.op == "CK" else "believe")
        except FrameError as exc:
            raise FormulaError(str(exc)) from None
    raise TypeError(f"not a formula: {f!r}")


QUERIES = ("valid", "holds_at", "equal", "subset")


def query(frame: Frame, f: Formula | str, kind: str = "valid", *, at=None, other: Formula | str | None = None) -> bool:
    """``valid``: denotes Ω; ``holds_at``: ``at`` is in the denotation; ``equal``/``subset``: compare with ``other``."""
    e = eval_formula(frame, f)
    if kind == "valid":
        return e.is_top
    if kind == "holds_at":
        if at is None:
            raise FormulaError("holds_at needs a possibility")
        try:
            return frame.poset.id(at) in e.members
        except PosetError as exc:
            raise FormulaError(str(exc)) from None
    if kind in ("equal", "subset"):
        if other is None:
            raise FormulaError(f"{kind} needs a second formula")
        g = eval_formula(frame, other)
        return e == g if kind == "equal" else e <= g
    raise FormulaError(f"unknown query {kind!r}; expected one of {', '.join(QUERIES)}")
