"""Reading and writing derivation files.

Grammar (whitespace and newlines are insignificant outside strings)::

    file    ::= header* node
    header  ::= "consts:" ident ("," ident)*          (one per line)
    node    ::= "(" "rule" TAG
                    ["term" STRING] ["eig" IDENT] ["pos" INT]
                    "(" "seq" KIND STRING [STRING] STRING ")"
                    node* ")"
    KIND    ::= "plain" | "lfocus" | "rfocus"

``plain`` sequents carry two strings (Γ and Δ), focused ones three
(Γ, the focus, Δ). Contexts are comma-separated formulas. Text from ``;``
to the end of a line is a comment. A missing ``pos`` is inferred from the
conclusion and premises when the rule needs one.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional

from .calculus import (
    POS_RULES, Derivation, LeftFocus, Plain, RightFocus, Rule, derivation_constants,
    derivation_var_names,
)
from .syntax import (
    ParseError, alpha_eq, ctx_alpha_eq, ctx_index, is_gensym, parse_context,
    parse_formula, parse_term, print_context, print_formula, print_term,
)


class ProofFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


_TOKEN = re.compile(r'\s+|;[^\n]*|(?P<tok>\(|\)|"(?:[^"\\]|\\.)*"|[A-Za-z0-9_]+)')
_KINDS = {"plain": Plain, "lfocus": LeftFocus, "rfocus": RightFocus}
_KIND_NAMES = {v: k for k, v in _KINDS.items()}


def _tokens(text: str, first_line: int):
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        line = first_line + text.count("\n", 0, pos)
        if not m:
            raise ProofFormatError(f"unexpected character {text[pos]!r}", line)
        if m.group("tok"):
            yield m.group("tok"), line
        pos = m.end()


class _Reader:
    def __init__(self, text: str, first_line: int, consts: tuple[str, ...]):
        self.toks = list(_tokens(text, first_line))
        self.i = 0
        self.consts = consts

    def peek(self) -> Optional[str]:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def line(self) -> Optional[int]:
        return self.toks[min(self.i, len(self.toks) - 1)][1] if self.toks else None

    def take(self, want: Optional[str] = None) -> str:
        if self.i >= len(self.toks):
            raise ProofFormatError("unexpected end of file", self.line())
        tok, line = self.toks[self.i]
        if want is not None and tok != want:
            raise ProofFormatError(f"expected {want!r}, found {tok!r}", line)
        self.i += 1
        return tok

    def string(self) -> str:
        tok = self.take()
        if not tok.startswith('"'):
            raise ProofFormatError(f"expected a quoted string, found {tok!r}", self.toks[self.i - 1][1])
        return tok[1:-1].replace('\\"', '"').replace("\\\\", "\\")

    def formula_ctx(self, src: str):
        try:
            return parse_context(src, self.consts)
        except ParseError as e:
            raise ProofFormatError(f"in context {src!r}: {e}", self.toks[self.i - 1][1]) from None

    def formula(self, src: str):
        try:
            return parse_formula(src, self.consts)
        except ParseError as e:
            raise ProofFormatError(f"in formula {src!r}: {e}", self.toks[self.i - 1][1]) from None

    def node(self) -> Derivation:
        line = self.line()
        self.take("(")
        self.take("rule")
        tag = self.take()
        try:
            rule = Rule(tag)
        except ValueError:
            raise ProofFormatError(f"unknown rule tag {tag!r}", line) from None
        term = eig = pos = None
        while self.peek() in ("term", "eig", "pos"):
            key = self.take()
            if key == "term":
                src = self.string()
                try:
                    term = parse_term(src, self.consts)
                except ParseError as e:
                    raise ProofFormatError(f"in term {src!r}: {e}", line) from None
            elif key == "eig":
                eig = self.take()
            else:
                val = self.take()
                if not val.isdigit():
                    raise ProofFormatError(f"pos must be a natural number, found {val!r}", line)
                pos = int(val)
        self.take("(")
        self.take("seq")
        kind = self.take()
        if kind not in _KINDS:
            raise ProofFormatError(f"unknown sequent kind {kind!r}", line)
        gamma = self.formula_ctx(self.string())
        if kind == "plain":
            seq = Plain(gamma, self.formula_ctx(self.string()))
        else:
            focus = self.formula(self.string())
            seq = _KINDS[kind](gamma, focus, self.formula_ctx(self.string()))
        self.take(")")
        premises = []
        while self.peek() == "(":
            premises.append(self.node())
        self.take(")")
        d = Derivation(rule, seq, tuple(premises), term=term, eig=eig, pos=pos)
        if pos is None and rule in POS_RULES:
            d = Derivation(rule, seq, tuple(premises), term=term, eig=eig, pos=_infer_pos(d))
        return d


def _infer_pos(d: Derivation) -> Optional[int]:
    """The first position consistent with the schema, or None when there
    is none (the checker then reports the missing datum)."""
    s = d.conclusion
    match d.rule:
        case Rule.AxL:
            i = ctx_index(s.delta, s.focus)
            return i if i >= 0 else None
        case Rule.AxR:
            i = ctx_index(s.gamma, s.focus)
            return i if i >= 0 else None
    if len(d.premises) != 1:
        return None
    p = d.premises[0].conclusion
    match d.rule:
        case Rule.Mu:
            ctx, rest, active = p.delta, s.delta, getattr(s, "focus", None)
        case Rule.MuTilde:
            ctx, rest, active = p.gamma, s.gamma, getattr(s, "focus", None)
        case Rule.ImpR:
            focus = getattr(s, "focus", None)
            ctx, rest, active = p.gamma, s.gamma, getattr(focus, "left", None)
    if active is None:
        return None
    for i, f in enumerate(ctx):
        if alpha_eq(f, active) and ctx_alpha_eq(ctx[:i] + ctx[i + 1:], rest):
            return i
    return None


def parse_derivation(text: str) -> tuple[Derivation, tuple[str, ...]]:
    """Parse a derivation file; returns the tree and the declared constants."""
    consts: list[str] = []
    lines = text.split("\n")
    body_start = 0
    for n, raw in enumerate(lines):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("consts:"):
            names = [x.strip() for x in line[len("consts:"):].split(",") if x.strip()]
            for x in names:
                if not re.fullmatch(r"[a-z][A-Za-z0-9_]*", x):
                    raise ProofFormatError(f"invalid constant name {x!r}", n + 1)
            consts.extend(names)
            continue
        body_start = n
        break
    else:
        raise ProofFormatError("no derivation in file")
    reader = _Reader("\n".join(lines[body_start:]), body_start + 1, tuple(consts))
    d = reader.node()
    if reader.peek() is not None:
        raise ProofFormatError(f"trailing input {reader.peek()!r}", reader.line())
    return d, tuple(consts)


def read_derivation(path: str) -> tuple[Derivation, tuple[str, ...]]:
    with open(path, encoding="utf-8") as fh:
        return parse_derivation(fh.read())


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _seq(s) -> str:
    parts = [_KIND_NAMES[type(s)], _q(print_context(s.gamma, True))]
    if not isinstance(s, Plain):
        parts.append(_q(print_formula(s.focus, True)))
    parts.append(_q(print_context(s.delta, True)))
    return "(seq " + " ".join(parts) + ")"


def format_derivation(d: Derivation, comment: Optional[str] = None,
                      consts: Iterable[str] = ()) -> str:
    """Serialize deterministically with two-space indentation. Constants
    used by the derivation are declared in the header."""
    used = derivation_constants(d)
    reserved = sorted(x for x in used | derivation_var_names(d) if is_gensym(x))
    if reserved:
        raise ProofFormatError(f"reserved names cannot be written: {', '.join(reserved)}")
    clash = sorted(used & derivation_var_names(d))
    if clash:
        raise ProofFormatError(f"names used both as constant and variable: {', '.join(clash)}")
    out: list[str] = []
    if comment:
        out.extend(f"; {line}".rstrip() for line in comment.splitlines())
    declared = sorted(set(consts) | used)
    if declared:
        out.append("consts: " + ", ".join(declared))

    stack: list[tuple[Derivation, int, bool]] = [(d, 0, False)]
    while stack:
        n, depth, closing = stack.pop()
        pad = "  " * depth
        if closing:
            out[-1] += ")"
            continue
        head = [f"(rule {n.rule.value}"]
        if n.term is not None:
            head.append(f"term {_q(print_term(n.term))}")
        if n.eig is not None:
            head.append(f"eig {n.eig}")
        if n.pos is not None:
            head.append(f"pos {n.pos}")
        head.append(_seq(n.conclusion))
        out.append(pad + " ".join(head))
        stack.append((n, depth, True))
        for p in reversed(n.premises):
            stack.append((p, depth + 1, False))
    return "\n".join(out) + "\n"


def write_derivation(path: str, d: Derivation, comment: Optional[str] = None,
                     consts: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_derivation(d, comment, consts))
