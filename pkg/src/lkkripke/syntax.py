"""First-order formulas and terms: AST, parser, printer, substitution and
the double-negation translation."""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union


class ParseError(ValueError):
    """Parse failure; ``pos`` is the character offset in the source."""

    def __init__(self, message: str, pos: int | None = None, src: str | None = None):
        self.pos = pos
        self.src = src
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple[Term, ...]

    def __str__(self) -> str:
        return f"{self.fn}({', '.join(map(str, self.args))})"


Term = Union[Var, Const, App]


# -- formulas ----------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


Formula = Union[Atom, Top, Bot, And, Or, Imp, Forall, Exists]
Context = tuple  # ordered tuple of Formula, duplicates allowed

TOP = Top()
BOT = Bot()

GENSYM_PREFIX = "#"
DEFAULT_CONST = "#c0"


def neg(f: Formula) -> Formula:
    return Imp(f, BOT)


def is_gensym(name: str) -> bool:
    return name.startswith(GENSYM_PREFIX)


# -- free symbols --------------------------------------------------------------

def term_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset((name,))
        case Const():
            return frozenset()
        case App(_, args):
            return frozenset().union(*map(term_vars, args))
    raise TypeError(t)


def term_consts(t: Term) -> frozenset[str]:
    match t:
        case Var():
            return frozenset()
        case Const(name):
            return frozenset((name,))
        case App(_, args):
            return frozenset().union(*map(term_consts, args))
    raise TypeError(t)


@functools.lru_cache(maxsize=None)
def free_vars(f: Formula) -> frozenset[str]:
    match f:
        case Atom(_, args):
            return frozenset().union(*map(term_vars, args))
        case Top() | Bot():
            return frozenset()
        case And(a, b) | Or(a, b) | Imp(a, b):
            return free_vars(a) | free_vars(b)
        case Forall(x, a) | Exists(x, a):
            return free_vars(a) - {x}
    raise TypeError(f)


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


@functools.lru_cache(maxsize=None)
def constants(f: Formula) -> frozenset[str]:
    match f:
        case Atom(_, args):
            return frozenset().union(*map(term_consts, args))
        case Top() | Bot():
            return frozenset()
        case And(a, b) | Or(a, b) | Imp(a, b):
            return constants(a) | constants(b)
        case Forall(_, a) | Exists(_, a):
            return constants(a)
    raise TypeError(f)


@functools.lru_cache(maxsize=None)
def var_names(f: Formula) -> frozenset[str]:
    """Every variable name in ``f``, free or bound."""
    match f:
        case Atom(_, args):
            return frozenset().union(*map(term_vars, args))
        case Top() | Bot():
            return frozenset()
        case And(a, b) | Or(a, b) | Imp(a, b):
            return var_names(a) | var_names(b)
        case Forall(x, a) | Exists(x, a):
            return var_names(a) | {x}
    raise TypeError(f)


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789") or "x"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


# -- substitution --------------------------------------------------------------

def subst_term(t: Term, var_map: Mapping[str, Term], const_map: Mapping[str, Term]) -> Term:
    match t:
        case Var(name):
            return var_map.get(name, t)
        case Const(name):
            return const_map.get(name, t)
        case App(fn, args):
            return App(fn, tuple(subst_term(a, var_map, const_map) for a in args))
    raise TypeError(t)


def instantiate(f: Formula, var_map: Mapping[str, Term] = {},
                const_map: Mapping[str, Term] = {}) -> Formula:
    """Simultaneously replace free variables and constants, renaming binders
    that would capture a variable of an inserted term."""
    if not var_map and not const_map:
        return f
    match f:
        case Atom(p, args):
            return Atom(p, tuple(subst_term(a, var_map, const_map) for a in args))
        case Top() | Bot():
            return f
        case And(a, b):
            return And(instantiate(a, var_map, const_map), instantiate(b, var_map, const_map))
        case Or(a, b):
            return Or(instantiate(a, var_map, const_map), instantiate(b, var_map, const_map))
        case Imp(a, b):
            return Imp(instantiate(a, var_map, const_map), instantiate(b, var_map, const_map))
        case Forall(x, a) | Exists(x, a):
            inner = {k: v for k, v in var_map.items() if k != x}
            live = [v for k, v in inner.items() if k in free_vars(a)]
            consts_here = constants(a)
            live += [v for k, v in const_map.items() if k in consts_here]
            incoming = frozenset().union(*map(term_vars, live)) if live else frozenset()
            if x in incoming:
                y = fresh_name(x, incoming | var_names(a))
                inner[x] = Var(y)
                x = y
            body = instantiate(a, inner, const_map)
            return type(f)(x, body)
    raise TypeError(f)


def subst_var(f: Formula, x: str, t: Term) -> Formula:
    return instantiate(f, {x: t})


def replace_const(f: Formula, c: str, t: Term) -> Formula:
    return instantiate(f, const_map={c: t})


def replace_const_ctx(ctx: Iterable[Formula], c: str, t: Term) -> tuple:
    return tuple(replace_const(f, c, t) for f in ctx)


# -- alpha equivalence ---------------------------------------------------------

def _term_key(t: Term, bound: tuple[str, ...]):
    match t:
        case Var(name):
            for i in range(len(bound) - 1, -1, -1):
                if bound[i] == name:
                    return ("b", len(bound) - 1 - i)
            return ("v", name)
        case Const(name):
            return ("c", name)
        case App(fn, args):
            return ("f", fn, tuple(_term_key(a, bound) for a in args))
    raise TypeError(t)


def _key(f: Formula, bound: tuple[str, ...]):
    match f:
        case Atom(p, args):
            return ("atom", p, tuple(_term_key(a, bound) for a in args))
        case Top():
            return ("top",)
        case Bot():
            return ("bot",)
        case And(a, b):
            return ("and", _key(a, bound), _key(b, bound))
        case Or(a, b):
            return ("or", _key(a, bound), _key(b, bound))
        case Imp(a, b):
            return ("imp", _key(a, bound), _key(b, bound))
        case Forall(x, a):
            return ("all", _key(a, bound + (x,)))
        case Exists(x, a):
            return ("ex", _key(a, bound + (x,)))
    raise TypeError(f)


@functools.lru_cache(maxsize=None)
def alpha_key(f: Formula):
    """Hashable nameless representation; equal keys iff alpha-equivalent."""
    return _key(f, ())


def alpha_eq(f: Formula, g: Formula) -> bool:
    return f is g or alpha_key(f) == alpha_key(g)


def ctx_alpha_eq(xs: Iterable[Formula], ys: Iterable[Formula]) -> bool:
    xs, ys = tuple(xs), tuple(ys)
    return len(xs) == len(ys) and all(alpha_eq(a, b) for a, b in zip(xs, ys))


def ctx_subset(xs: Iterable[Formula], ys: Iterable[Formula]) -> bool:
    """Occurrence-set inclusion: order and multiplicity ignored."""
    keys = {alpha_key(f) for f in ys}
    return all(alpha_key(f) in keys for f in xs)


def ctx_index(ctx: Iterable[Formula], f: Formula) -> int:
    """Index of the first alpha-equal occurrence of ``f``; -1 if absent."""
    k = alpha_key(f)
    for i, g in enumerate(ctx):
        if alpha_key(g) == k:
            return i
    return -1


# -- double-negation translation ---------------------------------------------

def dn_translate(f: Formula) -> Formula:
    match f:
        case Atom() | Top() | Bot():
            return f
        case And(a, b):
            return And(dn_translate(a), dn_translate(b))
        case Imp(a, b):
            return Imp(dn_translate(a), dn_translate(b))
        case Forall(x, a):
            return Forall(x, dn_translate(a))
        case Or(a, b):
            return neg(And(neg(dn_translate(a)), neg(dn_translate(b))))
        case Exists(x, a):
            return neg(Forall(x, neg(dn_translate(a))))
    raise TypeError(f)


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<bot>_\|_)
  | (?P<gensym>\#[A-Za-z0-9_']*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[()~&|,.])
""", re.VERBOSE)

_KEYWORDS = {"forall", "exists", "T"}


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        kind = m.lastgroup
        text = m.group()
        if kind == "gensym":
            raise ParseError(f"reserved name {text!r}", pos, src)
        if kind != "ws":
            out.append((kind if kind != "punct" else text, text, pos))
        pos = m.end()
    out.append(("eof", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, consts: frozenset[str]):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.consts = consts

    def peek(self) -> str:
        return self.toks[self.i][0]

    def peek_text(self) -> str:
        return self.toks[self.i][1]

    def take(self, kind: str) -> str:
        k, text, pos = self.toks[self.i]
        if k != kind:
            want = "identifier" if kind == "ident" else repr(kind)
            got = "end of input" if k == "eof" else repr(text)
            raise ParseError(f"expected {want}, got {got}", pos, self.src)
        self.i += 1
        return text

    def error(self, msg: str):
        raise ParseError(msg, self.toks[self.i][2], self.src)

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek() == "arrow":
            self.take("arrow")
            return Imp(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take("|")
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take("&")
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        k, text = self.peek(), self.peek_text()
        if k == "~":
            self.take("~")
            return neg(self.unary())
        if k == "ident" and text in ("forall", "exists"):
            self.take("ident")
            x = self.take("ident")
            if x in _KEYWORDS:
                self.error(f"keyword {x!r} cannot be bound")
            self.take(".")
            body = self.formula()
            return Forall(x, body) if text == "forall" else Exists(x, body)
        return self.primary()

    def primary(self) -> Formula:
        k, text = self.peek(), self.peek_text()
        if k == "bot":
            self.take("bot")
            return BOT
        if k == "(":
            self.take("(")
            f = self.formula()
            self.take(")")
            return f
        if k == "ident":
            if text == "T":
                self.take("ident")
                return TOP
            if text in _KEYWORDS:
                self.error(f"unexpected keyword {text!r}")
            self.take("ident")
            return Atom(text, self.args())
        if k == "eof":
            self.error("unexpected end of input")
        self.error(f"unexpected {text!r}")

    def args(self) -> tuple[Term, ...]:
        if self.peek() != "(":
            return ()
        self.take("(")
        args = [self.term()]
        while self.peek() == ",":
            self.take(",")
            args.append(self.term())
        self.take(")")
        return tuple(args)

    def term(self) -> Term:
        name = self.take("ident")
        if name in _KEYWORDS:
            self.error(f"keyword {name!r} used as a term")
        if self.peek() == "(":
            return App(name, self.args())
        return Const(name) if name in self.consts else Var(name)

    def finish(self):
        if self.peek() != "eof":
            self.error(f"trailing input {self.peek_text()!r}")


def parse_formula(src: str, consts: Iterable[str] = ()) -> Formula:
    p = _Parser(src, frozenset(consts))
    f = p.formula()
    p.finish()
    return f


def parse_term(src: str, consts: Iterable[str] = ()) -> Term:
    p = _Parser(src, frozenset(consts))
    t = p.term()
    p.finish()
    return t


def split_top_level(src: str, sep: str = ",") -> list[str]:
    """Split at separators outside parentheses; empty input gives []."""
    parts, depth, cur = [], 0, []
    for ch in src:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if len(parts) == 1 and not parts[0].strip():
        return []
    return [p.strip() for p in parts]


def parse_context(src: str, consts: Iterable[str] = ()) -> tuple:
    return tuple(parse_formula(p, consts) for p in split_top_level(src))


# -- printing ------------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3}


def print_term(t: Term) -> str:
    return str(t)


def print_formula(f: Formula, neg_sugar: bool = False) -> str:
    def atom(a: Atom) -> str:
        if not a.args:
            return a.pred
        return f"{a.pred}({', '.join(map(print_term, a.args))})"

    def go(f: Formula, ctx: int) -> str:
        # ctx: minimal precedence the surrounding position accepts unparenthesized
        match f:
            case Atom():
                return atom(f)
            case Top():
                return "T"
            case Bot():
                return "_|_"
            case Imp(a, Bot()) if neg_sugar:
                return "~" + go(a, 4)
            case Forall(x, a) | Exists(x, a):
                q = "forall" if isinstance(f, Forall) else "exists"
                s = f"{q} {x}. {go(a, 0)}"
                return f"({s})" if ctx > 0 else s
            case Imp(a, b):
                s = f"{go(a, 2)} -> {go(b, 1)}"
            case Or(a, b):
                s = f"{go(a, 2)} | {go(b, 3)}"
            case And(a, b):
                s = f"{go(a, 3)} & {go(b, 4)}"
            case _:
                raise TypeError(f)
        return f"({s})" if _PREC[type(f)] < ctx else s

    return go(f, 0)


def print_context(ctx: Iterable[Formula], neg_sugar: bool = False) -> str:
    return ", ".join(print_formula(f, neg_sugar) for f in ctx)
