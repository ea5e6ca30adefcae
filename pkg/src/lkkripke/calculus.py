"""Derivations of the LK-mu-mu~ sequent calculus, the rule checker, the
normal-proof predicate, and the cut-free structural lemmas (weakening,
constant-to-variable renaming, contraction macros)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Optional, Union

from .syntax import (
    And, Bot, Exists, Forall, Formula, Imp, Or, Term, Top, Var,
    alpha_eq, constants, ctx_alpha_eq, ctx_index, ctx_subset, free_vars,
    fresh_name, instantiate, print_context, print_formula, subst_term,
    subst_var, term_consts, term_vars, var_names,
)


# -- sequents ----------------------------------------------------------------

@dataclass(frozen=True)
class Plain:
    gamma: tuple
    delta: tuple


@dataclass(frozen=True)
class LeftFocus:
    gamma: tuple
    focus: Formula
    delta: tuple


@dataclass(frozen=True)
class RightFocus:
    gamma: tuple
    focus: Formula
    delta: tuple


Sequent = Union[Plain, LeftFocus, RightFocus]


def sequent_formulas(s: Sequent) -> tuple:
    if isinstance(s, Plain):
        return s.gamma + s.delta
    return s.gamma + (s.focus,) + s.delta


def sequent_free_vars(s: Sequent) -> frozenset[str]:
    return frozenset().union(*map(free_vars, sequent_formulas(s)))


def sequent_alpha_eq(s: Sequent, t: Sequent) -> bool:
    if type(s) is not type(t):
        return False
    if not (ctx_alpha_eq(s.gamma, t.gamma) and ctx_alpha_eq(s.delta, t.delta)):
        return False
    return isinstance(s, Plain) or alpha_eq(s.focus, t.focus)


def map_sequent(s: Sequent, fn: Callable[[Formula], Formula]) -> Sequent:
    gamma = tuple(map(fn, s.gamma))
    delta = tuple(map(fn, s.delta))
    if isinstance(s, Plain):
        return Plain(gamma, delta)
    return type(s)(gamma, fn(s.focus), delta)


def with_contexts(s: Sequent, gamma: tuple, delta: tuple) -> Sequent:
    if isinstance(s, Plain):
        return Plain(gamma, delta)
    return type(s)(gamma, s.focus, delta)


def print_sequent(s: Sequent, neg_sugar: bool = True) -> str:
    g = print_context(s.gamma, neg_sugar)
    d = print_context(s.delta, neg_sugar)
    match s:
        case Plain():
            return f"{g} ⊢ {d}".strip()
        case LeftFocus():
            return f"{g} | {print_formula(s.focus, neg_sugar)} ⊢ {d}".strip()
        case RightFocus():
            return f"{g} ⊢ {print_formula(s.focus, neg_sugar)} | {d}".strip()
    raise TypeError(s)


# -- rules and derivations -------------------------------------------------------

class Rule(str, enum.Enum):
    AxL = "AxL"
    AxR = "AxR"
    Mu = "Mu"
    MuTilde = "MuTilde"
    ImpL = "ImpL"
    ImpR = "ImpR"
    OrL = "OrL"
    OrR1 = "OrR1"
    OrR2 = "OrR2"
    AndL1 = "AndL1"
    AndL2 = "AndL2"
    AndR = "AndR"
    ExL = "ExL"
    ExR = "ExR"
    AllL = "AllL"
    AllR = "AllR"
    BotL = "BotL"
    TopR = "TopR"
    Cut = "Cut"

    def __str__(self) -> str:
        return self.value


ARITY = {
    Rule.AxL: 0, Rule.AxR: 0, Rule.BotL: 0, Rule.TopR: 0,
    Rule.Mu: 1, Rule.MuTilde: 1, Rule.ImpR: 1, Rule.OrR1: 1, Rule.OrR2: 1,
    Rule.AndL1: 1, Rule.AndL2: 1, Rule.ExL: 1, Rule.ExR: 1, Rule.AllL: 1,
    Rule.AllR: 1,
    Rule.ImpL: 2, Rule.OrL: 2, Rule.AndR: 2, Rule.Cut: 2,
}

CONCLUSION_KIND = {
    **{r: LeftFocus for r in (Rule.AxL, Rule.MuTilde, Rule.ImpL, Rule.OrL, Rule.AndL1,
                              Rule.AndL2, Rule.ExL, Rule.AllL, Rule.BotL)},
    **{r: RightFocus for r in (Rule.AxR, Rule.Mu, Rule.ImpR, Rule.OrR1, Rule.OrR2,
                               Rule.AndR, Rule.ExR, Rule.AllR, Rule.TopR)},
    Rule.Cut: Plain,
}

EIGEN_RULES = (Rule.ExL, Rule.AllR)
TERM_RULES = (Rule.ExR, Rule.AllL)
POS_RULES = (Rule.AxL, Rule.AxR, Rule.Mu, Rule.MuTilde, Rule.ImpR)
AXIOMS = (Rule.AxL, Rule.AxR)


@dataclass(frozen=True, eq=False)
class Derivation:
    rule: Rule
    conclusion: Sequent
    premises: tuple = ()
    term: Optional[Term] = None
    eig: Optional[str] = None
    # AxL/AxR: index of the axiom formula in the side context;
    # Mu/MuTilde/ImpR: index at which the premise carries the extra formula
    pos: Optional[int] = None

    def __repr__(self) -> str:
        return f"<{self.rule} {print_sequent(self.conclusion)}>"


def nodes(d: Derivation) -> Iterator[Derivation]:
    stack = [d]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.premises))


def count_cuts(d: Derivation) -> int:
    return sum(1 for n in nodes(d) if n.rule is Rule.Cut)


def size(d: Derivation) -> int:
    return sum(1 for _ in nodes(d))


def rules_used(d: Derivation) -> set[Rule]:
    return {n.rule for n in nodes(d)}


def derivation_var_names(d: Derivation) -> set[str]:
    out: set[str] = set()
    for n in nodes(d):
        for f in sequent_formulas(n.conclusion):
            out |= var_names(f)
        if n.term is not None:
            out |= term_vars(n.term)
        if n.eig is not None:
            out.add(n.eig)
    return out


def derivation_constants(d: Derivation) -> set[str]:
    out: set[str] = set()
    for n in nodes(d):
        for f in sequent_formulas(n.conclusion):
            out |= constants(f)
        if n.term is not None:
            out |= term_consts(n.term)
    return out


def alpha_equal(d: Derivation, e: Derivation) -> bool:
    """Same rules, same data and alpha-equal sequents node by node
    (eigenvariable names are compared literally)."""
    if d.rule is not e.rule or len(d.premises) != len(e.premises):
        return False
    if (d.term, d.eig, d.pos) != (e.term, e.eig, e.pos):
        return False
    if not sequent_alpha_eq(d.conclusion, e.conclusion):
        return False
    return all(alpha_equal(a, b) for a, b in zip(d.premises, e.premises))


# -- checking ------------------------------------------------------------------------

class Violation(str, enum.Enum):
    ARITY = "arity mismatch"
    SHAPE = "shape mismatch"
    ACTIVE = "wrong active formula"
    EIGEN = "eigenvariable occurs in conclusion"
    CONTEXT = "context mismatch"
    DATA = "missing or invalid rule data"


class CheckError(Exception):
    def __init__(self, path: tuple[int, ...], rule: Rule, kind: Violation, detail: str):
        self.path = path
        self.rule = rule
        self.kind = kind
        self.detail = detail
        loc = "/".join(map(str, path)) or "root"
        super().__init__(f"{loc}: {rule}: {kind.value}: {detail}")


class CalculusError(ValueError):
    """Precondition violation of a structural operation."""


def _drop(ctx: tuple, i: int) -> tuple:
    return ctx[:i] + ctx[i + 1:]


def _insert(ctx: tuple, i: int, f: Formula) -> tuple:
    return ctx[:i] + (f,) + ctx[i:]


class _Checker:
    def __init__(self, d: Derivation, path: tuple[int, ...]):
        self.d = d
        self.path = path

    def fail(self, kind: Violation, detail: str):
        raise CheckError(self.path, self.d.rule, kind, detail)

    def same_ctx(self, what: str, got: tuple, want: tuple):
        if not ctx_alpha_eq(got, want):
            self.fail(Violation.CONTEXT,
                      f"{what}: expected [{print_context(want, True)}], "
                      f"found [{print_context(got, True)}]")

    def premise(self, i: int, kind: type, gamma: tuple, focus: Optional[Formula],
                delta: tuple) -> None:
        s = self.d.premises[i].conclusion
        if not isinstance(s, kind):
            self.fail(Violation.SHAPE,
                      f"premise {i} must be a {kind.__name__} sequent, got {type(s).__name__}")
        if focus is not None and not alpha_eq(s.focus, focus):
            self.fail(Violation.ACTIVE,
                      f"premise {i} focus {print_formula(s.focus, True)} "
                      f"should be {print_formula(focus, True)}")
        self.same_ctx(f"premise {i} left context", s.gamma, gamma)
        self.same_ctx(f"premise {i} right context", s.delta, delta)

    def head(self, cls: type) -> Formula:
        f = self.d.conclusion.focus
        if not isinstance(f, cls):
            self.fail(Violation.ACTIVE,
                      f"active formula {print_formula(f, True)} is not a {cls.__name__}")
        return f

    def need_pos(self, limit: int) -> int:
        pos = self.d.pos
        if pos is None or not 0 <= pos < limit:
            self.fail(Violation.DATA, f"position {pos} out of range")
        return pos

    def fresh(self, x: str):
        if x in sequent_free_vars(self.d.conclusion):
            self.fail(Violation.EIGEN, f"{x} is free in the conclusion")

    def run(self) -> Sequent:
        d = self.d
        c = d.conclusion
        if len(d.premises) != ARITY[d.rule]:
            self.fail(Violation.ARITY,
                      f"expected {ARITY[d.rule]} premises, got {len(d.premises)}")
        if not isinstance(c, CONCLUSION_KIND[d.rule]):
            self.fail(Violation.SHAPE,
                      f"conclusion must be {CONCLUSION_KIND[d.rule].__name__}, "
                      f"got {type(c).__name__}")
        if d.rule in EIGEN_RULES and not d.eig:
            self.fail(Violation.DATA, "missing eigenvariable")
        if d.rule in TERM_RULES and d.term is None:
            self.fail(Violation.DATA, "missing instantiating term")
        G = c.gamma
        D = c.delta
        match d.rule:
            case Rule.AxL:
                pos = self.need_pos(len(D))
                if not alpha_eq(D[pos], c.focus):
                    self.fail(Violation.ACTIVE, "focus differs from the right-context formula")
            case Rule.AxR:
                pos = self.need_pos(len(G))
                if not alpha_eq(G[pos], c.focus):
                    self.fail(Violation.ACTIVE, "focus differs from the left-context formula")
            case Rule.Mu:
                p = d.premises[0].conclusion
                if not isinstance(p, Plain):
                    self.fail(Violation.SHAPE, "premise must be a plain sequent")
                pos = self.need_pos(len(p.delta))
                if not alpha_eq(p.delta[pos], c.focus):
                    self.fail(Violation.ACTIVE,
                              f"premise activates {print_formula(p.delta[pos], True)}, "
                              f"conclusion claims {print_formula(c.focus, True)}")
                self.same_ctx("premise left context", p.gamma, G)
                self.same_ctx("premise right context minus active", _drop(p.delta, pos), D)
            case Rule.MuTilde:
                p = d.premises[0].conclusion
                if not isinstance(p, Plain):
                    self.fail(Violation.SHAPE, "premise must be a plain sequent")
                pos = self.need_pos(len(p.gamma))
                if not alpha_eq(p.gamma[pos], c.focus):
                    self.fail(Violation.ACTIVE,
                              f"premise activates {print_formula(p.gamma[pos], True)}, "
                              f"conclusion claims {print_formula(c.focus, True)}")
                self.same_ctx("premise left context minus active", _drop(p.gamma, pos), G)
                self.same_ctx("premise right context", p.delta, D)
            case Rule.ImpL:
                f = self.head(Imp)
                self.premise(0, RightFocus, G, f.left, D)
                self.premise(1, LeftFocus, G, f.right, D)
            case Rule.ImpR:
                f = self.head(Imp)
                p = d.premises[0].conclusion
                if not isinstance(p, RightFocus):
                    self.fail(Violation.SHAPE, "premise must be right-focused")
                pos = self.need_pos(len(p.gamma))
                if not alpha_eq(p.gamma[pos], f.left):
                    self.fail(Violation.ACTIVE, "hypothesis differs from the antecedent")
                if not alpha_eq(p.focus, f.right):
                    self.fail(Violation.ACTIVE, "premise focus differs from the consequent")
                self.same_ctx("premise left context minus hypothesis", _drop(p.gamma, pos), G)
                self.same_ctx("premise right context", p.delta, D)
            case Rule.OrL:
                f = self.head(Or)
                self.premise(0, LeftFocus, G, f.left, D)
                self.premise(1, LeftFocus, G, f.right, D)
            case Rule.OrR1:
                f = self.head(Or)
                self.premise(0, RightFocus, G, f.left, D)
            case Rule.OrR2:
                f = self.head(Or)
                self.premise(0, RightFocus, G, f.right, D)
            case Rule.AndL1:
                f = self.head(And)
                self.premise(0, LeftFocus, G, f.left, D)
            case Rule.AndL2:
                f = self.head(And)
                self.premise(0, LeftFocus, G, f.right, D)
            case Rule.AndR:
                f = self.head(And)
                self.premise(0, RightFocus, G, f.left, D)
                self.premise(1, RightFocus, G, f.right, D)
            case Rule.ExL:
                f = self.head(Exists)
                self.fresh(d.eig)
                self.premise(0, LeftFocus, G, subst_var(f.body, f.var, Var(d.eig)), D)
            case Rule.ExR:
                f = self.head(Exists)
                self.premise(0, RightFocus, G, subst_var(f.body, f.var, d.term), D)
            case Rule.AllL:
                f = self.head(Forall)
                self.premise(0, LeftFocus, G, subst_var(f.body, f.var, d.term), D)
            case Rule.AllR:
                f = self.head(Forall)
                self.fresh(d.eig)
                self.premise(0, RightFocus, G, subst_var(f.body, f.var, Var(d.eig)), D)
            case Rule.BotL:
                self.head(Bot)
            case Rule.TopR:
                self.head(Top)
            case Rule.Cut:
                left = d.premises[0].conclusion
                if not isinstance(left, RightFocus):
                    self.fail(Violation.SHAPE, "left premise must be right-focused")
                self.premise(0, RightFocus, G, None, D)
                self.premise(1, LeftFocus, G, left.focus, D)
        return c


def check(d: Derivation) -> Sequent:
    """Verify every node against its rule schema; return the conclusion."""
    stack: list[tuple[Derivation, tuple[int, ...]]] = [(d, ())]
    while stack:
        n, path = stack.pop()
        _Checker(n, path).run()
        for i, p in enumerate(n.premises):
            stack.append((p, path + (i,)))
    return d.conclusion


def is_normal(d: Derivation) -> bool:
    """Every cut has an axiom as one of its premises."""
    return all(
        n.premises[0].rule in AXIOMS or n.premises[1].rule in AXIOMS
        for n in nodes(d) if n.rule is Rule.Cut
    )


# -- builders --------------------------------------------------------------------
#
# Each builder computes the conclusion from its premises; nothing is verified
# until check() runs.

def _locate(ctx: tuple, f: Formula, pos: Optional[int]) -> int:
    if pos is not None:
        return pos
    i = ctx_index(ctx, f)
    if i < 0:
        raise CalculusError(f"{print_formula(f, True)} not in context [{print_context(ctx, True)}]")
    return i


def ax_l(gamma, focus: Formula, delta, pos: Optional[int] = None) -> Derivation:
    gamma, delta = tuple(gamma), tuple(delta)
    return Derivation(Rule.AxL, LeftFocus(gamma, focus, delta), pos=_locate(delta, focus, pos))


def ax_r(gamma, focus: Formula, delta, pos: Optional[int] = None) -> Derivation:
    gamma, delta = tuple(gamma), tuple(delta)
    return Derivation(Rule.AxR, RightFocus(gamma, focus, delta), pos=_locate(gamma, focus, pos))


def mu(p: Derivation, pos: int = 0) -> Derivation:
    s = p.conclusion
    return Derivation(Rule.Mu, RightFocus(s.gamma, s.delta[pos], _drop(s.delta, pos)), (p,), pos=pos)


def mutilde(p: Derivation, pos: Optional[int] = None) -> Derivation:
    s = p.conclusion
    pos = len(s.gamma) - 1 if pos is None else pos
    return Derivation(Rule.MuTilde, LeftFocus(_drop(s.gamma, pos), s.gamma[pos], s.delta), (p,), pos=pos)


def imp_r(p: Derivation, pos: Optional[int] = None) -> Derivation:
    s = p.conclusion
    pos = len(s.gamma) - 1 if pos is None else pos
    return Derivation(Rule.ImpR, RightFocus(_drop(s.gamma, pos), Imp(s.gamma[pos], s.focus), s.delta),
                      (p,), pos=pos)


def imp_l(p1: Derivation, p2: Derivation) -> Derivation:
    s = p1.conclusion
    return Derivation(Rule.ImpL, LeftFocus(s.gamma, Imp(s.focus, p2.conclusion.focus), s.delta), (p1, p2))


def or_l(p1: Derivation, p2: Derivation) -> Derivation:
    s = p1.conclusion
    return Derivation(Rule.OrL, LeftFocus(s.gamma, Or(s.focus, p2.conclusion.focus), s.delta), (p1, p2))


def or_r1(p: Derivation, right: Formula) -> Derivation:
    s = p.conclusion
    return Derivation(Rule.OrR1, RightFocus(s.gamma, Or(s.focus, right), s.delta), (p,))


def or_r2(p: Derivation, left: Formula) -> Derivation:
    s = p.conclusion
    return Derivation(Rule.OrR2, RightFocus(s.gamma, Or(left, s.focus), s.delta), (p,))


def and_l1(p: Derivation, right: Formula) -> Derivation:
    s = p.conclusion
    return Derivation(Rule.AndL1, LeftFocus(s.gamma, And(s.focus, right), s.delta), (p,))


def and_l2(p: Derivation, left: Formula) -> Derivation:
    s = p.conclusion
    return Derivation(Rule.AndL2, LeftFocus(s.gamma, And(left, s.focus), s.delta), (p,))


def and_r(p1: Derivation, p2: Derivation) -> Derivation:
    s = p1.conclusion
    return Derivation(Rule.AndR, RightFocus(s.gamma, And(s.focus, p2.conclusion.focus), s.delta), (p1, p2))


def ex_l(p: Derivation, eig: str) -> Derivation:
    """Bind ``eig`` in the premise focus: Γ | A(y) ⊢ Δ  gives  Γ | ∃y.A(y) ⊢ Δ."""
    s = p.conclusion
    return Derivation(Rule.ExL, LeftFocus(s.gamma, Exists(eig, s.focus), s.delta), (p,), eig=eig)


def all_r(p: Derivation, eig: str) -> Derivation:
    s = p.conclusion
    return Derivation(Rule.AllR, RightFocus(s.gamma, Forall(eig, s.focus), s.delta), (p,), eig=eig)


def ex_r(p: Derivation, formula: Exists, t: Term) -> Derivation:
    s = p.conclusion
    return Derivation(Rule.ExR, RightFocus(s.gamma, formula, s.delta), (p,), term=t)


def all_l(p: Derivation, formula: Forall, t: Term) -> Derivation:
    s = p.conclusion
    return Derivation(Rule.AllL, LeftFocus(s.gamma, formula, s.delta), (p,), term=t)


def bot_l(gamma, delta) -> Derivation:
    return Derivation(Rule.BotL, LeftFocus(tuple(gamma), Bot(), tuple(delta)))


def top_r(gamma, delta) -> Derivation:
    return Derivation(Rule.TopR, RightFocus(tuple(gamma), Top(), tuple(delta)))


def cut(p1: Derivation, p2: Derivation) -> Derivation:
    s = p1.conclusion
    return Derivation(Rule.Cut, Plain(s.gamma, s.delta), (p1, p2))


# -- contraction macros ------------------------------------------------------------

def contract_left(d: Derivation) -> Derivation:
    """From Γ | A ⊢ Δ with A occurring in Γ, derive Γ ⊢ Δ by a cut
    against (Ax_R)."""
    s = d.conclusion
    if not isinstance(s, LeftFocus):
        raise CalculusError("contract_left expects a left-focused sequent")
    i = ctx_index(s.gamma, s.focus)
    if i < 0:
        raise CalculusError("contract_left: focus does not occur in the left context")
    return cut(Derivation(Rule.AxR, RightFocus(s.gamma, s.focus, s.delta), pos=i), d)


def contract_right(d: Derivation) -> Derivation:
    s = d.conclusion
    if not isinstance(s, RightFocus):
        raise CalculusError("contract_right expects a right-focused sequent")
    i = ctx_index(s.delta, s.focus)
    if i < 0:
        raise CalculusError("contract_right: focus does not occur in the right context")
    return cut(d, Derivation(Rule.AxL, LeftFocus(s.gamma, s.focus, s.delta), pos=i))


# -- substitution on derivations ---------------------------------------------------

def _rename_eig(d: Derivation, avoid: set[str]) -> Derivation:
    """Rename the eigenvariable of an ExL/AllR node away from ``avoid``."""
    premise = d.premises[0]
    new = fresh_name(d.eig, avoid | derivation_var_names(premise))
    return replace(d, premises=(subst_deriv(premise, {d.eig: Var(new)}),), eig=new)


def subst_deriv(d: Derivation, var_map: dict[str, Term]) -> Derivation:
    """Capture-avoiding substitution for free variables throughout a
    derivation; eigenvariables are renamed when they would clash."""
    if not var_map:
        return d
    conclusion = map_sequent(d.conclusion, lambda f: instantiate(f, var_map))
    term = None if d.term is None else subst_term(d.term, var_map, {})
    premises = d.premises
    if d.rule in EIGEN_RULES:
        inner = {k: v for k, v in var_map.items() if k != d.eig}
        incoming = frozenset().union(*(term_vars(v) for v in inner.values()))
        if d.eig in incoming:
            d = _rename_eig(d, set(incoming) | set(inner))
            premises = d.premises
        premises = tuple(subst_deriv(p, inner) for p in premises)
        return replace(d, conclusion=conclusion, premises=premises)
    premises = tuple(subst_deriv(p, var_map) for p in premises)
    return replace(d, conclusion=conclusion, premises=premises, term=term)


def replace_const_deriv(d: Derivation, c: str, t: Term) -> Derivation:
    const_map = {c: t}
    incoming = term_vars(t)

    def go(n: Derivation) -> Derivation:
        if n.rule in EIGEN_RULES and n.eig in incoming:
            n = _rename_eig(n, set(incoming))
        conclusion = map_sequent(n.conclusion, lambda f: instantiate(f, {}, const_map))
        term = None if n.term is None else subst_term(n.term, {}, const_map)
        return replace(n, conclusion=conclusion, term=term,
                       premises=tuple(go(p) for p in n.premises))

    return go(d)


def rename_const_to_var(d: Derivation, c: str, y: str) -> Derivation:
    """Replace constant ``c`` by the variable ``y`` at every node; no cut is
    added or removed."""
    if y in sequent_free_vars(d.conclusion):
        raise CalculusError(f"variable {y} already occurs in the conclusion")
    return replace_const_deriv(d, c, Var(y))


# -- weakening ---------------------------------------------------------------------

def weaken(d: Derivation, gamma, delta) -> Derivation:
    """Widen the conclusion contexts to ``gamma``/``delta`` (supersets by
    occurrence) without introducing cuts."""
    gamma, delta = tuple(gamma), tuple(delta)
    s = d.conclusion
    if not ctx_subset(s.gamma, gamma):
        raise CalculusError("weaken: left context is not included in the new one")
    if not ctx_subset(s.delta, delta):
        raise CalculusError("weaken: right context is not included in the new one")
    return _weaken(d, gamma, delta)


def _weaken(d: Derivation, G: tuple, D: tuple) -> Derivation:
    s = d.conclusion
    if ctx_alpha_eq(s.gamma, G) and ctx_alpha_eq(s.delta, D):
        return d
    conclusion = with_contexts(s, G, D)
    match d.rule:
        case Rule.AxL:
            pos = d.pos if d.pos < len(D) and alpha_eq(D[d.pos], s.focus) else ctx_index(D, s.focus)
            return replace(d, conclusion=conclusion, pos=pos)
        case Rule.AxR:
            pos = d.pos if d.pos < len(G) and alpha_eq(G[d.pos], s.focus) else ctx_index(G, s.focus)
            return replace(d, conclusion=conclusion, pos=pos)
        case Rule.Mu:
            pos = min(d.pos, len(D))
            p = _weaken(d.premises[0], G, _insert(D, pos, s.focus))
            return replace(d, conclusion=conclusion, premises=(p,), pos=pos)
        case Rule.MuTilde:
            pos = min(d.pos, len(G))
            p = _weaken(d.premises[0], _insert(G, pos, s.focus), D)
            return replace(d, conclusion=conclusion, premises=(p,), pos=pos)
        case Rule.ImpR:
            pos = min(d.pos, len(G))
            p = _weaken(d.premises[0], _insert(G, pos, s.focus.left), D)
            return replace(d, conclusion=conclusion, premises=(p,), pos=pos)
        case Rule.ExL | Rule.AllR:
            outer = frozenset().union(*map(free_vars, G + D))
            if d.eig in outer:
                d = _rename_eig(d, set(outer) | sequent_free_vars(s))
            p = _weaken(d.premises[0], G, D)
            return replace(d, conclusion=conclusion, premises=(p,))
    return replace(d, conclusion=conclusion,
                   premises=tuple(_weaken(p, G, D) for p in d.premises))
