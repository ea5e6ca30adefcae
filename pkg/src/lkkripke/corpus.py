"""Hand-written derivations used by the tests, the acceptance run and the
``fixtures`` command.

Three collections:

* ``corpus()``: checked derivations exercising every rule, cut-free or
  with axiom-guarded cuts only, plus the cut-bearing ones below;
* ``cut_corpus()``: derivations with at least one cut neither of whose
  premises is an axiom;
* ``mutants()``: broken derivations paired with the violation the checker
  must report.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

from . import calculus as C
from .calculus import Derivation, LeftFocus, Plain, RightFocus, Rule, Violation
from .syntax import Const, Formula, Var, parse_formula


@dataclass(frozen=True)
class Entry:
    name: str
    derivation: Derivation
    note: str = ""


@dataclass(frozen=True)
class Mutant:
    name: str
    derivation: Derivation
    violation: Violation


_CONSTS = ("c", "d")


def F(src: str) -> Formula:
    return parse_formula(src, _CONSTS)


X, Y, Z = F("X"), F("Y"), F("Z")
c = Const("c")


def lemma_cut(d: Derivation, lemma: Derivation) -> Derivation:
    """Cut an unused lemma  Γ ⊢ B | Δ  into a proof of  Γ ⊢ Δ."""
    s = d.conclusion
    b = lemma.conclusion.focus
    body = C.weaken(d, s.gamma + (b,), s.delta)
    return C.cut(lemma, C.mutilde(body, len(s.gamma)))


# -- cut-free or axiom-guarded derivations --------------------------------------------

def axr_id():
    return C.ax_r([X], X, [])


def axl_id():
    return C.ax_l([], X, [X])


def contr_l():
    return C.contract_left(C.ax_l([X], X, [X]))


def contr_r():
    return C.contract_right(C.ax_r([X], X, [X]))


def mu_x():
    return C.mu(contr_l(), 0)


def mutilde_x():
    return C.mutilde(contr_r(), 0)


def imp_id():
    return C.imp_r(C.ax_r([X], X, []))


def peirce():
    """⊢ ((X → Y) → X) → X |  without interior cuts."""
    f = F("(X -> Y) -> X")
    g = (f,)
    inner = C.imp_r(C.mu(C.cut(C.ax_r(g + (X,), X, [Y, X]), C.ax_l(g + (X,), X, [Y, X])), 0))
    body = C.imp_l(inner, C.ax_l(g, X, [X]))
    return C.imp_r(C.mu(C.contract_left(body), 0))


def modus_ponens():
    g = (X, F("X -> Y"))
    return C.mu(C.contract_left(C.imp_l(C.ax_r(g, X, [Y]), C.ax_l(g, Y, [Y]))), 0)


def or_comm():
    g = (F("X | Y"),)
    goal = F("Y | X")
    left = C.mutilde(C.contract_right(C.or_r2(C.ax_r(g + (X,), X, [goal]), Y)))
    right = C.mutilde(C.contract_right(C.or_r1(C.ax_r(g + (Y,), Y, [goal]), X)))
    return C.mu(C.contract_left(C.or_l(left, right)), 0)


def excluded_middle():
    em = F("X | ~X")
    neg = C.imp_r(C.mu(C.contract_right(C.or_r1(C.ax_r([X], X, [F("_|_"), em]), F("~X"))), 0))
    return C.mu(C.contract_right(C.or_r2(neg, X)), 0)


def and_comm():
    g = (F("X & Y"),)
    py = C.mu(C.contract_left(C.and_l2(C.ax_l(g, Y, [Y]), X)), 0)
    px = C.mu(C.contract_left(C.and_l1(C.ax_l(g, X, [X]), Y)), 0)
    return C.and_r(py, px)


def and_proj():
    g = (F("X & Y"),)
    return C.mu(C.contract_left(C.and_l1(C.ax_l(g, X, [X]), Y)), 0)


def ex_falso():
    bot = F("_|_")
    return C.mu(C.contract_left(C.bot_l([bot], [X])), 0)


def top_intro():
    return C.imp_r(C.top_r([X], []))


def top_pair():
    return C.and_r(C.top_r([], []), C.top_r([], []))


def bot_alone():
    return C.bot_l([], [])


def all_inst():
    a = F("forall x. P(x)")
    pc = F("P(c)")
    return C.mu(C.contract_left(C.all_l(C.ax_l([a], pc, [pc]), a, c)), 0)


def ex_intro():
    pc = F("P(c)")
    return C.ex_r(C.ax_r([pc], pc, []), F("exists x. P(x)"), c)


def all_to_ex():
    """∀x.P(x) ⊢ ∃x.P(x) |  with an open witness term."""
    a, e = F("forall x. P(x)"), F("exists x. P(x)")
    py = F("P(y)")
    inner = C.mu(C.contract_left(C.all_l(C.ax_l([a], py, [py]), a, Var("y"))), 0)
    return C.ex_r(inner, e, Var("y"))


def all_rename():
    a = F("forall x. P(x)")
    py = F("P(y)")
    return C.all_r(C.mu(C.contract_left(C.all_l(C.ax_l([a], py, [py]), a, Var("y"))), 0), "y")


def ex_rename():
    e = F("exists y. P(y)")
    px = F("P(x)")
    body = C.contract_right(C.ex_r(C.ax_r([px], px, [e]), e, Var("x")))
    return C.ex_l(C.mutilde(body, 0), "x")


def quantifier_swap():
    """∃x.∀y.R(x,y) ⊢ ∀y.∃x.R(x,y) |"""
    a = F("exists x. forall y. R(x, y)")
    e = F("exists x. R(x, y)")
    r = F("R(x, y)")
    g = (a,)
    body = C.contract_right(C.ex_r(C.ax_r(g + (r,), r, [e]), e, Var("x")))
    inst = C.all_l(C.mutilde(body), F("forall y. R(x, y)"), Var("y"))
    plain = C.contract_left(C.ex_l(inst, "x"))
    return C.all_r(C.mu(plain, 0), "y")


def de_morgan():
    """~(X | Y) ⊢ ~X & ~Y |"""
    n = F("~(X | Y)")
    bot = F("_|_")

    def neg_part(atom: Formula, intro) -> Derivation:
        g = (n, atom)
        disj = intro(C.ax_r(g, atom, [bot]))
        refuted = C.imp_l(disj, C.bot_l(g, [bot]))
        return C.imp_r(C.mu(C.contract_left(refuted), 0))

    return C.and_r(neg_part(X, lambda d: C.or_r1(d, Y)),
                   neg_part(Y, lambda d: C.or_r2(d, X)))


def drinker():
    """⊢ ∃x.(P(x) → ∀y.P(y)) |"""
    d_ = F("exists x. (P(x) -> forall y. P(y))")
    ay = F("forall y. P(y)")
    pz, py = F("P(z)"), F("P(y)")
    g2 = (pz, py)
    closing = C.mu(C.cut(C.ax_r(g2, py, [ay, py, d_]), C.ax_l(g2, py, [ay, py, d_])), 0)
    step = C.imp_r(closing)                                    # P(z) ⊢ P(y) → ∀y.P(y) | P(y), D
    inner = C.mu(C.contract_right(C.ex_r(step, d_, Var("y"))), 0)   # P(z) ⊢ P(y) | D
    outer = C.imp_r(C.all_r(inner, "y"))
    return C.mu(C.contract_right(C.ex_r(outer, d_, Var("z"))), 0)


def dn_elim():
    nn = F("~~X")
    bot = F("_|_")
    g = (nn,)
    absurd = C.mu(C.cut(C.ax_r(g + (X,), X, [bot, X]), C.ax_l(g + (X,), X, [bot, X])), 0)
    return C.mu(C.contract_left(C.imp_l(C.imp_r(absurd), C.bot_l(g, [X]))), 0)


def weakened_peirce():
    d = peirce()
    return C.weaken(d, [Y], [Z])


def distrib():
    """X & (Y | Z) ⊢ (X & Y) | (X & Z) |"""
    a = F("X & (Y | Z)")
    goal = F("(X & Y) | (X & Z)")
    g = (a,)

    def branch(atom: Formula, intro) -> Derivation:
        gg = g + (atom,)
        px = C.mu(C.contract_left(C.and_l1(C.ax_l(gg, X, [X, goal], pos=0), F("Y | Z"))), 0)
        both = C.and_r(px, C.ax_r(gg, atom, [goal]))
        return C.mutilde(C.contract_right(intro(both)))

    left = branch(Y, lambda d: C.or_r1(d, F("X & Z")))
    right = branch(Z, lambda d: C.or_r2(d, F("X & Y")))
    split = C.and_l2(C.or_l(left, right), X)
    return C.mu(C.contract_left(split), 0)


def contraposition():
    """X → Y ⊢ ~Y → ~X |"""
    imp = F("X -> Y")
    bot = F("_|_")
    g = (imp, F("~Y"), X)
    get_y = C.mu(C.contract_left(C.imp_l(C.ax_r(g, X, [Y, bot]), C.ax_l(g, Y, [Y, bot], pos=0))), 0)
    absurd = C.contract_left(C.imp_l(get_y, C.bot_l(g, [bot])))
    return C.imp_r(C.imp_r(C.mu(absurd, 0)))


def forall_and():
    """∀x.(P(x) & Q(x)) ⊢ ∀x.P(x) |"""
    a = F("forall x. (P(x) & Q(x))")
    px = F("P(x)")
    proj = C.and_l1(C.ax_l([a], px, [px]), F("Q(x)"))
    inst = C.all_l(proj, a, Var("x"))
    return C.all_r(C.mu(C.contract_left(inst), 0), "x")


def exists_or():
    """∃x.(P(x) | Q(x)) ⊢ (∃x.P(x)) | (∃x.Q(x)) |"""
    a = F("exists x. (P(x) | Q(x))")
    ep, eq = F("exists x. P(x)"), F("exists x. Q(x)")
    goal = F("(exists x. P(x)) | (exists x. Q(x))")
    g = (a,)

    def branch(atom: Formula, ex: Formula, intro) -> Derivation:
        gg = g + (atom,)
        wit = C.ex_r(C.ax_r(gg, atom, [goal]), ex, Var("x"))
        return C.mutilde(C.contract_right(intro(wit)))

    left = branch(F("P(x)"), ep, lambda d: C.or_r1(d, eq))
    right = branch(F("Q(x)"), eq, lambda d: C.or_r2(d, ep))
    return C.mu(C.contract_left(C.ex_l(C.or_l(left, right), "x")), 0)


def top_left():
    """T ⊢ T |  by the right rule, the left occurrence being idle."""
    t = F("T")
    return C.top_r([t], [])


def or_intro_pair():
    """X ⊢ (X | Y) & (Y | X) |"""
    return C.and_r(C.or_r1(C.ax_r([X], X, []), Y), C.or_r2(C.ax_r([X], X, []), Y))


def bot_in_context():
    """X, ⊥ ⊢ Y"""
    bot = F("_|_")
    return C.contract_left(C.bot_l([X, bot], [Y]))


def ex_l_const():
    """| ∃x.P(x) ⊢ ∃x.P(x)  via the eigenvariable ``u``"""
    e = F("exists x. P(x)")
    pu = F("P(u)")
    body = C.contract_right(C.ex_r(C.ax_r([pu], pu, [e]), e, Var("u")))
    return C.ex_l(C.mutilde(body, 0), "u")


# -- cut-bearing derivations ---------------------------------------------------------

def peirce_cut():
    """Peirce with an interior Cut(ImpR, ImpL) on (X → Y) → X."""
    f = F("(X -> Y) -> X")
    xy = F("X -> Y")
    g = (f,)
    # Γ ⊢ X → Y | X
    to_y = C.imp_r(C.mu(C.cut(C.ax_r(g + (X,), X, [Y, X]), C.ax_l(g + (X,), X, [Y, X])), 0))
    # Γ ⊢ F | X  by η-expanding the hypothesis
    gg = g + (xy,)
    eta = C.imp_r(C.mu(C.contract_left(C.imp_l(C.ax_r(gg, xy, [X, X]), C.ax_l(gg, X, [X, X]))), 0))
    use = C.imp_l(to_y, C.ax_l(g, X, [X]))
    return C.imp_r(C.mu(C.cut(eta, use), 0))


def cut_and():
    g = (X, Y)
    return C.cut(C.and_r(C.ax_r(g, X, [X]), C.ax_r(g, Y, [X])), C.and_l1(C.ax_l(g, X, [X]), Y))


def cut_or():
    d = (X, Y)
    return C.cut(C.or_r1(C.ax_r([X], X, d), Y), C.or_l(C.ax_l([X], X, d), C.ax_l([X], Y, d)))


def cut_all():
    a = F("forall x. P(x)")
    pc, px = F("P(c)"), F("P(x)")
    g, d = (a,), (pc,)
    gen = C.all_r(C.mu(C.contract_left(C.all_l(C.ax_l(g, px, (px,) + d, pos=0), a, Var("x"))), 0), "x")
    use = C.all_l(C.ax_l(g, pc, d), a, c)
    return C.cut(gen, use)


def cut_exists():
    e = F("exists x. P(x)")
    pc, px = F("P(c)"), F("P(x)")
    g, d = (pc,), (e,)
    intro = C.ex_r(C.ax_r(g, pc, d), e, c)
    elim = C.ex_l(C.mutilde(C.contract_right(C.ex_r(C.ax_r(g + (px,), px, d), e, Var("x")))), "x")
    return C.cut(intro, elim)


def cut_critical_pair():
    """Cut(μ, μ̃), the classical critical pair."""
    left = C.mu(C.cut(C.ax_r([X], X, [X, X]), C.ax_l([X], X, [X, X])), 0)
    right = C.mutilde(C.cut(C.ax_r([X, X], X, [X]), C.ax_l([X, X], X, [X])), 0)
    return C.cut(left, right)


def cut_top():
    body = C.contract_right(C.weaken(imp_id(), [], [F("X -> X")]))
    return lemma_cut(body, C.top_r([], [F("X -> X")]))


def cut_bot():
    bot = F("_|_")
    left = C.mu(C.contract_left(C.bot_l([bot], [bot])), 0)
    return C.cut(left, C.bot_l([bot], []))


def cut_nested():
    em = F("X | ~X")
    body = C.contract_right(C.weaken(excluded_middle(), [], [em]))
    once = lemma_cut(body, C.weaken(imp_id(), [], [em]))
    s = once.conclusion
    return lemma_cut(once, C.weaken(top_pair(), s.gamma, s.delta))


def cut_excluded_middle():
    em = F("X | ~X")
    body = C.contract_right(C.weaken(excluded_middle(), [], [em]))
    return lemma_cut(body, C.weaken(imp_id(), [], [em]))


def cut_quantified():
    a, e = F("forall x. P(x)"), F("exists x. P(x)")
    body = C.contract_right(C.weaken(all_to_ex(), [a], [e]))
    lemma = C.weaken(all_rename(), [a], [e])
    return lemma_cut(body, lemma)


def cut_peirce_lemma():
    p = F("((X -> Y) -> X) -> X")
    body = C.contract_right(C.weaken(peirce(), [], [p]))
    return C.mu(lemma_cut(body, C.weaken(peirce_cut(), [], [p])), 0)


def cut_swap():
    """Quantifier swap with a cut on the hypothesis itself, η-expanded."""
    d = quantifier_swap()
    a = F("exists x. forall y. R(x, y)")
    goal = d.conclusion.focus
    plain = C.contract_right(C.weaken(d, [a], [goal]))
    return lemma_cut(plain, C.weaken(C.imp_r(C.ax_r([X], X, [])), [a], [goal]))


def cut_modus_ponens():
    """Cut(ImpR, ImpL) on X → X at X ⊢ X."""
    g, d = (X,), (X,)
    return C.cut(C.imp_r(C.ax_r(g + (X,), X, d)), C.imp_l(C.ax_r(g, X, d), C.ax_l(g, X, d)))


_CUT_FREE = [
    ("axr_id", axr_id), ("axl_id", axl_id), ("contr_l", contr_l), ("contr_r", contr_r),
    ("mu_x", mu_x), ("mutilde_x", mutilde_x), ("imp_id", imp_id), ("peirce", peirce),
    ("modus_ponens", modus_ponens), ("or_comm", or_comm), ("excluded_middle", excluded_middle),
    ("and_comm", and_comm), ("and_proj", and_proj), ("ex_falso", ex_falso),
    ("top_intro", top_intro), ("top_pair", top_pair), ("bot_alone", bot_alone),
    ("all_inst", all_inst), ("ex_intro", ex_intro), ("all_to_ex", all_to_ex),
    ("all_rename", all_rename), ("ex_rename", ex_rename), ("quantifier_swap", quantifier_swap),
    ("de_morgan", de_morgan), ("drinker", drinker), ("dn_elim", dn_elim),
    ("weakened_peirce", weakened_peirce), ("forall_and", forall_and), ("exists_or", exists_or),
    ("top_left", top_left), ("or_intro_pair", or_intro_pair), ("bot_in_context", bot_in_context),
    ("ex_l_const", ex_l_const), ("distrib", distrib), ("contraposition", contraposition),
]

_CUTS = [
    ("peirce_cut", peirce_cut), ("cut_and", cut_and), ("cut_or", cut_or),
    ("cut_all", cut_all), ("cut_exists", cut_exists), ("cut_critical_pair", cut_critical_pair),
    ("cut_top", cut_top), ("cut_bot", cut_bot), ("cut_nested", cut_nested),
    ("cut_excluded_middle", cut_excluded_middle), ("cut_quantified", cut_quantified),
    ("cut_peirce_lemma", cut_peirce_lemma), ("cut_swap", cut_swap),
    ("cut_modus_ponens", cut_modus_ponens),
]


@lru_cache(maxsize=None)
def cut_corpus() -> tuple[Entry, ...]:
    return tuple(Entry(name, build()) for name, build in _CUTS)


@lru_cache(maxsize=None)
def corpus() -> tuple[Entry, ...]:
    return tuple(Entry(name, build()) for name, build in _CUT_FREE) + cut_corpus()


def by_name(name: str) -> Derivation:
    for e in corpus():
        if e.name == name:
            return e.derivation
    raise KeyError(name)


# -- mutants -----------------------------------------------------------------------

def mutants() -> tuple[Mutant, ...]:
    out = []

    def add(name, d, v):
        out.append(Mutant(name, d, v))

    d = mu_x()
    add("mu_wrong_active", replace(d, conclusion=RightFocus((X,), Y, ())), Violation.ACTIVE)

    d = and_comm()
    add("and_r_one_premise", replace(d, premises=d.premises[:1]), Violation.ARITY)

    d = axr_id()
    add("axr_plain", replace(d, conclusion=Plain((X,), ())), Violation.SHAPE)

    py = F("P(y)")
    add("all_r_eig_free", C.all_r(C.ax_r([py], py, []), "y"), Violation.EIGEN)

    e = F("exists y. P(y)")
    add("ex_l_eig_free",
        C.ex_l(C.mutilde(C.contract_right(C.ex_r(C.ax_r([py, py], py, [e]), e, Var("y"))), 0), "y"),
        Violation.EIGEN)

    d = contr_l()
    left = replace(d.premises[0], conclusion=RightFocus((X, Y), X, ()), pos=0)
    add("cut_context_mismatch", replace(d, premises=(left, d.premises[1])), Violation.CONTEXT)

    d = modus_ponens().premises[0].premises[1]     # the ImpL node
    bad = C.ax_r((X,), X, (Y,))
    add("imp_l_context_mismatch", replace(d, premises=(bad, d.premises[1])), Violation.CONTEXT)

    add("axl_wrong_pos", replace(C.ax_l([], X, [Y, X]), pos=0), Violation.ACTIVE)

    d = all_inst().premises[0].premises[1]          # the AllL node
    add("all_l_missing_term", replace(d, term=None), Violation.DATA)

    d = imp_id()
    add("imp_r_wrong_consequent",
        replace(d, conclusion=RightFocus((), F("X -> Y"), ())), Violation.ACTIVE)

    d = mu_x()
    add("mu_focused_premise", replace(d, premises=(C.ax_r([X], X, [X]),)), Violation.SHAPE)

    d = all_inst().premises[0].premises[1]
    add("all_l_wrong_term", replace(d, term=Const("d")), Violation.ACTIVE)

    add("bot_l_on_top", replace(C.bot_l([], []), conclusion=LeftFocus((), F("T"), ())),
        Violation.ACTIVE)

    d = and_proj()
    add("mu_missing_pos", replace(d, pos=None), Violation.DATA)

    return tuple(out)
