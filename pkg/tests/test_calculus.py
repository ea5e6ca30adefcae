import itertools
import random
from dataclasses import replace

import pytest
from lkkripke import calculus as C, corpus as K
from lkkripke.calculus import (
    CalculusError, CheckError, LeftFocus, Plain, RightFocus, Rule, Violation, check,
    is_normal,
)
from lkkripke.syntax import (
    And, Atom, Bot, Const, Imp, Or, Top, Var, neg, parse_formula,
)

X, Y, Z = Atom("X"), Atom("Y"), Atom("Z")
A, B = Atom("A"), Atom("B")


# -- checker -----------------------------------------------------------------------

def test_axiom_right():
    assert check(C.ax_r([A], A, [])) == RightFocus((A,), A, ())


def test_contraction_cut_instance():
    # Cut(AxR: X ⊢ X | X, AxL: X | X ⊢ X) concluding X ⊢ X
    d = C.cut(C.ax_r([X], X, [X]), C.ax_l([X], X, [X]))
    assert check(d) == Plain((X,), (X,))
    assert is_normal(d)


def test_mu_with_wrong_active_formula():
    good = C.mu(C.contract_left(C.ax_l([X], X, [X])), 0)
    bad = replace(good, conclusion=RightFocus((X,), Y, ()))
    with pytest.raises(CheckError) as e:
        check(bad)
    assert e.value.kind is Violation.ACTIVE
    assert e.value.rule is Rule.Mu
    assert "wrong active formula" in str(e.value)


def test_error_carries_path():
    d = K.by_name("peirce")
    inner = d.premises[0].premises[0]                        # Cut under μ under →_R
    broken_leaf = replace(inner.premises[0], pos=None)       # the AxR of Contr_L
    broken = replace(d, premises=(replace(d.premises[0], premises=(
        replace(inner, premises=(broken_leaf, inner.premises[1])),)),))
    with pytest.raises(CheckError) as e:
        check(broken)
    assert e.value.path == (0, 0, 0)
    assert e.value.kind is Violation.DATA


@pytest.mark.parametrize("entry", K.corpus(), ids=lambda e: e.name)
def test_corpus_checks(entry):
    s = check(entry.derivation)
    assert s is entry.derivation.conclusion


def test_corpus_covers_every_rule_twice():
    counts = {r: 0 for r in Rule}
    for e in K.corpus():
        for r in C.rules_used(e.derivation):
            counts[r] += 1
    assert all(n >= 2 for n in counts.values()), counts
    assert len(K.corpus()) >= 30


@pytest.mark.parametrize("m", K.mutants(), ids=lambda m: m.name)
def test_mutants_rejected_with_their_violation(m):
    with pytest.raises(CheckError) as e:
        check(m.derivation)
    assert e.value.kind is m.violation


def test_eigenvariable_must_not_occur_in_conclusion():
    p = parse_formula("P(y)")
    with pytest.raises(CheckError) as e:
        check(C.all_r(C.ax_r([p], p, []), "y"))
    assert e.value.kind is Violation.EIGEN


def test_checker_accepts_alpha_variants_in_contexts():
    a1, a2 = parse_formula("forall x. P(x)"), parse_formula("forall y. P(y)")
    check(C.ax_r([a1], a2, [], pos=0))


# -- normal predicate ------------------------------------------------------------------

def test_normal_examples():
    assert is_normal(K.by_name("peirce"))
    assert is_normal(C.contract_left(C.ax_l([X], X, [X])))
    d = K.by_name("cut_and")
    assert not is_normal(d)


def test_cut_between_introductions_is_not_normal():
    body = C.contract_right(C.weaken(K.by_name("imp_id"), [], [parse_formula("X -> X")]))
    lemma = C.imp_r(C.ax_r([X], X, [parse_formula("X -> X")]))
    d = K.lemma_cut(body, lemma)
    check(d)
    assert d.premises[0].rule is Rule.ImpR and d.premises[1].rule is Rule.MuTilde
    assert not is_normal(d)


@pytest.mark.parametrize("entry", K.cut_corpus(), ids=lambda e: e.name)
def test_cut_corpus_is_not_normal(entry):
    assert not is_normal(entry.derivation)


# -- contraction macros -------------------------------------------------------------

def test_contract_left_example():
    d = C.contract_left(C.ax_l([X], X, [X]))
    assert check(d) == Plain((X,), (X,))
    assert [n.rule for n in C.nodes(d)] == [Rule.Cut, Rule.AxR, Rule.AxL]


def test_contract_right_example():
    d = C.contract_right(C.ax_r([X], X, [X]))
    assert check(d) == Plain((X,), (X,))


def test_contract_shape_mismatch():
    with pytest.raises(CalculusError):
        C.contract_left(C.ax_r([X], X, []))
    with pytest.raises(CalculusError):
        C.contract_right(C.ax_l([], X, [X]))
    with pytest.raises(CalculusError):
        C.contract_left(C.ax_l([], X, [X]))      # focus not in Γ


@pytest.mark.parametrize("entry", [e for e in K.corpus() if isinstance(e.derivation.conclusion, LeftFocus)],
                         ids=lambda e: e.name)
def test_contract_left_preserves_normality(entry):
    d = entry.derivation
    s = d.conclusion
    prepped = C.weaken(d, s.gamma + (s.focus,), s.delta)
    out = C.contract_left(prepped)
    check(out)
    assert is_normal(out) == is_normal(d)


# -- weakening -----------------------------------------------------------------------

def test_weaken_axiom():
    d = C.weaken(C.ax_r([A], A, []), [A, B], [Z])
    assert check(d) == RightFocus((A, B), A, (Z,))
    assert d.rule is Rule.AxR


def test_weaken_identity():
    d = K.by_name("quantifier_swap")
    assert C.alpha_equal(C.weaken(d, d.conclusion.gamma, d.conclusion.delta), d)


def test_weaken_requires_inclusion():
    with pytest.raises(CalculusError):
        C.weaken(C.ax_r([A, B], A, []), [A], [])


def test_weaken_renames_clashing_eigenvariable():
    d = K.by_name("quantifier_swap")                 # eigenvariables x and y
    px = parse_formula("P(x, y)")
    w = C.weaken(d, d.conclusion.gamma + (px,), d.conclusion.delta)
    check(w)
    assert w.eig != "y"


def _random_extra(rng: random.Random):
    pool = [X, Y, Z, parse_formula("P(x)"), parse_formula("R(x, y)"), parse_formula("Q(y)"),
            parse_formula("forall x. P(x)"), neg(X)]
    return [rng.choice(pool) for _ in range(rng.randint(0, 2))]


@pytest.mark.parametrize("entry", K.corpus(), ids=lambda e: e.name)
def test_random_weakening_checks_and_keeps_cuts(entry):
    rng = random.Random(entry.name)
    d = entry.derivation
    for _ in range(3):
        g = list(d.conclusion.gamma)
        for f in _random_extra(rng):
            g.insert(rng.randint(0, len(g)), f)
        dl = list(d.conclusion.delta)
        for f in _random_extra(rng):
            dl.insert(rng.randint(0, len(dl)), f)
        w = C.weaken(d, g, dl)
        s = check(w)
        assert s.gamma == tuple(g) and s.delta == tuple(dl)
        assert C.count_cuts(w) == C.count_cuts(d)
        assert is_normal(w) == is_normal(d)


# -- constant renaming -------------------------------------------------------------

def test_rename_const_axiom():
    pc, py = parse_formula("P(c)", ["c"]), parse_formula("P(y)")
    d = C.rename_const_to_var(C.ax_r([pc], pc, []), "c", "y")
    assert check(d) == RightFocus((py,), py, ())


def test_rename_fresh_constant_then_generalize():
    # a fresh constant is as good as a fresh variable
    a = parse_formula("forall x. P(x)")
    pc = parse_formula("P(c)", ["c"])
    d = C.mu(C.contract_left(C.all_l(C.ax_l([a], pc, [pc]), a, Const("c"))), 0)
    r = C.rename_const_to_var(d, "c", "y")
    assert check(r) == RightFocus((a,), parse_formula("P(y)"), ())
    check(C.all_r(r, "y"))
    assert C.count_cuts(r) == C.count_cuts(d)


def test_rename_absent_constant_is_identity():
    d = K.by_name("peirce")
    assert C.alpha_equal(C.rename_const_to_var(d, "zz", "y"), d)


def test_rename_refuses_variable_in_conclusion():
    with pytest.raises(CalculusError):
        C.rename_const_to_var(C.ax_r([parse_formula("P(y)")], parse_formula("P(y)"), []), "c", "y")


@pytest.mark.parametrize("entry", [e for e in K.corpus() if "c" in C.derivation_constants(e.derivation)],
                         ids=lambda e: e.name)
def test_rename_keeps_cut_count_and_normality(entry):
    d = entry.derivation
    r = C.rename_const_to_var(d, "c", "v")
    check(r)
    assert C.count_cuts(r) == C.count_cuts(d) and is_normal(r) == is_normal(d)


# -- α-renaming of eigenvariables ---------------------------------------------------

@pytest.mark.parametrize("entry", [e for e in K.corpus() if C.rules_used(e.derivation) & {Rule.ExL, Rule.AllR}],
                         ids=lambda e: e.name)
def test_recheck_after_renaming_eigenvariables(entry):
    d = entry.derivation

    def go(n):
        if n.rule in C.EIGEN_RULES:
            new = n.eig + "_r"
            p = C.subst_deriv(n.premises[0], {n.eig: Var(new)})
            return replace(n, premises=(go(p),), eig=new)
        return replace(n, premises=tuple(go(p) for p in n.premises))

    check(go(d))


# -- erasing the bars ---------------------------------------------------------------

def _valuations(atoms):
    for bits in itertools.product([False, True], repeat=len(atoms)):
        yield dict(zip(atoms, bits))


def _truth(f, v):
    match f:
        case Atom(p):
            return v[p]
        case Top():
            return True
        case Bot():
            return False
        case And(a, b):
            return _truth(a, v) and _truth(b, v)
        case Or(a, b):
            return _truth(a, v) or _truth(b, v)
        case Imp(a, b):
            return (not _truth(a, v)) or _truth(b, v)
    raise TypeError(f)


def _props(f):
    match f:
        case Atom(p):
            return {p}
        case And(a, b) | Or(a, b) | Imp(a, b):
            return _props(a) | _props(b)
    return set()


def _valid(s):
    fs = list(C.sequent_formulas(s))
    gamma = list(s.gamma)
    delta = list(s.delta)
    match s:
        case LeftFocus():
            gamma.append(s.focus)
        case RightFocus():
            delta.append(s.focus)
    ps = sorted(set().union(*map(_props, fs))) if fs else []
    return all(not all(_truth(g, v) for g in gamma) or any(_truth(d, v) for d in delta)
               for v in _valuations(ps))


@pytest.mark.parametrize("entry", [e for e in K.corpus()
                                   if not C.rules_used(e.derivation) & {Rule.ExL, Rule.ExR, Rule.AllL, Rule.AllR}],
                         ids=lambda e: e.name)
def test_erased_sequents_are_classically_valid(entry):
    # with the focus moved back into its side, every node is a valid LK sequent
    for n in C.nodes(entry.derivation):
        assert _valid(n.conclusion), C.print_sequent(n.conclusion)
