import pytest
from hypothesis import given, strategies as st

from conftest import CONSTS, formulas, propositional, terms
from lkkripke.syntax import (
    BOT, DEFAULT_CONST, TOP, And, App, Atom, Bot, Const, Exists, Forall, Imp, Or,
    ParseError, Top, Var, alpha_eq, dn_translate, free_vars, fresh_name,
    instantiate, is_gensym, is_sentence, neg, parse_context, parse_formula,
    parse_term, print_formula, replace_const, split_top_level, subst_var,
)

X, Y = Atom("X"), Atom("Y")
A, B = Atom("A"), Atom("B")
x, y = Var("x"), Var("y")
c = Const("c")


def P(*args):
    return Atom("P", tuple(args))


# -- parsing --------------------------------------------------------------------

@pytest.mark.parametrize("src, expected", [
    ("((A -> B) -> A) -> A", Imp(Imp(Imp(A, B), A), A)),
    ("~X", Imp(X, Bot())),
    ("forall x. P(x)", Forall("x", P(x))),
    ("A -> B -> A", Imp(A, Imp(B, A))),
    ("A | B | X", Or(Or(A, B), X)),
    ("A & B | X", Or(And(A, B), X)),
    ("A | B & X", Or(A, And(B, X))),
    ("~A & B", And(neg(A), B)),
    ("~~A", neg(neg(A))),
    ("T", Top()),
    ("_|_", Bot()),
    ("exists x. P(x) -> A", Exists("x", Imp(P(x), A))),
    ("(exists x. P(x)) -> A", Imp(Exists("x", P(x)), A)),
    ("A & forall x. P(x) | X", And(A, Forall("x", Or(P(x), X)))),
    ("R(x, f(y, c))", Atom("R", (x, App("f", (y, Var("c")))))),
])
def test_parse_examples(src, expected):
    assert parse_formula(src) == expected


def test_declared_constants_parse_as_constants():
    assert parse_formula("P(c) & P(x)", consts=["c"]) == And(P(c), P(x))
    assert parse_term("f(c, y)", consts=["c"]) == App("f", (c, y))


@pytest.mark.parametrize("src", [
    "", "A ->", "(A", "A)", "forall . A", "P(x,)", "A B", "forall x A", "P(#0)", "#c0",
    "A $ B",
])
def test_parse_errors(src):
    with pytest.raises(ParseError):
        parse_formula(src)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as e:
        parse_formula("A & & B")
    assert e.value.pos == 4


def test_gensym_prefix_rejected_with_position():
    with pytest.raises(ParseError) as e:
        parse_formula("P(#3)")
    assert e.value.pos == 2


def test_parse_context_splits_top_level_commas():
    assert split_top_level("P(x, y), Q") == ["P(x, y)", "Q"]
    assert split_top_level("   ") == []
    assert parse_context("X, ~X, R(x, y)") == (X, neg(X), Atom("R", (x, y)))


# -- printing -------------------------------------------------------------------

@pytest.mark.parametrize("f, plain, sugared", [
    (neg(X), "X -> _|_", "~X"),
    (Top(), "T", "T"),
    (Exists("x", P(x)), "exists x. P(x)", "exists x. P(x)"),
    (Imp(Imp(Imp(A, B), A), A), "((A -> B) -> A) -> A", "((A -> B) -> A) -> A"),
    (neg(And(neg(A), neg(B))), "(A -> _|_) & (B -> _|_) -> _|_", "~(~A & ~B)"),
    (Imp(Forall("x", P(x)), A), "(forall x. P(x)) -> A", "(forall x. P(x)) -> A"),
    (neg(Forall("x", neg(P(x)))), "(forall x. P(x) -> _|_) -> _|_", "~(forall x. ~P(x))"),
])
def test_print_examples(f, plain, sugared):
    assert print_formula(f) == plain
    assert print_formula(f, neg_sugar=True) == sugared


@given(formulas())
def test_print_parse_roundtrip(f):
    assert parse_formula(print_formula(f), CONSTS) == f
    assert parse_formula(print_formula(f, neg_sugar=True), CONSTS) == f


# -- free variables and substitution ---------------------------------------------

def test_free_vars_examples():
    assert free_vars(Forall("x", Atom("P", (x, y)))) == {"y"}
    assert free_vars(P(c)) == frozenset()
    assert is_sentence(Imp(Imp(Imp(A, B), A), A))
    assert not is_sentence(P(x))


def test_subst_var_examples():
    assert subst_var(P(x), "x", c) == P(c)
    assert subst_var(Forall("x", P(x)), "x", c) == Forall("x", P(x))
    assert subst_var(Exists("y", Atom("Q", (x, y))), "x", c) == Exists("y", Atom("Q", (c, y)))


def test_subst_var_avoids_capture():
    f = Exists("y", Atom("Q", (x, y)))
    g = subst_var(f, "x", y)
    assert isinstance(g, Exists) and g.var != "y"
    assert g.body == Atom("Q", (y, Var(g.var)))


def test_replace_const_examples():
    assert replace_const(P(c), "c", y) == P(y)
    assert replace_const(P(Const("d")), "c", y) == P(Const("d"))
    assert replace_const(Forall("x", Atom("Q", (c, x))), "c", y) == Forall("x", Atom("Q", (y, x)))


def test_replace_const_renames_binders_it_would_capture():
    f = Forall("y", Atom("Q", (c, y)))
    g = replace_const(f, "c", y)
    assert g.var != "y" and free_vars(g) == {"y"}


@given(formulas(), st.sampled_from(["x", "y", "z"]), terms())
def test_subst_var_free_vars_bound(f, v, t):
    from lkkripke.syntax import term_vars
    out = subst_var(f, v, t)
    assert free_vars(out) <= (free_vars(f) - {v}) | term_vars(t)
    if v not in free_vars(f):
        assert alpha_eq(out, f)


@given(formulas(consts=("a",)), st.sampled_from(["x", "y", "z"]))
def test_const_var_roundtrip(f, v):
    # c is absent from f, so instantiating v by c and abstracting c again
    # gives f back
    back = replace_const(subst_var(f, v, Const("c")), "c", Var(v))
    assert back == f


def test_instantiate_is_simultaneous():
    f = Atom("R", (x, y))
    assert instantiate(f, {"x": y, "y": x}) == Atom("R", (y, x))


def test_alpha_equivalence():
    assert alpha_eq(Forall("x", P(x)), Forall("y", P(y)))
    assert not alpha_eq(Forall("x", P(x)), Forall("y", P(x)))
    assert alpha_eq(Exists("x", Forall("y", Atom("R", (x, y)))),
                    Exists("u", Forall("x", Atom("R", (Var("u"), x)))))


def test_fresh_names_and_gensyms():
    assert fresh_name("x", {"x", "x1"}) == "x2"
    assert fresh_name("y3", {"y"}) == "y3"
    assert fresh_name("y3", {"y3"}) == "y1"
    assert is_gensym("#0") and is_gensym(DEFAULT_CONST) and not is_gensym("c")


# -- double-negation translation ----------------------------------------------------

def test_dn_examples():
    assert dn_translate(Or(A, B)) == Imp(And(Imp(A, Bot()), Imp(B, Bot())), Bot())
    assert dn_translate(X) == X
    assert dn_translate(Exists("x", P(x))) == neg(Forall("x", neg(P(x))))
    assert dn_translate(TOP) == TOP and dn_translate(BOT) == BOT


def test_dn_translates_inside_negative_connectives():
    f = Imp(Or(A, B), Forall("x", Exists("y", Atom("R", (x, y)))))
    assert dn_translate(f) == Imp(
        neg(And(neg(A), neg(B))),
        Forall("x", neg(Forall("y", neg(Atom("R", (x, y)))))))


def _negative(f):
    match f:
        case Or() | Exists():
            return False
        case And(a, b) | Imp(a, b):
            return _negative(a) and _negative(b)
        case Forall(_, a):
            return _negative(a)
    return True


@given(formulas())
def test_dn_is_identity_on_negative_fragment(f):
    if _negative(f):
        assert dn_translate(f) == f
    assert _negative(dn_translate(f))


@given(propositional())
def test_dn_idempotent(f):
    assert dn_translate(dn_translate(f)) == dn_translate(f)
