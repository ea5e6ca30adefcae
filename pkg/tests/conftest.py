import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from lkkripke.syntax import (
    And, App, Atom, Bot, Const, Exists, Forall, Imp, Or, Top, Var,
)

settings.register_profile(
    "default", max_examples=150, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

VARS = ("x", "y", "z")
CONSTS = ("a", "b")


def terms(vars=VARS, consts=CONSTS):
    base = st.sampled_from([Var(v) for v in vars] + [Const(c) for c in consts])
    return st.recursive(
        base,
        lambda sub: st.builds(lambda f, args: App(f, tuple(args)),
                              st.sampled_from(["f", "g"]), st.lists(sub, min_size=1, max_size=2)),
        max_leaves=3,
    )


def atoms(vars=VARS, consts=CONSTS):
    return st.one_of(
        st.sampled_from([Atom("X"), Atom("Y"), Top(), Bot()]),
        st.builds(lambda ts: Atom("P", (ts,)), terms(vars, consts)),
        st.builds(lambda s, t: Atom("R", (s, t)), terms(vars, consts), terms(vars, consts)),
    )


def formulas(vars=VARS, consts=CONSTS, max_leaves=8):
    def extend(sub):
        return st.one_of(
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            st.builds(Imp, sub, sub),
            st.builds(Forall, st.sampled_from(vars), sub),
            st.builds(Exists, st.sampled_from(vars), sub),
        )
    return st.recursive(atoms(vars, consts), extend, max_leaves=max_leaves)


def propositional(max_leaves=8):
    base = st.sampled_from([Atom("X"), Atom("Y"), Atom("Z"), Top(), Bot()])
    return st.recursive(
        base,
        lambda sub: st.one_of(st.builds(And, sub, sub), st.builds(Or, sub, sub),
                              st.builds(Imp, sub, sub)),
        max_leaves=max_leaves,
    )


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
