"""Finite classical Kripke models: validation, strong refutation / forcing /
refutation, the induced intuitionistic forcing, a lemma audit and a brute
force soundness check for derivations."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

import yaml

from .calculus import Derivation, LeftFocus, Plain, RightFocus, check
from .syntax import (
    And, App, Atom, Bot, Const, Exists, Forall, Formula, Imp, Or, Top,
    constants, free_vars, instantiate, neg, parse_formula, print_formula,
    split_top_level, subst_var,
)


class ModelError(ValueError):
    def __init__(self, kind: "ModelViolation", detail: str):
        self.kind = kind
        self.detail = detail
        super().__init__(f"{kind.value}: {detail}")


class ModelViolation(str, enum.Enum):
    EMPTY = "no worlds"
    UNKNOWN_WORLD = "unknown world"
    NOT_POSET = "non-poset"
    DOM_NOT_MONOTONE = "dom not monotone"
    ATOM_NOT_MONOTONE = "atom not monotone"
    EXPLODING_NOT_UPWARD = "exploding not upward closed"
    ATOM_ARGS = "atom args outside dom"
    NOT_GROUND = "formula is not ground"
    ELEMENT_OUTSIDE_DOM = "element outside dom"
    EMPTY_DOMAIN = "empty domain"


@dataclass(frozen=True)
class FiniteModel:
    worlds: tuple[str, ...]
    leq: frozenset[tuple[str, str]]
    dom: Mapping[str, frozenset[str]]
    srefutes_atom: frozenset[tuple[str, Atom]]
    exploding: frozenset[str]
    _up: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def le(self, w: str, v: str) -> bool:
        return (w, v) in self.leq

    def up(self, w: str) -> tuple[str, ...]:
        """Worlds above ``w`` (including ``w``), in declaration order."""
        if w not in self._up:
            self._up[w] = tuple(v for v in self.worlds if (w, v) in self.leq)
        return self._up[w]

    def elements(self) -> frozenset[str]:
        return frozenset().union(*self.dom.values())

    def predicates(self) -> dict[str, int]:
        return {a.pred: len(a.args) for _, a in self.srefutes_atom}


def reflexive_transitive_closure(worlds: Iterable[str], pairs: Iterable[tuple[str, str]]):
    worlds = list(worlds)
    rel = set(pairs) | {(w, w) for w in worlds}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return frozenset(rel)


def make_model(worlds, leq, dom, srefutes, exploding=()) -> tuple[FiniteModel, frozenset]:
    """Build a model, closing ``leq`` reflexively and transitively.
    Returns the model and the pairs the closure added."""
    worlds = tuple(worlds)
    given = frozenset(tuple(p) for p in leq)
    closed = reflexive_transitive_closure(worlds, given)
    m = FiniteModel(
        worlds=worlds,
        leq=closed,
        dom={w: frozenset(dom.get(w, ())) for w in worlds},
        srefutes_atom=frozenset((w, a) for w, a in srefutes),
        exploding=frozenset(exploding),
    )
    return m, closed - given


def validate_model(m: FiniteModel) -> None:
    if not m.worlds:
        raise ModelError(ModelViolation.EMPTY, "the set of worlds is empty")
    ws = set(m.worlds)
    for a, b in m.leq:
        if a not in ws or b not in ws:
            raise ModelError(ModelViolation.UNKNOWN_WORLD, f"({a}, {b}) in leq")
    for w in m.worlds:
        if (w, w) not in m.leq:
            raise ModelError(ModelViolation.NOT_POSET, f"{w} is not reflexive")
    for (a, b), (c, d) in itertools.product(m.leq, m.leq):
        if b == c and (a, d) not in m.leq:
            raise ModelError(ModelViolation.NOT_POSET, f"{a} <= {b} <= {d} but not {a} <= {d}")
    for a, b in m.leq:
        if a != b and (b, a) in m.leq:
            raise ModelError(ModelViolation.NOT_POSET, f"{a} and {b} are mutually below each other")
    for a, b in m.leq:
        if not m.dom[a] <= m.dom[b]:
            raise ModelError(ModelViolation.DOM_NOT_MONOTONE, f"dom({a}) not included in dom({b})")
    for w, atom in m.srefutes_atom:
        if w not in ws:
            raise ModelError(ModelViolation.UNKNOWN_WORLD, f"{w} in srefutes")
        for t in atom.args:
            if not isinstance(t, Const) or t.name not in m.dom[w]:
                raise ModelError(ModelViolation.ATOM_ARGS,
                                 f"{print_formula(atom)} at {w} uses {t}, not in dom({w})")
    for w, atom in m.srefutes_atom:
        for v in m.up(w):
            if (v, atom) not in m.srefutes_atom:
                raise ModelError(ModelViolation.ATOM_NOT_MONOTONE,
                                 f"{print_formula(atom)} strongly refuted at {w} but not at {v}")
    for w in m.exploding:
        if w not in ws:
            raise ModelError(ModelViolation.UNKNOWN_WORLD, f"{w} in exploding")
        for v in m.up(w):
            if v not in m.exploding:
                raise ModelError(ModelViolation.EXPLODING_NOT_UPWARD,
                                 f"{w} is exploding but {v} is not")


# -- evaluation ---------------------------------------------------------------

def instance(body: Formula, x: str, d: str) -> Formula:
    return subst_var(body, x, Const(d))


class Evaluator:
    """Memoised evaluation of the three relations on one model.

    The definitions are mutually recursive but stratified: ``refutes`` on A
    consults ``forces`` on A at the worlds above, ``forces`` on A consults
    ``srefutes`` on A, and ``srefutes`` only recurses into strict
    subformulas. Tables are keyed on (world, formula)."""

    def __init__(self, m: FiniteModel):
        self.m = m
        self._sref: dict = {}
        self._forc: dict = {}
        self._refu: dict = {}
        self._intu: dict = {}

    def ground_check(self, w: str, f: Formula) -> None:
        if w not in self.m.dom:
            raise ModelError(ModelViolation.UNKNOWN_WORLD, w)
        if free_vars(f):
            raise ModelError(ModelViolation.NOT_GROUND,
                             f"{print_formula(f)} has free variables {sorted(free_vars(f))}")
        outside = constants(f) - self.m.dom[w]
        if outside:
            raise ModelError(ModelViolation.ELEMENT_OUTSIDE_DOM,
                             f"{sorted(outside)} not in dom({w})")

    def exploding(self, w: str) -> bool:
        return w in self.m.exploding

    def srefutes(self, w: str, f: Formula) -> bool:
        key = (w, f)
        hit = self._sref.get(key)
        if hit is not None:
            return hit
        m = self.m
        match f:
            case Atom(_, args):
                if any(isinstance(t, App) for t in args):
                    raise ModelError(ModelViolation.NOT_GROUND, "function symbols are not interpreted")
                r = (w, f) in m.srefutes_atom
            case Bot():
                r = True
            case Top():
                r = False
            case And(a, b):
                r = self.refutes(w, a) or self.refutes(w, b)
            case Or(a, b):
                r = self.refutes(w, a) and self.refutes(w, b)
            case Imp(a, b):
                r = self.forces(w, a) and self.refutes(w, b)
            case Forall(x, a):
                r = any(self.refutes(w, instance(a, x, d)) for d in sorted(m.dom[w]))
            case Exists(x, a):
                r = all(self.refutes(v, instance(a, x, d))
                        for v in m.up(w) for d in sorted(m.dom[v]))
            case _:
                raise TypeError(f)
        self._sref[key] = r
        return r

    def forces(self, w: str, f: Formula) -> bool:
        key = (w, f)
        hit = self._forc.get(key)
        if hit is None:
            hit = all(self.exploding(v) or not self.srefutes(v, f) for v in self.m.up(w))
            self._forc[key] = hit
        return hit

    def refutes(self, w: str, f: Formula) -> bool:
        key = (w, f)
        hit = self._refu.get(key)
        if hit is None:
            hit = all(self.exploding(v) or not self.forces(v, f) for v in self.m.up(w))
            self._refu[key] = hit
        return hit

    def forces_intuitionistic(self, w: str, f: Formula) -> bool:
        key = (w, f)
        hit = self._intu.get(key)
        if hit is not None:
            return hit
        m = self.m
        fi = self.forces_intuitionistic
        match f:
            case Atom():
                r = self.forces(w, f)
            case Bot():
                r = self.exploding(w)
            case Top():
                r = True
            case And(a, b):
                r = fi(w, a) and fi(w, b)
            case Or(a, b):
                r = self.exploding(w) or fi(w, a) or fi(w, b)
            case Imp(a, b):
                r = all(not fi(v, a) or fi(v, b) for v in m.up(w))
            case Forall(x, a):
                r = all(fi(v, instance(a, x, d)) for v in m.up(w) for d in sorted(m.dom[v]))
            case Exists(x, a):
                r = self.exploding(w) or any(fi(w, instance(a, x, d)) for d in sorted(m.dom[w]))
            case _:
                raise TypeError(f)
        self._intu[key] = r
        return r


def srefutes(m: FiniteModel, w: str, f: Formula, ev: Optional[Evaluator] = None) -> bool:
    ev = ev or Evaluator(m)
    ev.ground_check(w, f)
    return ev.srefutes(w, f)


def forces(m: FiniteModel, w: str, f: Formula, ev: Optional[Evaluator] = None) -> bool:
    ev = ev or Evaluator(m)
    ev.ground_check(w, f)
    return ev.forces(w, f)


def refutes(m: FiniteModel, w: str, f: Formula, ev: Optional[Evaluator] = None) -> bool:
    ev = ev or Evaluator(m)
    ev.ground_check(w, f)
    return ev.refutes(w, f)


def forces_intuitionistic(m: FiniteModel, w: str, f: Formula,
                          ev: Optional[Evaluator] = None) -> bool:
    ev = ev or Evaluator(m)
    ev.ground_check(w, f)
    return ev.forces_intuitionistic(w, f)


RELATIONS = {"forces": forces, "refutes": refutes, "srefutes": srefutes}


# -- audit ----------------------------------------------------------------------

@dataclass
class ClauseResult:
    name: str
    statement: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    asserted: bool = True

    @property
    def ok(self) -> bool:
        return not self.asserted or not self.failures


@dataclass
class AuditReport:
    clauses: list[ClauseResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.clauses)

    def failed(self) -> list[ClauseResult]:
        return [c for c in self.clauses if not c.ok]

    def merge(self, other: "AuditReport") -> "AuditReport":
        by_name = {c.name: c for c in self.clauses}
        for c in other.clauses:
            mine = by_name.get(c.name)
            if mine is None:
                self.clauses.append(c)
                by_name[c.name] = c
            else:
                mine.checked += c.checked
                mine.failures.extend(c.failures)
        return self


def _iff(a: bool, b: bool) -> bool:
    return a == b


def _implies(a: bool, b: bool) -> bool:
    return not a or b


def ground_subformulas(f: Formula) -> list[Formula]:
    out = []

    def go(g: Formula):
        if not free_vars(g):
            out.append(g)
        match g:
            case And(a, b) | Or(a, b) | Imp(a, b):
                go(a)
                go(b)
            case Forall(_, a) | Exists(_, a):
                go(a)

    go(f)
    return out


# Each clause: (name, statement, head type or None, asserted, predicate).
# The predicate receives (evaluator, world, formula) and returns True when the
# clause holds at that instance.
def _clauses():
    def up(ev, w):
        return ev.m.up(w)

    def doms(ev, w):
        return sorted(ev.m.dom[w])

    S, F, R = Evaluator.srefutes, Evaluator.forces, Evaluator.refutes
    return [
        ("srefute-to-refute", "w:A||-s implies w:A||-", None, True,
         lambda ev, w, f: _implies(S(ev, w, f), R(ev, w, f))),
        ("force-imp", "w:||-A->B iff for all w'>=w, w':||-A implies w':||-B", Imp, True,
         lambda ev, w, f: _iff(F(ev, w, f),
                               all(_implies(F(ev, v, f.left), F(ev, v, f.right)) for v in up(ev, w)))),
        ("force-and", "w:||-A&B iff w:||-A and w:||-B", And, True,
         lambda ev, w, f: _iff(F(ev, w, f), F(ev, w, f.left) and F(ev, w, f.right))),
        ("force-forall", "w:||-forall x.A iff for all w'>=w, d in D(w'), w':||-A(d)", Forall, True,
         lambda ev, w, f: _iff(F(ev, w, f),
                               all(F(ev, v, instance(f.body, f.var, d))
                                   for v in up(ev, w) for d in doms(ev, v)))),
        ("force-or-intro", "w:||-A or w:||-B implies w:||-A|B", Or, True,
         lambda ev, w, f: _implies(F(ev, w, f.left) or F(ev, w, f.right), F(ev, w, f))),
        ("force-exists-intro", "w:||-A(d) for some d in D(w) implies w:||-exists x.A", Exists, True,
         lambda ev, w, f: _implies(any(F(ev, w, instance(f.body, f.var, d)) for d in doms(ev, w)),
                                   F(ev, w, f))),
        ("force-or-elim", "(not asserted) w:||-A|B implies w:||-A or w:||-B", Or, False,
         lambda ev, w, f: _implies(F(ev, w, f), F(ev, w, f.left) or F(ev, w, f.right))),
        ("force-exists-elim", "(not asserted) w:||-exists x.A implies w:||-A(d) for some d", Exists, False,
         lambda ev, w, f: _implies(F(ev, w, f),
                                   any(F(ev, w, instance(f.body, f.var, d)) for d in doms(ev, w)))),
        ("refute-imp", "w:A->B||- iff w:A->B||-s", Imp, True,
         lambda ev, w, f: _iff(R(ev, w, f), S(ev, w, f))),
        ("refute-or", "w:A|B||- iff w:A|B||-s", Or, True,
         lambda ev, w, f: _iff(R(ev, w, f), S(ev, w, f))),
        ("refute-exists", "w:exists x.A||- iff w:exists x.A||-s", Exists, True,
         lambda ev, w, f: _iff(R(ev, w, f), S(ev, w, f))),
        ("refute-and-intro", "w:A||- or w:B||- implies w:A&B||-", And, True,
         lambda ev, w, f: _implies(R(ev, w, f.left) or R(ev, w, f.right), R(ev, w, f))),
        ("refute-forall-intro", "w:A(d)||- for some d in D(w) implies w:forall x.A||-", Forall, True,
         lambda ev, w, f: _implies(any(R(ev, w, instance(f.body, f.var, d)) for d in doms(ev, w)),
                                   R(ev, w, f))),
        ("neg-force", "w:||-A iff w:~A||-s", None, True,
         lambda ev, w, f: _iff(F(ev, w, f), S(ev, w, neg(f)))),
        ("neg-refute", "w:A||- iff w:||-~A", None, True,
         lambda ev, w, f: _iff(R(ev, w, f), F(ev, w, neg(f)))),
        ("neg-refuted", "w:~A||- iff w:||-A", None, True,
         lambda ev, w, f: _iff(R(ev, w, neg(f)), F(ev, w, f))),
        ("neg-refuted-strongly", "w:~A||- iff w:~A||-s", None, True,
         lambda ev, w, f: _iff(R(ev, w, neg(f)), S(ev, w, neg(f)))),
        ("dneg-force", "w:||-A iff w:||-~~A", None, True,
         lambda ev, w, f: _iff(F(ev, w, f), F(ev, w, neg(neg(f))))),
        ("dneg-refute", "w:A||- iff w:~~A||-", None, True,
         lambda ev, w, f: _iff(R(ev, w, f), R(ev, w, neg(neg(f))))),
        ("dn-refutation", "w:~A||-s iff w:||-~~A iff w:||-A", None, True,
         lambda ev, w, f: _iff(S(ev, w, neg(f)), F(ev, w, neg(neg(f))))
         and _iff(F(ev, w, neg(neg(f))), F(ev, w, f))),
    ]


CLAUSES = _clauses()


def audit(m: FiniteModel, fs: Iterable[Formula], ev: Optional[Evaluator] = None,
          max_failures: int = 5) -> AuditReport:
    """Evaluate the lemma clauses at every world for every ground formula
    in ``fs`` (and their ground subformulas) that lives in that world."""
    ev = ev or Evaluator(m)
    seen = {}
    for f in fs:
        for g in ground_subformulas(f):
            seen.setdefault(g, None)
    formulas = list(seen)

    results: list[ClauseResult] = []

    def record(res: ClauseResult, ok: bool, where: str):
        res.checked += 1
        if not ok and len(res.failures) < max_failures:
            res.failures.append(where)

    # monotonicity along every strict pair of the order
    for rel, fn in (("srefutes", Evaluator.srefutes), ("forces", Evaluator.forces),
                    ("refutes", Evaluator.refutes)):
        res = ClauseResult(f"monotone-{rel}", f"{rel} is monotone along <=")
        for (w, v) in sorted(m.leq):
            if w == v:
                continue
            for f in formulas:
                if constants(f) <= m.dom[w]:
                    record(res, _implies(fn(ev, w, f), fn(ev, v, f)),
                           f"{w}<={v}: {print_formula(f, True)}")
        results.append(res)

    # world-level facts
    l6 = [ClauseResult("top-bot", "w:||-T and w:_|_||-"),
          ClauseResult("explode-bot", "w exploding iff w:||-_|_"),
          ClauseResult("explode-top", "w exploding iff w:T||-")]
    for w in m.worlds:
        record(l6[0], ev.forces(w, Top()) and ev.refutes(w, Bot()), w)
        record(l6[1], _iff(ev.exploding(w), ev.forces(w, Bot())), w)
        record(l6[2], _iff(ev.exploding(w), ev.refutes(w, Top())), w)
    results.extend(l6)

    for name, statement, head, asserted, pred in CLAUSES:
        res = ClauseResult(name, statement, asserted=asserted)
        for f in formulas:
            if head is not None and not isinstance(f, head):
                continue
            for w in m.worlds:
                if constants(f) <= m.dom[w]:
                    record(res, pred(ev, w, f), f"{w}: {print_formula(f, True)}")
        results.append(res)
    return AuditReport(results)


# -- soundness cross-check ---------------------------------------------------------

@dataclass
class SoundnessReport:
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def sequent_parameters(s) -> list[str]:
    names: set[str] = set()
    fs = (s.gamma + s.delta) if isinstance(s, Plain) else (s.gamma + (s.focus,) + s.delta)
    for f in fs:
        names |= free_vars(f) | constants(f)
    return sorted(names)


def soundness_check(m: FiniteModel, d: Derivation, ev: Optional[Evaluator] = None,
                    max_failures: int = 5) -> SoundnessReport:
    """Brute-force the soundness statement for the conclusion of ``d``:
    every world, every association of its free variables and constants
    into the world's domain."""
    s = check(d)
    ev = ev or Evaluator(m)
    params = sequent_parameters(s)
    report = SoundnessReport()
    for w in m.worlds:
        dom = sorted(m.dom[w])
        if params and not dom:
            raise ModelError(ModelViolation.EMPTY_DOMAIN,
                             f"dom({w}) is empty; free symbols need a denotation")
        for values in itertools.product(dom, repeat=len(params)):
            sub = {p: Const(v) for p, v in zip(params, values)}

            def ground(f: Formula) -> Formula:
                return instantiate(f, sub, sub)

            gamma = [ground(f) for f in s.gamma]
            delta = [ground(f) for f in s.delta]
            if not (all(ev.forces(w, f) for f in gamma) and all(ev.refutes(w, f) for f in delta)):
                report.checked += 1
                continue
            match s:
                case Plain():
                    ok = ev.exploding(w)
                case RightFocus():
                    ok = ev.forces(w, ground(s.focus))
                case LeftFocus():
                    ok = ev.refutes(w, ground(s.focus))
            report.checked += 1
            if not ok and len(report.failures) < max_failures:
                report.failures.append(f"{w} {sub}")
    return report


# -- model files -------------------------------------------------------------------

def _parse_srefute_entry(entry, elements: frozenset[str]) -> tuple[str, Atom]:
    if isinstance(entry, str):
        text = entry.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError(f"srefutes entry {entry!r} must look like (world, P(e1, ..., en))")
        parts = split_top_level(text[1:-1])
        if len(parts) != 2:
            raise ValueError(f"srefutes entry {entry!r} must have two components")
        world, atom_src = parts
    else:
        world, atom_src = entry
    atom = parse_formula(str(atom_src), elements)
    if not isinstance(atom, Atom):
        raise ValueError(f"srefutes entry {entry!r} is not atomic")
    return str(world), atom


def model_from_dict(data: dict) -> tuple[FiniteModel, frozenset]:
    worlds = [str(w) for w in data["worlds"]]
    leq = [(str(a), str(b)) for a, b in data.get("leq") or []]
    dom = {str(w): [str(e) for e in (es or [])] for w, es in (data.get("dom") or {}).items()}
    elements = frozenset(e for es in dom.values() for e in es)
    sref = [_parse_srefute_entry(e, elements) for e in data.get("srefutes") or []]
    exploding = [str(w) for w in data.get("exploding") or []]
    m, added = make_model(worlds, leq, dom, sref, exploding)
    validate_model(m)
    return m, added


def load_model(path: str) -> tuple[FiniteModel, frozenset]:
    with open(path) as fh:
        return model_from_dict(yaml.safe_load(fh))


def dump_model(m: FiniteModel) -> str:
    cover = sorted((a, b) for a, b in m.leq if a != b)
    lines = [f"worlds: [{', '.join(m.worlds)}]",
             "leq: [" + ", ".join(f"[{a}, {b}]" for a, b in cover) + "]",
             "dom:"]
    for w in m.worlds:
        lines.append(f"  {w}: [{', '.join(sorted(m.dom[w]))}]")
    entries = sorted(m.srefutes_atom, key=lambda p: (m.worlds.index(p[0]), print_formula(p[1])))
    if entries:
        lines.append("srefutes:")
        lines += [f'  - "({w}, {print_formula(a)})"' for w, a in entries]
    else:
        lines.append("srefutes: []")
    lines.append(f"exploding: [{', '.join(w for w in m.worlds if w in m.exploding)}]")
    return "\n".join(lines) + "\n"


def dp_model() -> FiniteModel:
    """Three worlds, w0 below two incomparable w1 and w2, one element, X
    strongly refuted at w1 only: X | ~X is forced at w0 while neither
    disjunct is."""
    m, _ = make_model(
        ["w0", "w1", "w2"], [("w0", "w1"), ("w0", "w2")],
        {"w0": ["a"], "w1": ["a"], "w2": ["a"]},
        [("w1", Atom("X"))],
    )
    validate_model(m)
    return m


def ed_model() -> FiniteModel:
    """Witness for the failure of explicit definability: exists x. P(x) is
    forced at the root but no element of the root domain is a witness."""
    m, _ = make_model(
        ["w0", "w1", "w2"], [("w0", "w1"), ("w0", "w2")],
        {"w0": ["a", "b"], "w1": ["a", "b"], "w2": ["a", "b"]},
        [("w1", Atom("P", (Const("a"),))), ("w2", Atom("P", (Const("b"),)))],
    )
    validate_model(m)
    return m
