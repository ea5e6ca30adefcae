"""Random finite models and random formulas for property checks."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .kripke import FiniteModel, make_model
from .syntax import (
    And, Atom, Bot, Const, Exists, Forall, Formula, Imp, Or, Term, Top, Var,
)

ELEMENTS = ("d0", "d1", "d2")
PROPS = ("X", "Y")
PREDICATES = {"P": 1, "R": 2}


def random_model(rng: random.Random, max_worlds: int = 4, max_elems: int = 3) -> FiniteModel:
    """A valid model: a random partial order (edges only go from lower to
    higher index), domains, atom tables and exploding set closed upward."""
    n = rng.randint(1, max_worlds)
    worlds = [f"w{i}" for i in range(n)]
    edges = {(worlds[i], worlds[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.45}
    model, _ = make_model(worlds, edges, {w: [] for w in worlds}, [], [])
    order = worlds  # index order is a linear extension of the partial order

    elems = ELEMENTS[: rng.randint(1, max_elems)]
    dom: dict[str, set] = {}
    for w in order:
        inherited = set().union(*(dom[v] for v in order if v != w and model.le(v, w) and v in dom))
        fresh = {e for e in elems if rng.random() < 0.5}
        dom[w] = inherited | fresh or {elems[0]}

    atoms: dict[str, set] = {}
    for w in order:
        inherited = set().union(*(atoms[v] for v in order if v != w and model.le(v, w) and v in atoms))
        local = set()
        for p in PROPS:
            if rng.random() < 0.3:
                local.add(Atom(p))
        for pred, arity in PREDICATES.items():
            for args in _tuples(sorted(dom[w]), arity):
                if rng.random() < 0.25:
                    local.add(Atom(pred, tuple(Const(a) for a in args)))
        atoms[w] = inherited | local

    exploding = set()
    for w in order:
        if any(v in exploding for v in order if v != w and model.le(v, w)) or rng.random() < 0.1:
            exploding.add(w)

    srefutes = [(w, a) for w in worlds for a in atoms[w]]
    model, _ = make_model(worlds, model.leq, {w: sorted(dom[w]) for w in worlds}, srefutes, exploding)
    return model


def _tuples(xs: Sequence[str], k: int):
    if k == 0:
        yield ()
        return
    for x in xs:
        for rest in _tuples(xs, k - 1):
            yield (x,) + rest


def random_formula(rng: random.Random, depth: int, qdepth: int = 2,
                   bound: tuple[str, ...] = (), consts: Sequence[str] = (),
                   props: Sequence[str] = PROPS) -> Formula:
    """A formula of depth at most ``depth`` whose atoms only mention the
    variables in ``bound`` and the given constants."""
    terms: list[Term] = [Var(x) for x in bound] + [Const(c) for c in consts]

    def atom() -> Formula:
        choices = list(props) + ["T", "F"]
        if terms:
            choices += list(PREDICATES)
        pick = rng.choice(choices)
        if pick == "T":
            return Top()
        if pick == "F":
            return Bot()
        if pick in PREDICATES:
            return Atom(pick, tuple(rng.choice(terms) for _ in range(PREDICATES[pick])))
        return Atom(pick)

    if depth <= 0 or rng.random() < 0.2:
        return atom()
    kinds = ["and", "or", "imp"] + (["all", "ex"] if qdepth > 0 else [])
    k = rng.choice(kinds)
    sub = lambda: random_formula(rng, depth - 1, qdepth, bound, consts, props)
    if k == "and":
        return And(sub(), sub())
    if k == "or":
        return Or(sub(), sub())
    if k == "imp":
        return Imp(sub(), sub())
    x = "xyzuv"[len(bound) % 5] if rng.random() < 0.8 else "x"
    body = random_formula(rng, depth - 1, qdepth - 1, bound + (x,), consts, props)
    return Forall(x, body) if k == "all" else Exists(x, body)


def random_sentence(rng: random.Random, depth: int = 4, qdepth: int = 2,
                    consts: Sequence[str] = ()) -> Formula:
    return random_formula(rng, depth, qdepth, (), consts)


def random_ground_formula(rng: random.Random, model: FiniteModel, world: str,
                          depth: int = 3, qdepth: int = 2) -> Formula:
    """A sentence whose element constants are drawn from dom(world)."""
    return random_formula(rng, depth, qdepth, (), sorted(model.dom[world]))


def models(seed: int, count: int) -> list[FiniteModel]:
    rng = random.Random(seed)
    return [random_model(rng) for _ in range(count)]
