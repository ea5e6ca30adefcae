"""Normalization by evaluation over the universal classical Kripke model.

Worlds are pairs of contexts of sentences. Semantic values are monotone
callables that take the target world explicitly; the exploding evidence at
a world ``(Γ, Δ)`` is a normal derivation of ``Γ ⊢ Δ``. Evaluating a
derivation into these values and reifying the result back to syntax yields
a derivation of the same sequent whose only cuts are contractions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Optional, Union

from . import calculus as C
from .calculus import (
    Derivation, LeftFocus, Plain, RightFocus, Rule, check, contract_left,
    contract_right, rename_const_to_var, replace_const_deriv, weaken,
)
from .syntax import (
    And, Atom, Bot, Const, Exists, Forall, Formula, Imp, Or, Term, Top, Var,
    DEFAULT_CONST, alpha_key, ctx_index, free_vars, fresh_name, instantiate,
    is_gensym, print_formula, subst_term, subst_var,
)


class NbEError(RuntimeError):
    pass


# -- worlds ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class UWorld:
    gamma: tuple
    delta: tuple

    @cached_property
    def _keys(self) -> tuple[frozenset, frozenset]:
        return (frozenset(map(alpha_key, self.gamma)), frozenset(map(alpha_key, self.delta)))

    def le(self, other: "UWorld") -> bool:
        if self is other:
            return True
        g, d = self._keys
        og, od = other._keys
        return g <= og and d <= od

    def with_left(self, f: Formula) -> "UWorld":
        return UWorld(self.gamma + (f,), self.delta)

    def with_right(self, f: Formula) -> "UWorld":
        return UWorld(self.gamma, (f,) + self.delta)

    def sequent(self) -> Plain:
        return Plain(self.gamma, self.delta)


def _check_le(w: UWorld, w2: UWorld) -> None:
    if not w.le(w2):
        raise NbEError("semantic value used at a world that does not extend its own")


def _check_explosion(d: Derivation, w: UWorld) -> Derivation:
    s = d.conclusion
    if not isinstance(s, Plain) or s.gamma != w.gamma or s.delta != w.delta:
        raise NbEError("explosion does not conclude the requested world")
    return d


# -- semantic values ---------------------------------------------------------------

Explosion = Derivation


@dataclass(frozen=True, eq=False)
class SemForce:
    """Forcing of ``formula`` at ``world``: for any extension and strong
    refutation there, an explosion there."""
    formula: Formula
    world: UWorld
    run: Callable[[UWorld, "SemSRefute"], Explosion]

    def __call__(self, w: UWorld, sr: "SemSRefute") -> Explosion:
        _check_le(self.world, w)
        return _check_explosion(self.run(w, sr), w)


@dataclass(frozen=True, eq=False)
class SemRefute:
    formula: Formula
    world: UWorld
    run: Callable[[UWorld, SemForce], Explosion]

    def __call__(self, w: UWorld, sf: SemForce) -> Explosion:
        _check_le(self.world, w)
        return _check_explosion(self.run(w, sf), w)


@dataclass(frozen=True, eq=False)
class SRAtom:
    world: UWorld
    derivation: Derivation  # cut-free  Γ | X ⊢ Δ  at ``world``


@dataclass(frozen=True, eq=False)
class SRBot:
    world: UWorld


@dataclass(frozen=True, eq=False)
class SRAnd:
    world: UWorld
    index: int  # 1: left conjunct refuted, 2: right
    refute: SemRefute


@dataclass(frozen=True, eq=False)
class SROr:
    world: UWorld
    left: SemRefute
    right: SemRefute


@dataclass(frozen=True, eq=False)
class SRImp:
    world: UWorld
    force: SemForce
    refute: SemRefute


@dataclass(frozen=True, eq=False)
class SRForall:
    world: UWorld
    term: Term
    refute: SemRefute


@dataclass(frozen=True, eq=False)
class SRExists:
    world: UWorld
    at: Callable[[UWorld, Term], SemRefute]


SemSRefute = Union[SRAtom, SRBot, SRAnd, SROr, SRImp, SRForall, SRExists]

_SR_HEAD = {SRAtom: Atom, SRBot: Bot, SRAnd: And, SROr: Or, SRImp: Imp,
            SRForall: Forall, SRExists: Exists}


@dataclass(frozen=True)
class Env:
    """Values for the conclusion contexts of a derivation, position by
    position, plus the association of free variables to closed terms."""
    world: UWorld
    gamma: tuple
    delta: tuple
    rho: Mapping[str, Term] = field(default_factory=dict)

    def at(self, w: UWorld) -> "Env":
        _check_le(self.world, w)
        return Env(w, self.gamma, self.delta, self.rho)

    def insert_gamma(self, pos: int, v: SemForce) -> "Env":
        return Env(self.world, self.gamma[:pos] + (v,) + self.gamma[pos:], self.delta, self.rho)

    def insert_delta(self, pos: int, v: SemRefute) -> "Env":
        return Env(self.world, self.gamma, self.delta[:pos] + (v,) + self.delta[pos:], self.rho)

    def bind(self, x: str, t: Term) -> "Env":
        return Env(self.world, self.gamma, self.delta, {**self.rho, x: t})


# -- the engine ----------------------------------------------------------------------

class Supply:
    """Per-normalization source of reserved constant names ``#0, #1, ...``."""

    def __init__(self):
        self._counter = itertools.count()

    def fresh_const(self) -> str:
        return f"#{next(self._counter)}"


class Engine:
    def __init__(self, supply: Optional[Supply] = None):
        self.supply = supply or Supply()

    def fresh_const(self) -> str:
        return self.supply.fresh_const()

    # value transformers ---------------------------------------------

    @staticmethod
    def refute_of_srefute(f: Formula, sr: SemSRefute, w: UWorld) -> SemRefute:
        """Strong refutation implies refutation."""
        return SemRefute(f, w, lambda w2, sf: sf(w2, sr))

    @staticmethod
    def force_or_intro(f: Or, side: int, sf: SemForce, w: UWorld) -> SemForce:
        """Forcing a disjunct forces the disjunction."""
        def run(w2, sr: SROr):
            return (sr.left if side == 1 else sr.right)(w2, sf)
        return SemForce(f, w, run)

    @staticmethod
    def force_exists_intro(f: Exists, t: Term, sf: SemForce, w: UWorld) -> SemForce:
        return SemForce(f, w, lambda w2, sr: sr.at(w2, t)(w2, sf))

    # reflection --------------------------------------------------------------------

    def reflect_force(self, f: Formula, w: UWorld) -> SemForce:
        """A formula of the left context is forced."""
        if ctx_index(w.gamma, f) < 0:
            raise NbEError(f"{print_formula(f, True)} is not in the left context")
        return SemForce(f, w, lambda w2, sr: contract_left(self.reify_srefute(f, w2, sr)))

    def reflect_refute(self, f: Formula, w: UWorld) -> SemRefute:
        if ctx_index(w.delta, f) < 0:
            raise NbEError(f"{print_formula(f, True)} is not in the right context")
        match f:
            # An atom of the right context is strongly refuted by the axiom
            # itself, and strong refutation implies refutation.
            case Atom():
                return SemRefute(f, w, lambda w2, sf: sf(w2, SRAtom(w2, C.ax_l(w2.gamma, f, w2.delta))))
            case Bot():
                return SemRefute(f, w, lambda w2, sf: sf(w2, SRBot(w2)))
        return SemRefute(f, w, lambda w2, sf: contract_right(self.reify_force(f, w2, sf)))

    # reification ----------------------------------------------------------------------

    def _bind_fresh(self, d: Derivation, c: str, base: str) -> tuple[Derivation, str]:
        y = fresh_name(base, C.sequent_free_vars(d.conclusion))
        return rename_const_to_var(d, c, y), y

    def reify_force(self, f: Formula, w: UWorld, v: SemForce) -> Derivation:
        """Γ ⊢ A | Δ, cut-free, from a forcing of A at (Γ, Δ)."""
        G, D = w.gamma, w.delta
        match f:
            case Top():
                return C.top_r(G, D)
            case Atom() | Bot():
                w1 = w.with_right(f)
                sr = SRBot(w1) if isinstance(f, Bot) else SRAtom(w1, C.ax_l(G, f, w1.delta, pos=0))
                return C.mu(v(w1, sr), 0)
            case Imp(a, b):
                w1 = UWorld(G + (a,), (b,) + D)
                sr = SRImp(w1, self.reflect_force(a, w1), self.reflect_refute(b, w1))
                return C.imp_r(C.mu(v(w1, sr), 0), pos=len(G))
            case Or(a, b):
                w1 = UWorld(G, (b, a, f) + D)
                e = v(w1, SROr(w1, self.reflect_refute(a, w1), self.reflect_refute(b, w1)))
                d = contract_right(C.or_r2(C.mu(e, 0), a))     # Γ ⊢ a, A, Δ
                d = contract_right(C.or_r1(C.mu(d, 0), b))     # Γ ⊢ A, Δ
                return C.mu(d, 0)
            case And(a, b):
                def part(sub: Formula, index: int) -> SemForce:
                    return SemForce(sub, w, lambda w2, sr: v(
                        w2, SRAnd(w2, index, self.refute_of_srefute(sub, sr, w2))))
                return C.and_r(self.reify_force(a, w, part(a, 1)),
                               self.reify_force(b, w, part(b, 2)))
            case Forall(x, body):
                c = self.fresh_const()
                inst = subst_var(body, x, Const(c))
                vc = SemForce(inst, w, lambda w2, sr: v(
                    w2, SRForall(w2, Const(c), self.refute_of_srefute(inst, sr, w2))))
                d, y = self._bind_fresh(self.reify_force(inst, w, vc), c, x)
                return C.all_r(d, y)
            case Exists(x, body):
                w1 = w.with_right(f)

                def witness(w2: UWorld, t: Term) -> SemRefute:
                    inst = subst_var(body, x, t)
                    return SemRefute(inst, w2, lambda w3, sf: contract_right(
                        C.ex_r(self.reify_force(inst, w3, sf), f, t)))

                return C.mu(v(w1, SRExists(w1, witness)), 0)
        raise TypeError(f)

    def reify_refute(self, f: Formula, w: UWorld, v: SemRefute) -> Derivation:
        """Γ | A ⊢ Δ, cut-free, from a refutation of A at (Γ, Δ)."""
        G, D = w.gamma, w.delta
        match f:
            case Bot():
                return C.bot_l(G, D)
            case Or(a, b):
                ra = SemRefute(a, w, lambda w2, sf: v(w2, self.force_or_intro(f, 1, sf, w2)))
                rb = SemRefute(b, w, lambda w2, sf: v(w2, self.force_or_intro(f, 2, sf, w2)))
                return C.or_l(self.reify_refute(a, w, ra), self.reify_refute(b, w, rb))
            case Exists(x, body):
                c = self.fresh_const()
                inst = subst_var(body, x, Const(c))
                rc = SemRefute(inst, w, lambda w2, sf: v(
                    w2, self.force_exists_intro(f, Const(c), sf, w2)))
                d, y = self._bind_fresh(self.reify_refute(inst, w, rc), c, x)
                return C.ex_l(d, y)
            case Atom() | Top() | Imp() | And() | Forall():
                w1 = w.with_left(f)
                return C.mutilde(v(w1, self.reflect_force(f, w1)), pos=len(G))
        raise TypeError(f)

    def reify_srefute(self, f: Formula, w: UWorld, sr: SemSRefute) -> Derivation:
        """Γ | A ⊢ Δ, cut-free, from a strong refutation of A."""
        want = _SR_HEAD.get(type(sr))
        if want is None or not isinstance(f, want):
            raise NbEError(f"strong refutation {type(sr).__name__} does not match "
                           f"{print_formula(f, True)}")
        _check_le(sr.world, w)
        G, D = w.gamma, w.delta
        match sr:
            case SRAtom(_, d):
                return d if sr.world is w else weaken(d, G, D)
            case SRBot():
                return C.bot_l(G, D)
            case SRAnd(_, 1, r):
                return C.and_l1(self.reify_refute(f.left, w, r), f.right)
            case SRAnd(_, 2, r):
                return C.and_l2(self.reify_refute(f.right, w, r), f.left)
            case SROr(_, r1, r2):
                return C.or_l(self.reify_refute(f.left, w, r1), self.reify_refute(f.right, w, r2))
            case SRImp(_, fa, rb):
                return C.imp_l(self.reify_force(f.left, w, fa), self.reify_refute(f.right, w, rb))
            case SRForall(_, t, r):
                inst = subst_var(f.body, f.var, t)
                return C.all_l(self.reify_refute(inst, w, r), f, t)
            case SRExists(_, at):
                c = self.fresh_const()
                inst = subst_var(f.body, f.var, Const(c))
                d, y = self._bind_fresh(self.reify_refute(inst, w, at(w, Const(c))), c, f.var)
                return C.ex_l(d, y)
        raise NbEError(f"malformed strong refutation {sr!r}")

    # evaluation ----------------------------------------------------------------------

    @staticmethod
    def _ground(f: Formula, rho: Mapping[str, Term]) -> Formula:
        fv = free_vars(f)
        if not fv:
            return f
        return instantiate(f, {x: rho.get(x, Const(DEFAULT_CONST)) for x in fv})

    @staticmethod
    def _ground_term(t: Term, rho: Mapping[str, Term]) -> Term:
        from .syntax import term_vars
        return subst_term(t, {x: rho.get(x, Const(DEFAULT_CONST)) for x in term_vars(t)}, {})

    def eval(self, d: Derivation, env: Env):
        """Explosion for a plain sequent, forcing of the focus for a
        right-focused one, refutation of the focus for a left-focused one."""
        s = d.conclusion
        W = env.world
        if len(env.gamma) != len(s.gamma) or len(env.delta) != len(s.delta):
            raise NbEError("environment does not match the conclusion contexts")
        ps = d.premises
        ev = self.eval
        focus = None if isinstance(s, Plain) else self._ground(s.focus, env.rho)

        match d.rule:
            case Rule.AxR:
                return env.gamma[d.pos]
            case Rule.AxL:
                return env.delta[d.pos]
            case Rule.Mu:
                return SemForce(focus, W, lambda w2, sr: ev(
                    ps[0], env.at(w2).insert_delta(d.pos, self.refute_of_srefute(focus, sr, w2))))
            case Rule.MuTilde:
                return SemRefute(focus, W, lambda w2, sf: ev(
                    ps[0], env.at(w2).insert_gamma(d.pos, sf)))
            case Rule.Cut:
                return ev(ps[1], env)(W, ev(ps[0], env))
            case Rule.ImpR:
                return SemForce(focus, W, lambda w2, sr: sr.refute(
                    w2, ev(ps[0], env.at(w2).insert_gamma(d.pos, sr.force))))
            case Rule.ImpL:
                return SemRefute(focus, W, lambda w2, sf: sf(
                    w2, SRImp(w2, ev(ps[0], env.at(w2)), ev(ps[1], env.at(w2)))))
            case Rule.OrL:
                return SemRefute(focus, W, lambda w2, sf: sf(
                    w2, SROr(w2, ev(ps[0], env.at(w2)), ev(ps[1], env.at(w2)))))
            case Rule.OrR1:
                return SemForce(focus, W, lambda w2, sr: sr.left(w2, ev(ps[0], env.at(w2))))
            case Rule.OrR2:
                return SemForce(focus, W, lambda w2, sr: sr.right(w2, ev(ps[0], env.at(w2))))
            case Rule.AndL1 | Rule.AndL2:
                index = 1 if d.rule is Rule.AndL1 else 2
                return SemRefute(focus, W, lambda w2, sf: sf(
                    w2, SRAnd(w2, index, ev(ps[0], env.at(w2)))))
            case Rule.AndR:
                return SemForce(focus, W, lambda w2, sr: sr.refute(
                    w2, ev(ps[sr.index - 1], env.at(w2))))
            case Rule.ExR:
                t = self._ground_term(d.term, env.rho)
                return SemForce(focus, W, lambda w2, sr: sr.at(w2, t)(w2, ev(ps[0], env.at(w2))))
            case Rule.ExL:
                return SemRefute(focus, W, lambda w2, sf: sf(w2, SRExists(
                    w2, lambda w3, t: ev(ps[0], env.at(w3).bind(d.eig, t)))))
            case Rule.AllL:
                t = self._ground_term(d.term, env.rho)
                return SemRefute(focus, W, lambda w2, sf: sf(
                    w2, SRForall(w2, t, ev(ps[0], env.at(w2)))))
            case Rule.AllR:
                return SemForce(focus, W, lambda w2, sr: sr.refute(
                    w2, ev(ps[0], env.at(w2).bind(d.eig, sr.term))))
            case Rule.BotL:
                return SemRefute(focus, W, lambda w2, sf: sf(w2, SRBot(w2)))
            case Rule.TopR:
                def no_refutation(w2, sr):
                    raise NbEError("T has no strong refutation")
                return SemForce(focus, W, no_refutation)
        raise NbEError(f"no evaluation clause for {d.rule}")

    # normalization ----------------------------------------------------------------

    def normalize(self, d: Derivation) -> Derivation:
        s = check(d)
        params = sorted(C.sequent_free_vars(s))
        rho = {x: Const(self.fresh_const()) for x in params}
        ground = lambda f: self._ground(f, rho)
        w = UWorld(tuple(map(ground, s.gamma)), tuple(map(ground, s.delta)))
        env = Env(w,
                  tuple(self.reflect_force(f, w) for f in w.gamma),
                  tuple(self.reflect_refute(f, w) for f in w.delta),
                  rho)
        value = self.eval(d, env)
        match s:
            case Plain():
                out = value
            case RightFocus():
                out = self.reify_force(ground(s.focus), w, value)
            case LeftFocus():
                out = self.reify_refute(ground(s.focus), w, value)
        for x in params:
            out = rename_const_to_var(out, rho[x].name, x)
        leftovers = sorted(c for c in C.derivation_constants(out) if is_gensym(c))
        for c in leftovers:
            y = fresh_name("z", C.derivation_var_names(out))
            out = replace_const_deriv(out, c, Var(y))
        return out


# -- module-level API ---------------------------------------------------------------

def fresh_const(supply: Supply) -> str:
    return supply.fresh_const()


def reflect_force(f: Formula, w: UWorld, engine: Optional[Engine] = None) -> SemForce:
    return (engine or Engine()).reflect_force(f, w)


def reflect_refute(f: Formula, w: UWorld, engine: Optional[Engine] = None) -> SemRefute:
    return (engine or Engine()).reflect_refute(f, w)


def reify_force(f: Formula, w: UWorld, v: SemForce, engine: Optional[Engine] = None) -> Derivation:
    return (engine or Engine()).reify_force(f, w, v)


def reify_refute(f: Formula, w: UWorld, v: SemRefute, engine: Optional[Engine] = None) -> Derivation:
    return (engine or Engine()).reify_refute(f, w, v)


def reify_srefute(f: Formula, w: UWorld, sr: SemSRefute, engine: Optional[Engine] = None) -> Derivation:
    return (engine or Engine()).reify_srefute(f, w, sr)


def evaluate(d: Derivation, env: Env, engine: Optional[Engine] = None):
    return (engine or Engine()).eval(d, env)


def normalize(d: Derivation) -> Derivation:
    """Cut elimination by evaluation in the universal model followed by
    reification. The output proves the same sequent and is normal."""
    return Engine().normalize(d)


def eta_expand(f: Formula) -> Derivation:
    """reify_force(A, ([A], []), reflect_force(A, ([A], [])))"""
    e = Engine()
    w = UWorld((f,), ())
    return e.reify_force(f, w, e.reflect_force(f, w))
