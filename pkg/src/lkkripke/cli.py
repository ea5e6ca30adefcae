"""Command-line front end: ``lkkripke <command> ...``.

Exit status is 0 on success, 1 when the underlying module reports an
error (bad proof, bad model, parse failure, unreadable file) and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Optional, Sequence

import yaml

from . import calculus as C
from . import corpus, gen, kripke, nbe, proofio
from .syntax import ParseError, dn_translate, parse_formula, print_formula


class CommandError(Exception):
    """A module error to be reported with exit status 1."""


MODULE_ERRORS = (
    C.CheckError, C.CalculusError, proofio.ProofFormatError, ParseError,
    kripke.ModelError, nbe.NbEError, OSError, yaml.YAMLError, CommandError,
)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


# -- commands ---------------------------------------------------------------------

def cmd_check(args) -> int:
    d, _ = proofio.read_derivation(args.proof)
    s = C.check(d)
    normal = C.is_normal(d)
    cuts = C.count_cuts(d)
    _emit(args,
          {"conclusion": C.print_sequent(s), "normal": normal, "cuts": cuts, "size": C.size(d)},
          f"{C.print_sequent(s)}\n{'normal' if normal else 'not normal'} ({cuts} cuts, {C.size(d)} nodes)")
    return 0


def cmd_normalize(args) -> int:
    d, consts = proofio.read_derivation(args.proof)
    before = C.count_cuts(d)
    out = nbe.normalize(d)
    after = C.count_cuts(out)
    text = proofio.format_derivation(out, f"normal form of {os.path.basename(args.proof)}", consts)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    guarded = C.is_normal(out)
    note = "axiom-guarded" if guarded else "NOT axiom-guarded"
    report = f"cuts: {before} → {after} ({note})"
    payload = {"cuts_before": before, "cuts_after": after, "normal": guarded,
               "conclusion": C.print_sequent(out.conclusion), "out": args.out}
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False),
              file=sys.stdout if args.out else sys.stderr)
    else:
        print(report, file=sys.stdout if args.out else sys.stderr)
    return 0


def _load(path: str) -> kripke.FiniteModel:
    m, _ = kripke.load_model(path)
    return m


def cmd_model_eval(args) -> int:
    m = _load(args.model)
    f = parse_formula(args.formula, sorted(m.elements()))
    if args.world not in m.worlds:
        raise CommandError(f"unknown world {args.world!r}")
    fn = {"forces": kripke.forces, "refutes": kripke.refutes, "srefutes": kripke.srefutes,
          "iforces": kripke.forces_intuitionistic}[args.relation]
    value = fn(m, args.world, f)
    _emit(args, {"world": args.world, "relation": args.relation,
                 "formula": print_formula(f, True), "value": value},
          "true" if value else "false")
    return 0


def _audit_formulas(m: kripke.FiniteModel, depth: int, count: int, seed: int):
    rng = random.Random(seed)
    props = sorted({a.pred for _, a in m.srefutes_atom if not a.args}) or list(gen.PROPS)
    elems = sorted(m.elements())
    return [gen.random_formula(rng, depth, 2, (), elems, props) for _ in range(count)]


def cmd_audit(args) -> int:
    if args.depth < 1:
        raise SystemExit(_usage_error("audit: --depth must be at least 1"))
    m = _load(args.model)
    fs = [parse_formula(src, sorted(m.elements())) for src in args.formula]
    fs += _audit_formulas(m, args.depth, args.count, args.seed)
    report = kripke.audit(m, fs)
    rows = []
    lines = [f"{'clause':<22} {'checked':>8}  result"]
    for c in report.clauses:
        status = "pass" if not c.failures else ("FAIL" if c.asserted else "counterexample")
        rows.append({"clause": c.name, "statement": c.statement, "checked": c.checked,
                     "asserted": c.asserted, "failures": c.failures})
        lines.append(f"{c.name:<22} {c.checked:>8}  {status}" + ("" if c.asserted else "  (not asserted)"))
        for where in c.failures[:3]:
            lines.append(f"{'':<22} {'':>8}    at {where}")
    lines.append("all asserted clauses pass" if report.ok else "SOME ASSERTED CLAUSES FAIL")
    _emit(args, {"ok": report.ok, "clauses": rows}, "\n".join(lines))
    return 0 if report.ok else 1


def cmd_dn_translate(args) -> int:
    f = parse_formula(args.formula)
    g = dn_translate(f)
    _emit(args, {"input": print_formula(f, True), "output": print_formula(g, True)},
          print_formula(g, True))
    return 0


def cmd_fixtures(args) -> int:
    out = args.out_dir
    os.makedirs(os.path.join(out, "corpus"), exist_ok=True)
    written = []

    def put(rel: str, text: str):
        path = os.path.join(out, rel)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        written.append(rel)

    put("dp.model", "# disjunction property fails at w0\n" + kripke.dump_model(kripke.dp_model()))
    put("ed.model", "# existence property fails at w0\n" + kripke.dump_model(kripke.ed_model()))
    put("peirce.lkp", proofio.format_derivation(corpus.by_name("peirce"), "Peirce's law, cut-free"))
    put("peirce_cut.lkp", proofio.format_derivation(
        corpus.by_name("peirce_cut"), "Peirce's law with an interior Cut(ImpR, ImpL)"))
    put("cut_contr.lkp", proofio.format_derivation(
        corpus.by_name("contr_l"), "the contraction cut Cut(AxR, AxL) at X |- X"))
    for e in corpus.corpus():
        put(os.path.join("corpus", f"{e.name}.lkp"), proofio.format_derivation(e.derivation, e.name))
    _emit(args, {"written": written}, f"wrote {len(written)} files to {out}")
    return 0


# -- parser ------------------------------------------------------------------------

def _usage_error(msg: str) -> int:
    print(f"lkkripke: error: {msg}", file=sys.stderr)
    return 2


def build_parser() -> argparse.ArgumentParser:
    # --json is accepted before or after the subcommand name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")

    p = argparse.ArgumentParser(prog="lkkripke",
                                description="Proof checking, cut elimination by evaluation, "
                                            "and finite classical Kripke models.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="check a derivation file")
    s.add_argument("proof")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("normalize", parents=[common], help="eliminate non-axiom cuts")
    s.add_argument("proof")
    s.add_argument("out", nargs="?", help="output file (default: standard output)")
    s.set_defaults(run=cmd_normalize)

    s = sub.add_parser("model-eval", parents=[common], help="evaluate a formula at a world")
    s.add_argument("model")
    s.add_argument("formula")
    s.add_argument("world")
    s.add_argument("relation", choices=["forces", "refutes", "srefutes", "iforces"])
    s.set_defaults(run=cmd_model_eval)

    s = sub.add_parser("audit", parents=[common], help="check the semantic lemmas on a model")
    s.add_argument("model")
    s.add_argument("--depth", type=int, default=3, help="depth bound of generated formulas")
    s.add_argument("--count", type=int, default=20, help="number of generated formulas")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--formula", action="append", default=[], help="extra formula (repeatable)")
    s.set_defaults(run=cmd_audit)

    s = sub.add_parser("dn-translate", parents=[common], help="double-negation translation")
    s.add_argument("formula")
    s.set_defaults(run=cmd_dn_translate)

    s = sub.add_parser("fixtures", parents=[common], help="write the example files")
    s.add_argument("out_dir")
    s.set_defaults(run=cmd_fixtures)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except MODULE_ERRORS as e:
        if args.json:
            print(json.dumps({"error": type(e).__name__, "message": str(e)}, ensure_ascii=False))
        else:
            print(f"lkkripke: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
