"""Command-line entry point.

Exit codes: 0 success or SAT, 2 usage and input errors, 3 budget exceeded,
10 no witness within the bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import OaspError, ParseError, ResourceError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_UNSAT = 10

UNSAT_CAVEAT = (
    "note: no witness exists with the searched universes; "
    "this is not a proof of unsatisfiability, larger universes may still have one"
)


@dataclass(frozen=True)
class RunConfig:
    max_extra: int = 3
    max_nodes: int | None = None
    max_atoms: int | None = None
    workers: int = 1
    output: str = "json"
    seed: int = 0
    trace: bool = False

    def __post_init__(self) -> None:
        for name in ("max_extra", "workers"):
            if getattr(self, name) < 0 or (name == "workers" and self.workers < 1):
                raise OaspError(f"{name} must be positive")
        for name in ("max_nodes", "max_atoms"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise OaspError(f"{name} must be positive")

    def budget(self):
        from .solver import Budget

        base = Budget.default()
        return Budget(self.max_atoms or base.max_atoms, self.max_nodes or base.max_nodes)


class _Out:
    def __init__(self, config: RunConfig):
        self.config = config

    def emit(self, data, text: str | None = None) -> None:
        if self.config.output == "text" and text is not None:
            sys.stdout.write(text if text.endswith("\n") else text + "\n")
        else:
            sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")

    def trace(self, title: str, lines) -> None:
        if not self.config.trace:
            return
        sys.stderr.write(f"== {title}\n")
        for line in lines:
            sys.stderr.write(f"{line}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _program(path: str):
    from .parser import parse_program

    program = parse_program(_read(path))
    if not program.rules:
        raise ParseError(f"{path}: empty program")
    return program


def _universe(text: str | None, program):
    from .model import Universe, program_universe

    if text:
        return Universe(tuple(e.strip() for e in text.split(",") if e.strip()))
    return program_universe(program)


def _interp_json(interp) -> dict:
    return {"universe": list(interp.universe.elements), "atoms": sorted(str(a) for a in interp.atoms)}


# subcommands


def cmd_parse(args, out: _Out) -> int:
    from .parser import parse_ctl, render_ctl, render_program

    if args.ctl:
        f = parse_ctl(_read(args.file).strip())
        out.emit({"formula": render_ctl(f)}, render_ctl(f))
        return EXIT_OK
    program = _program(args.file)
    text = render_program(program)
    out.emit({"rules": [line for line in text.splitlines()]}, text)
    return EXIT_OK


def cmd_ground(args, out: _Out) -> int:
    from .grounder import ground
    from .parser import render_program
    from .model import Program

    program = _program(args.file)
    universe = _universe(args.universe, program)
    grounded = ground(program, universe, max_rules=args.max_rules)
    text = render_program(Program(grounded.rules), with_names=False)
    out.emit({"universe": list(universe.elements), "rules": text.splitlines()}, text)
    return EXIT_OK


def cmd_check(args, out: _Out) -> int:
    from . import semantics
    from .grounder import ground
    from .model import OpenInterpretation
    from .parser import parse_atoms

    program = _program(args.file)
    universe = _universe(args.universe, program)
    model_text = _read(args.model) if args.model and Path(args.model).is_file() else (args.model or "")
    interp = OpenInterpretation(universe, parse_atoms(model_text))
    grounded = ground(program, universe)
    reduced = semantics.geli_reduct(grounded, interp)
    ok = semantics.is_answer_set(reduced, interp.atoms)
    data = {"open_answer_set": ok, **_interp_json(interp)}
    if ok:
        depths = semantics.support_depths(program, interp)
        data["depths"] = {str(a): d for a, d in sorted(depths.items(), key=lambda kv: (kv[1], str(kv[0])))}
    if out.config.trace:
        reduct = semantics.gl_reduct(reduced, interp.atoms)
        out.trace("reduct", sorted(str(r) for r in reduct.rules))
        out.trace("iteration", [
            "T^%d: {%s}" % (i, ", ".join(sorted(str(a) for a in step)))
            for i, step in enumerate(semantics.iteration_trace(reduct))
        ])
    out.emit(data, "open answer set" if ok else "not an open answer set")
    return EXIT_OK


def cmd_solve(args, out: _Out) -> int:
    from .solver import SAT, UNKNOWN, UNSAT_UP_TO_BOUND, satisfiable_up_to

    program = _program(args.file)
    result = satisfiable_up_to(program, args.pred, args.max_extra, out.config.budget())
    out.emit(result.to_json(), str(result))
    if result.status == UNSAT_UP_TO_BOUND:
        sys.stderr.write(UNSAT_CAVEAT + "\n")
        return EXIT_UNSAT
    if result.status == UNKNOWN:
        return EXIT_BUDGET
    return EXIT_OK if result.status == SAT else EXIT_USAGE


def cmd_answersets(args, out: _Out) -> int:
    from .solver import enumerate_open_answer_sets

    program = _program(args.file)
    universe = _universe(args.universe, program)
    found = enumerate_open_answer_sets(program, universe, out.config.budget(), up_to_iso=args.up_to_iso)
    if args.limit is not None:
        found = found[: args.limit]
    text = "\n".join("{" + ", ".join(sorted(str(a) for a in m.atoms)) + "}" for m in found)
    out.emit({"universe": list(universe.elements), "answer_sets": [_interp_json(m)["atoms"] for m in found]}, text or "none")
    return EXIT_OK


def cmd_transform(args, out: _Out) -> int:
    from . import transforms
    from .parser import render_program

    program = _program(args.file)
    mapping = None
    if args.op == "pprog":
        result, atom_map = transforms.to_p_program(program)
        mapping = atom_map.to_json()
    else:
        result = {
            "hbg": transforms.hbg,
            "gua": transforms.gua,
            "freechoice": transforms.free_choice,
            "double": transforms.double_negation,
        }[args.op](program)
    text = render_program(result)
    if args.mapping and mapping is not None:
        Path(args.mapping).write_text(json.dumps(mapping, indent=2, sort_keys=True) + "\n")
    out.emit({"program": text.splitlines(), "mapping": mapping}, text)
    return EXIT_OK


def cmd_guardcheck(args, out: _Out) -> int:
    from .guardedness import analyze_program

    report = analyze_program(_program(args.file), args.max_width, args.max_arity)
    out.emit(report.to_json(), report.program_class or "unguarded")
    return EXIT_OK


def cmd_complete(args, out: _Out) -> int:
    from .fpl import build_comp, build_compg, build_gcomp, build_gcompg, formula_class
    from .model import program_signature
    from .transforms import hbg, to_p_program

    program = _program(args.file)
    if len(program_signature(program).predicates) > 1:
        program, _ = to_p_program(program)
    if args.hbg:
        program = hbg(program)
    build = {"comp": build_comp, "gcomp": build_gcomp, "compg": build_compg, "gcompg": build_gcompg}[args.kind]
    comp = build(program)
    cls = formula_class(comp.formulas)
    text = comp.render()
    out.emit(
        {"formulas": text.splitlines(), "fragment": cls.fragment, "alternation_free": cls.alternation_free},
        text,
    )
    return EXIT_OK


def cmd_fpl_eval(args, out: _Out) -> int:
    from .fpl import enumerate_models, parse_formulas
    from .fpl.evaluate import FiniteStructure, evaluate
    from .fpl.formula import constants, relations
    from .model import fresh_elements
    from .parser import parse_atoms

    formulas = parse_formulas(_read(args.file))
    consts = sorted(set().union(*(constants(f) for f in formulas))) if formulas else []
    if args.domain < len(consts):
        raise OaspError(f"domain size {args.domain} is below the {len(consts)} constants")
    domain = consts + fresh_elements(args.domain - len(consts), consts)
    if args.structure is not None:
        rels: dict[str, set] = {}
        for a in parse_atoms(_read(args.structure) if Path(args.structure).is_file() else args.structure):
            rels.setdefault(a.pred, set()).add(tuple(t.name for t in a.args))
        structure = FiniteStructure(tuple(domain), {k: frozenset(v) for k, v in rels.items()})
        trace: list | None = [] if out.config.trace else None
        values = [evaluate(f, structure, trace=trace) for f in formulas]
        if trace:
            out.trace("fixed-point approximants", [
                f"{pvar} ({kind}): " + " -> ".join("{" + ", ".join(",".join(t) for t in sorted(s)) + "}" for s in chain)
                for pvar, kind, chain in trace
            ])
        out.emit({"domain": domain, "values": values, "holds": all(values)}, "true" if all(values) else "false")
        return EXIT_OK
    arities: dict[str, int] = {}
    for f in formulas:
        arities.update(relations(f))
    models = list(enumerate_models(formulas, domain, arities, limit=1 << args.max_bits))
    shown = models[: args.limit] if args.limit is not None else models
    out.emit(
        {"domain": domain, "count": len(models), "models": [str(m) for m in shown]},
        "\n".join(str(m) for m in shown) + f"\n{len(models)} models",
    )
    return EXIT_OK


def _facts(text: str) -> frozenset:
    """Ground facts written as rules (``e(a,b).``) or as a plain atom list."""
    from .parser import parse_atoms, parse_program

    try:
        program = parse_program(text)
    except ParseError:
        return parse_atoms(text)
    atoms = []
    for r in program.rules:
        if r.body or r.glits or r.head_pos is None or r.head_neg or not r.head_pos.is_ground():
            raise ParseError(f"input line {r} is not a ground fact")
        atoms.append(r.head_pos)
    return frozenset(atoms)


def cmd_datalog(args, out: _Out) -> int:
    from . import datalog

    program = _program(args.file)
    facts = _facts(_read(args.input)) if args.input else frozenset()
    domain = tuple(e.strip() for e in args.domain.split(",")) if args.domain else ()
    structure = datalog.InputStructure(domain, facts)
    strat = datalog.stratify(program)
    trace: list | None = [] if out.config.trace else None
    model = datalog.lfp_model(strat, structure, trace)
    if trace is not None:
        out.trace("strata", [f"stratum {i}: " + ", ".join(sorted(str(a) for a in new)) for i, new in trace])
    if args.query:
        if args.query not in {a.pred for r in program.rules for a in r.atoms()}:
            raise OaspError(f"unknown predicate {args.query}")
        rows = sorted(model.relation(args.query))
        out.emit({"query": args.query, "tuples": [list(r) for r in rows]}, "\n".join(",".join(r) for r in rows))
    else:
        atoms = sorted(str(a) for a in model.facts)
        out.emit({"domain": list(model.domain), "atoms": atoms, "class": datalog.check_lite_class(program)}, "\n".join(atoms))
    return EXIT_OK


def cmd_ctl(args, out: _Out) -> int:
    from . import ctl
    from .parser import parse_ctl, render_program

    formula = parse_ctl(args.formula)
    if args.ctl_cmd == "encode":
        enc = ctl.encode(formula)
        if args.mapping:
            Path(args.mapping).write_text(json.dumps(enc.to_json(), indent=2, sort_keys=True) + "\n")
        text = render_program(enc.program)
        out.emit({"program": text.splitlines(), **enc.to_json()}, text)
        return EXIT_OK
    if args.ctl_cmd == "mc":
        k = ctl.Kripke.from_json(json.loads(_read(args.structure)))
        value = ctl.model_check(k, args.state, formula)
        out.emit({"state": args.state, "holds": value}, "true" if value else "false")
        return EXIT_OK
    verdicts = []
    witness = None
    for n in range(1, args.max_states + 1):
        v = ctl.dual_check(formula, n, out.config.budget())
        verdicts.append(v.to_json())
        if v.oasp and witness is None:
            k, s = ctl.decode(ctl.oasp_sat(formula, n, out.config.budget()), formula)
            witness = {"structure": k.to_json(), "state": s}
    agree = all(v["agree"] for v in verdicts)
    data = {"formula": args.formula, "verdicts": verdicts, "agree": agree, "witness": witness}
    out.emit(data, json.dumps(data, indent=2))
    if not agree:
        return EXIT_USAGE
    return EXIT_OK if witness else EXIT_UNSAT


def cmd_selftest(args, out: _Out) -> int:
    from .acceptance import run_all

    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(only, report=lambda line: sys.stderr.write(line + "\n"))
    out.emit([r.to_json() for r in results], "\n".join(r.line() for r in results))
    return EXIT_OK if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    env_budget = os.environ.get("OASP_BUDGET")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output", choices=("json", "text"), default="json")
    common.add_argument("--budget", type=int, default=int(env_budget) if env_budget else None,
                        help="search node budget (default from OASP_BUDGET)")
    common.add_argument("--max-atoms", type=int, default=None, help="ground atom budget")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trace", action="store_true", help="dump reducts, iterations and approximants to stderr")

    parser = argparse.ArgumentParser(prog="oasp", description="Open answer set programming toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and print a program in canonical form")
    p.add_argument("file")
    p.add_argument("--ctl", action="store_true", help="the file holds a CTL formula")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("ground", parents=[common], help="ground a program over a universe")
    p.add_argument("file")
    p.add_argument("--universe", help="comma separated elements (default: program constants)")
    p.add_argument("--max-rules", type=int, default=100_000)
    p.set_defaults(fn=cmd_ground)

    p = sub.add_parser("check", parents=[common], help="check an open interpretation")
    p.add_argument("file")
    p.add_argument("--universe")
    p.add_argument("--model", help="atoms, inline or as a file")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("solve", parents=[common], help="bounded satisfiability of a predicate")
    p.add_argument("file")
    p.add_argument("--pred", required=True)
    p.add_argument("--max-extra", type=int, default=3)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("answersets", parents=[common], help="enumerate open answer sets over a universe")
    p.add_argument("file")
    p.add_argument("--universe")
    p.add_argument("--up-to-iso", action="store_true")
    p.add_argument("--limit", type=int)
    p.set_defaults(fn=cmd_answersets)

    p = sub.add_parser("transform", parents=[common], help="apply a program transformation")
    p.add_argument("file")
    p.add_argument("--op", required=True, choices=("pprog", "hbg", "gua", "freechoice", "double"))
    p.add_argument("--mapping", help="write the atom mapping sidecar here")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("guardcheck", parents=[common], help="classify a program by guardedness")
    p.add_argument("file")
    p.add_argument("--max-width", type=int, default=3)
    p.add_argument("--max-arity", type=int, default=3)
    p.set_defaults(fn=cmd_guardcheck)

    p = sub.add_parser("complete", parents=[common], help="emit a fixed-point logic completion")
    p.add_argument("file")
    p.add_argument("--kind", required=True, choices=("comp", "gcomp", "compg", "gcompg"))
    p.add_argument("--hbg", action="store_true", help="apply hbg first (needed for guarded kinds)")
    p.set_defaults(fn=cmd_complete)

    p = sub.add_parser("fpl-eval", parents=[common], help="models of emitted formulas over a finite domain")
    p.add_argument("file")
    p.add_argument("--domain", type=int, required=True, help="domain size, constants included")
    p.add_argument("--structure", help="evaluate in this structure (atoms) instead of enumerating")
    p.add_argument("--limit", type=int)
    p.add_argument("--max-bits", type=int, default=20)
    p.set_defaults(fn=cmd_fpl_eval)

    p = sub.add_parser("datalog", help="stratified Datalog evaluation")
    dsub = p.add_subparsers(dest="datalog_cmd", required=True)
    d = dsub.add_parser("eval", parents=[common])
    d.add_argument("file")
    d.add_argument("--input", help="fact file")
    d.add_argument("--domain", help="extra domain elements, comma separated")
    d.add_argument("--query")
    d.set_defaults(fn=cmd_datalog)

    p = sub.add_parser("ctl", help="CTL encoding, satisfiability and model checking")
    csub = p.add_subparsers(dest="ctl_cmd", required=True)
    c = csub.add_parser("encode", parents=[common])
    c.add_argument("formula")
    c.add_argument("--mapping", help="write the predicate mapping here")
    c.set_defaults(fn=cmd_ctl)
    c = csub.add_parser("sat", parents=[common])
    c.add_argument("formula")
    c.add_argument("--max-states", type=int, default=3)
    c.set_defaults(fn=cmd_ctl)
    c = csub.add_parser("mc", parents=[common])
    c.add_argument("structure")
    c.add_argument("state")
    c.add_argument("formula")
    c.set_defaults(fn=cmd_ctl)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.add_argument("--only", help="comma separated criterion numbers")
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = RunConfig(
            max_extra=getattr(args, "max_extra", 3),
            max_nodes=args.budget,
            max_atoms=args.max_atoms,
            workers=args.workers,
            output=args.output,
            seed=args.seed,
            trace=args.trace,
        )
        return args.fn(args, _Out(config))
    except ResourceError as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (OaspError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
