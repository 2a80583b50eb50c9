"""Command-line front end.

Every command prints one JSON run report on stdout::

    {"command": ..., "inputs": {path: sha256}, "result": {...}, "timings": {phase: ms}}

Exit codes: 0 success, 2 input/validation error, 3 ks-check found no
global section.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from .errors import InvalidInput
from .io import atom_index, load_model, load_rayset, poset_to_json, section_to_json
from .lattice import to_dot
from .logic import Not, border, check_heyting_homomorphism, eval_formula, parse_formula, random_formula
from .sheaf import boolean_information, find_global_section, parity_oracle, principal_section

EXIT_OK, EXIT_INPUT, EXIT_KS = 0, 2, 3


class Run:
    def __init__(self, command: str):
        self.command = command
        self.inputs: dict = {}
        self.timings: dict = {}

    def digest(self, path):
        data = Path(path).read_bytes() if Path(path).is_file() else b""
        self.inputs[str(path)] = hashlib.sha256(data).hexdigest()

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round((time.perf_counter() - t0) * 1000, 3)

    def report(self, result: dict) -> dict:
        return {"command": self.command, "inputs": self.inputs, "result": result, "timings": self.timings}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _write(path: str, text: str):
    Path(path).write_text(text, encoding="utf-8")


def cmd_validate(args, run: Run) -> tuple:
    run.digest(args.rayset)
    with run.phase("load"):
        rs = load_rayset(args.rayset)
    return EXIT_OK, {
        "ok": True,
        "dim": rs.dim,
        "rays": len(rs.rays),
        "contexts": len(rs.contexts),
        "memberships": rs.memberships(),
    }


def cmd_poset(args, run: Run) -> tuple:
    run.digest(args.rayset)
    with run.phase("load"):
        rs = load_rayset(args.rayset)
    with run.phase("build"):
        p = rs.poset(join_compatible=args.join_compatible)
        covers = p.covers()
    if args.dot:
        _write(args.dot, to_dot(p))
    if args.json:
        _write(args.json, _dump(poset_to_json(p)) + "\n")
    return EXIT_OK, {
        "nodes": len(p),
        "covering_edges": len(covers),
        "inputs": list(p.input_ids),
        "maximal": list(p.maximal_ids),
        "bottom": p.bottom_id,
    }


def cmd_ks_check(args, run: Run) -> tuple:
    run.digest(args.rayset)
    with run.phase("load"):
        rs = load_rayset(args.rayset)
    with run.phase("build"):
        p = rs.poset()
    with run.phase("search"):
        found = find_global_section(p)
    with run.phase("parity"):
        oracle = parity_oracle([c.atoms for c in rs.contexts])
    result = {
        "verdict": "exists" if found.exists else "none",
        "global_section": found.section.indices() if found.exists else None,
        "explored": found.explored,
        "parity_oracle": oracle,
    }
    if found.exists and rs.context_rays:
        result["selected_rays"] = {
            cid: rs.ray_name_for(found.section[cid].atom) for cid in rs.context_rays
        }
    return (EXIT_OK if found.exists else EXIT_KS), result


def cmd_section(args, run: Run) -> tuple:
    run.digest(args.rayset)
    with run.phase("load"):
        rs = load_rayset(args.rayset)
        p = rs.poset()
    if args.base not in p:
        raise InvalidInput(f"unknown context {args.base!r}")
    atom = args.atom
    if atom is not None and atom.isdigit() and atom not in rs.rays:
        atom = int(atom)
    with run.phase("section"):
        index = atom_index(p.context(args.base), atom if atom is not None else 0, rs)
        s = principal_section(p, args.base, index)
    doc = section_to_json(s, args.base, args.atom if args.atom is not None else 0)
    if args.out:
        _write(args.out, _dump(doc) + "\n")
    return EXIT_OK, {"domain_size": len(s.domain), "section": doc}


def cmd_eval(args, run: Run) -> tuple:
    run.digest(args.model)
    with run.phase("load"):
        _, p, m = load_model(args.model)
    if args.formula is None and args.check_homomorphism is None:
        raise InvalidInput("give --formula or --check-homomorphism N")
    if args.formula is None:
        rng = random.Random(args.seed)
        names = sorted(m.bindings)
        if not names:
            raise InvalidInput("the model binds no atoms")
        phis = [random_formula(rng, names, args.depth) for _ in range(args.check_homomorphism)]
        with run.phase("check"):
            rep = check_heyting_homomorphism(m, phis)
        return EXIT_OK, {
            "formulas": len(phis),
            "checked": rep.checked,
            "violations": [[law, str(a), None if b is None else str(b), cid] for law, a, b, cid in rep.violations],
        }
    with run.phase("parse"):
        phi = parse_formula(args.formula)
    with run.phase("eval"):
        value = eval_formula(m, phi)
        negation = eval_formula(m, Not(phi))
    return EXIT_OK, {
        "formula": args.formula,
        "value": value.ids(),
        "negation": negation.ids(),
        "border": p.sort_ids(border(value)),
    }


def cmd_witness(args, run: Run) -> tuple:
    run.digest(args.model)
    with run.phase("load"):
        rs, p, m = load_model(args.model)
    for cid in (args.from_, args.about):
        if cid not in p:
            raise InvalidInput(f"unknown context {cid!r}")
    with run.phase("witness"):
        info = boolean_information(m.section, args.from_, args.about)
    if info is None:
        raise InvalidInput(f"the intersection of {args.from_} and {args.about} is not in the poset")
    meet = info.context
    result = {
        "from": args.from_,
        "about": args.about,
        "intersection": meet.id,
        "intersection_atoms": [a.to_json() for a in meet.atoms],
        "information": not meet.is_trivial(),
    }
    if meet.is_trivial():
        result["valuation"] = None
    else:
        result["valuation"] = {
            "selected_atom": info.selected_atom,
            "projector": info.atom.to_json(),
            "ray": rs.ray_name_for(info.atom),
            "values": [1 if j == info.selected_atom else 0 for j in range(meet.size)],
        }
    return EXIT_OK, result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctxlogic", description="Contextual quantum logic over finite context posets.")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    parser.add_argument("--quiet", action="store_true", help="suppress diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a ray-set file")
    p.add_argument("rayset")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("poset", help="build the coarsening-closed context poset")
    p.add_argument("rayset")
    p.add_argument("--dot", metavar="OUT", help="write Graphviz covering diagram")
    p.add_argument("--json", metavar="OUT", help="write poset JSON (re-loadable as a context file)")
    p.add_argument("--join-compatible", action="store_true", help="also add common refinements of commuting contexts")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("ks-check", help="search for a global section")
    p.add_argument("rayset")
    p.set_defaults(func=cmd_ks_check)

    p = sub.add_parser("section", help="emit a principal section")
    p.add_argument("rayset")
    p.add_argument("--base", required=True, help="context id")
    p.add_argument("--atom", help="ray name or atom index (default 0)")
    p.add_argument("--out", metavar="OUT", help="write the section file")
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("eval", help="evaluate a formula in a Kripke model")
    p.add_argument("model")
    p.add_argument("--formula")
    p.add_argument("--check-homomorphism", type=int, metavar="N", help="check the Heyting laws on N random formulas")
    p.add_argument("--depth", type=int, default=4, help="max depth of random formulas")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("witness", help="Boolean information one context has about another")
    p.add_argument("model")
    p.add_argument("--from", dest="from_", required=True, metavar="CTX_B")
    p.add_argument("--about", required=True, metavar="CTX_A")
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    run = Run(args.command)
    try:
        code, result = args.func(args, run)
    except InvalidInput as exc:
        if not args.quiet:
            print(f"error: {exc}", file=sys.stderr)
        code, result = EXIT_INPUT, {"ok": False, "error": str(exc)}
    print(_dump(run.report(result)))
    return code


if __name__ == "__main__":
    sys.exit(main())
