"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 verification failure.
Initial forms use the min convention (terms of minimal weight are kept).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import idealkit, projkit, tgeom, tropkit, valkit
from .exactla import format_rat, parse_rat
from .inputs import InputError, Problem, load_problem
from .kernels import BACKEND

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _poly_json(f: idealkit.XPolynomial, names=None) -> dict:
    out = f.to_json()
    out["text"] = f.pretty(names)
    return out


def _setup(prob: Problem):
    e = tgeom.build_embedding(prob.divisor)
    return e, prob.line, prob.divisor


def _valuation(prob: Problem, args) -> valkit.HomogeneousValuation:
    r = prob.divisor.lattice_rank
    if args.psi is not None or args.gamma is not None or prob.valuation is None:
        psi = json.loads(args.psi) if args.psi else [[int(i == j) for j in range(r)] for i in range(r)] + [[0] * r]
        gamma = json.loads(args.gamma) if args.gamma else [0] * r + [1]
        return valkit.HomogeneousValuation(tuple(map(tuple, psi)), tuple(gamma),
                                           args.point if args.point is not None else 0)
    val = prob.valuation
    if args.point is not None:
        val = valkit.HomogeneousValuation(val.psi, val.gamma, args.point)
    return val


def cmd_embed(prob, args):
    e, line, d = _setup(prob)
    out = e.to_json()
    out["line"] = line.to_json()
    out["toric"] = tgeom.detect_toric(line)
    return out, EXIT_OK


def cmd_ideal(prob, args):
    e, line, d = _setup(prob)
    J = idealkit.ideal_presentation(e, line, d, args.degree_bound)
    return {
        "variables": e.names,
        "hilbert_basis": [list(h) for h in e.hilbert_basis],
        "toric_generators": [_poly_json(g) for g in J.toric_generators],
        "linear_lift_generators": [_poly_json(g) for g in J.linear_lift_generators],
        "line_relations": [list(c) for c in line.relations()],
        "chart": "z_i = y_i / y_0",
        "degree_bound": args.degree_bound,
    }, EXIT_OK


def cmd_trop(prob, args):
    e, line, d = _setup(prob)
    fan = tropkit.trop_X(e, line)
    out = fan.to_json()
    out["tropical_line"] = tropkit.trop_line(line).to_json()
    out["lineality_dim"] = fan.lineality_dim
    out["convention"] = "min"
    return out, EXIT_OK


def cmd_initial(prob, args):
    e, line, d = _setup(prob)
    J = idealkit.ideal_presentation(e, line, d, args.degree_bound)
    if args.weight is not None:
        w = tuple(parse_rat(x) for x in args.weight)
        if len(w) != e.n:
            raise InputError(f"weight needs {e.n} entries", "/--weight")
    else:
        rays = tropkit.trop_line(line).rays
        j = args.cone if args.cone is not None else 0
        if not 0 <= j < len(rays):
            raise InputError(f"cone index out of range 0..{len(rays) - 1}", "/--cone")
        w = tropkit.phi(e, (0,) * e.rank_N + rays[j])
    forms = tropkit.initial_presentation(J, w)
    mono = [f for f in forms if f.is_monomial]
    return {
        "weight": [format_rat(x) for x in w],
        "initial_gens": [_poly_json(f) for f in forms],
        "in_tropicalization": not mono,
        "convention": "min",
    }, EXIT_OK


def cmd_well_poised(prob, args):
    if prob.hand_supplied:
        rep = tropkit.verify_custom_embedding(prob.degrees, prob.divisor.lattice_rank, prob.generators, prob.line)
    else:
        e, line, d = _setup(prob)
        rep = tropkit.verify_well_poised(e, line, d, args.degree_bound)
    out = rep.to_json()
    return out, EXIT_OK if rep.well_poised else EXIT_VERIFY


def cmd_value_semigroup(prob, args):
    e, line, d = _setup(prob)
    val = _valuation(prob, args)
    S = valkit.value_semigroup(e, line, d, val)
    out = S.to_json()
    out["valuation"] = val.to_json()
    kh = valkit.khovanskii_check(e, line, d, val, args.degree_bound, prob.grading)
    out["khovanskii"] = kh.to_json()
    if args.grid is not None:
        if val.r != 2:
            raise InputError("--grid needs a rank-2 valuation", "/--grid")
        out["grid"] = S.grid(*args.grid)
    return out, EXIT_OK if kh.ok else EXIT_VERIFY


def _polarized(prob: Problem) -> projkit.PolarizedInput:
    if prob.grading is None:
        raise InputError("this command needs a 'grading' co-character", "/grading")
    return projkit.PolarizedInput(prob.divisor, prob.grading)


def cmd_nok_body(prob, args):
    p = _polarized(prob)
    val = _valuation(prob, args)
    j = val.boundary_index(prob.line)
    body = projkit.nok_body(p, prob.line, j, val.psi, val.gamma)
    out = body.to_json()
    out["point_index"] = j
    return out, EXIT_OK


def cmd_test_configs(prob, args):
    p = _polarized(prob)
    fibers = projkit.test_config_fibers(p, prob.line, min(args.degree_bound, 3))
    return {
        "fibers": [
            dict(f.to_json(), ideal_text=[g.pretty() for g in f.ideal_generators]) for f in fibers
        ],
        "nontrivial": sum(1 for f in fibers if f.label != "trivial"),
        "equivalence": "grading-preserving unimodular map between generator sets",
    }, EXIT_OK


COMMANDS = {
    "embed": cmd_embed,
    "ideal": cmd_ideal,
    "trop": cmd_trop,
    "initial": cmd_initial,
    "well-poised": cmd_well_poised,
    "value-semigroup": cmd_value_semigroup,
    "nok-body": cmd_nok_body,
    "test-configs": cmd_test_configs,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="semicanonical",
        description="Semi-canonical embeddings of rational complexity-one T-varieties. "
                    "Initial forms follow the min convention.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({BACKEND} kernels)")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", help="divisor or problem JSON file")
        p.add_argument("--degree-bound", type=int, default=6)
        p.add_argument("--json", action="store_true", help="canonical JSON (the default)")
        p.add_argument("--text", action="store_true", help="short human-readable summary instead of JSON")
        p.add_argument("-o", "--output", help="write JSON here instead of stdout")
        if name == "initial":
            g = p.add_mutually_exclusive_group()
            g.add_argument("--cone", type=int)
            g.add_argument("--weight", nargs="+")
        if name in ("value-semigroup", "nok-body"):
            p.add_argument("--point", type=int, help="boundary point index j")
            p.add_argument("--psi", help="JSON integer matrix, r x rank_N")
            p.add_argument("--gamma", help="JSON integer vector of length r")
        if name == "value-semigroup":
            p.add_argument("--grid", type=int, nargs=4, metavar=("UMIN", "UMAX", "VMIN", "VMAX"))
    return ap


def _summary(command: str, out: dict) -> str:
    if command == "ideal":
        return "\n".join(g["text"] for g in out["toric_generators"] + out["linear_lift_generators"])
    if command == "well-poised":
        return out["verdict"]
    if command == "initial":
        return "\n".join(g["text"] for g in out["initial_gens"])
    if command == "test-configs":
        return "\n".join(f"{f['label']}: normal={f['normal']} merged={f['merged']}" for f in out["fibers"])
    return canonical_dumps(out).rstrip()


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.degree_bound < 2:
            raise InputError("degree bound must be at least 2", "/--degree-bound")
        prob = load_problem(args.input)
        out, code = COMMANDS[args.command](prob, args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"input error at {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (valkit.NotABoundaryPoint, valkit.NotFullRank, projkit.EmptyBox, projkit.NotInjective,
            tgeom.InvalidDivisor, tropkit.NotInTropicalization) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = _summary(args.command, out) + "\n" if args.text else canonical_dumps(out)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
