"""Command-line interface.

Exit codes: 0 the checked property holds, 1 it is violated, 2 bad input.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import corpus
from .diffeo import MissingInverseError
from .io import (
    FormatError,
    diffeo_to_json,
    dump_json,
    load_diffeo,
    load_structure,
    parse_point,
    structure_to_json,
)
from .invariants import (
    integrability_report,
    naturality_check,
    nijenhuis,
    nijenhuis_symbolic,
    omega_field,
    omega_symbolic,
)
from .jets import ACS, InvalidStructureError, acs_defect, jet1_at, standard_complex_matrix
from .linalg import SingularMatrixError
from .spencer import spencer_dimensions

OK, VIOLATED, BAD_INPUT = 0, 1, 2


class _InputError(Exception):
    pass


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _structure(path):
    try:
        return load_structure(path)
    except (FormatError, ValueError) as exc:
        raise _InputError(str(exc)) from exc


def _acs(args):
    S = _structure(args.structure)
    bad = acs_defect(S)
    if bad is not None:
        i, j, e = bad
        print(f"not almost-complex: (S^2 + I)[{i + 1},{j + 1}] = {e}", file=sys.stderr)
        return None
    return ACS.from_field(S)


def _point(text, d):
    try:
        return parse_point(text, d)
    except FormatError as exc:
        raise _InputError(str(exc)) from exc


def _symbolic_components(arr) -> dict:
    d = len(arr)
    return {
        f"{i + 1},{j + 1},{k + 1}": str(arr[i][j][k])
        for i in range(d)
        for j in range(d)
        for k in range(j + 1, d)
        if not arr[i][j][k].is_zero()
    }


# -- subcommands ------------------------------------------------------------


def cmd_check(args) -> int:
    S = _structure(args.structure)
    bad = acs_defect(S)
    if bad is None:
        print("ok: S^2 = -I")
        return OK
    i, j, e = bad
    print(f"violated: (S^2 + I)[{i + 1},{j + 1}] = {e}")
    return VIOLATED


def cmd_jet(args) -> int:
    S = _structure(args.structure)
    p = _point(args.at, S.dim)
    _emit(args, dump_json(jet1_at(S, p).to_json()))
    return OK


def _tensor_command(args, pointwise, symbolic, label) -> int:
    S = _acs(args)
    if S is None:
        return VIOLATED
    if args.symbolic == (args.at is not None):
        raise _InputError("give exactly one of --at or --symbolic")
    if args.symbolic:
        out = {"tensor": label, "symbolic": True, "components": _symbolic_components(symbolic(S))}
    else:
        p = _point(args.at, S.dim)
        out = {
            "tensor": label,
            "at": [str(x) for x in p],
            "components": pointwise(S, p).components(),
        }
    _emit(args, dump_json(out))
    return OK


def cmd_omega(args) -> int:
    return _tensor_command(args, omega_field, omega_symbolic, "omega")


def cmd_nijenhuis(args) -> int:
    return _tensor_command(args, nijenhuis, nijenhuis_symbolic, "nijenhuis")


def cmd_spencer(args) -> int:
    if args.n < 1:
        raise _InputError("--n must be at least 1")
    if args.theta0:
        if not args.at:
            raise _InputError("--theta0 needs --at")
        S = _structure(args.theta0)
        if S.n != args.n:
            raise _InputError(f"structure has n = {S.n}, expected {args.n}")
        theta0 = S.at(_point(args.at, S.dim))
    else:
        theta0 = standard_complex_matrix(args.n)
    try:
        dims = spencer_dimensions(theta0)
    except InvalidStructureError as exc:
        raise _InputError(str(exc)) from exc
    _emit(args, dump_json(dims.to_json()))
    return OK


def cmd_naturality(args) -> int:
    S = _acs(args)
    if S is None:
        return VIOLATED
    try:
        f = load_diffeo(args.diffeo)
    except (FormatError, ValueError) as exc:
        raise _InputError(str(exc)) from exc
    if f.dim != S.dim:
        raise _InputError("structure and diffeomorphism dimensions differ")
    p = _point(args.at, S.dim)
    try:
        ok = naturality_check(S, f, p)
    except (MissingInverseError, SingularMatrixError) as exc:
        raise _InputError(str(exc)) from exc
    print("holds" if ok else "violated")
    return OK if ok else VIOLATED


def cmd_integrability(args) -> int:
    if args.samples < 1:
        raise _InputError("--samples must be at least 1")
    S = _acs(args)
    if S is None:
        return VIOLATED
    rng = random.Random(args.seed)
    points = [corpus.random_point(S.dim, rng) for _ in range(args.samples)]
    report = integrability_report(S, points)
    _emit(args, dump_json(report.to_json()))
    return OK if report.consistent else VIOLATED


def cmd_gen(args) -> int:
    try:
        S, f = corpus.generate(args.kind, args.n, args.degree, args.seed)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    _emit(args, dump_json(structure_to_json(S)))
    if f is not None:
        target = args.diffeo_out
        if target is None and args.out:
            target = str(Path(args.out).with_suffix("")) + ".diffeo.json"
        if target:
            Path(target).write_text(dump_json(diffeo_to_json(f)), encoding="utf-8")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="almostcomplex",
        description="Exact invariants of almost-complex structures on R^2n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = add("check", cmd_check, "verify S^2 = -I symbolically")
    sp.add_argument("structure")

    sp = add("jet", cmd_jet, "print the 1-jet of a structure at a point")
    sp.add_argument("structure")
    sp.add_argument("--at", required=True, help='point, e.g. "1,0,-1/2,2"')

    for name, func in (("omega", cmd_omega), ("nijenhuis", cmd_nijenhuis)):
        sp = add(name, func, f"print the {name} tensor")
        sp.add_argument("structure")
        sp.add_argument("--at")
        sp.add_argument("--symbolic", action="store_true")

    sp = add("spencer", cmd_spencer, "dimensions of g, g^(1), delta images and H^{0,2}")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--theta0", help="structure file supplying theta0 = S(p)")
    sp.add_argument("--at")

    sp = add("naturality", cmd_naturality, "check the transformation law of omega")
    sp.add_argument("structure")
    sp.add_argument("--diffeo", required=True)
    sp.add_argument("--at", required=True)

    sp = add("integrability", cmd_integrability, "compare omega and the Nijenhuis tensor")
    sp.add_argument("structure")
    sp.add_argument("--samples", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("gen", cmd_gen, "generate a seeded structure file")
    sp.add_argument("--kind", choices=("constant", "gauge", "pullback"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--degree", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--diffeo-out", help="where to write the shear of a pullback structure")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
