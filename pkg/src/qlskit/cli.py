"""
Command-line front end.

Exit codes, uniformly: 0 pass, 1 domain failure, 2 input or usage error.
Reports go to stdout (``--json`` for machine-readable, byte-stable output),
diagnostics to stderr. ``QLSKIT_TOL`` overrides the default tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import codes, formats, qlis, qls
from .fixtures import FIXTURE_IDS, write_fixture_files
from .numlin import DEFAULT_TOL, check_tol

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, complex):
        return formats.dump_scalar(x)
    return x


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.doc: dict = {}

    def put(self, key, value, text: str | None = None):
        self.doc[key] = _jsonable(value)
        if not self.as_json and text is not None:
            print(text)

    def finish(self, code: int) -> int:
        if self.as_json:
            self.doc["exit_code"] = code
            sys.stdout.write(json.dumps(self.doc, indent=1, sort_keys=True) + "\n")
        return code


def _load(path, *kinds):
    try:
        kind, obj = formats.load(path)
    except formats.FormatError as exc:
        raise InputError(str(exc)) from exc
    if kinds and kind not in kinds:
        raise InputError(f"{path}: expected a {' or '.join(kinds)} document, got {kind!r}")
    return kind, obj


def _fmt(v: float) -> str:
    return f"{v:.3e}"


def cmd_validate(args, out: Output) -> int:
    kind, obj = _load(args.path, "qls", "qlis", "sppm")
    if kind == "qls":
        rep = qls.validate_qls(obj, args.tol)
    elif kind == "qlis":
        rep = qlis.validate_qlis(obj, args.tol)
    else:
        rep = qlis.validate_skew_ppm(obj, args.tol)
    worst = rep.worst
    out.put("type", kind, f"type: {kind}")
    out.put("violations", rep.violations)
    out.put("worst", list(worst) if worst else None, f"worst: {worst[0]} = {_fmt(worst[1])}" if worst else None)
    out.put("pass", rep.passed, "PASS" if rep.passed else f"FAIL: {sorted(rep.failures())}")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_orthogonal(args, out: Output) -> int:
    ka, a = _load(args.path_a, "qls", "qlis")
    kb, b = _load(args.path_b, "qls", "qlis")
    if ka != kb:
        raise InputError(f"kind mismatch: {ka} vs {kb}")
    if ka == "qlis":
        try:
            rep = qlis.check_orthogonal_qlis(a, b, args.tol)
        except (qlis.CompositionError, ValueError) as exc:
            out.put("error", str(exc), f"FAIL: {exc}")
            return EXIT_FAIL
        out.put("nonzero_count", rep.nonzero_count, f"nonzero parts: {rep.nonzero_count} (d^2 = {rep.d ** 2})")
        out.put("a", rep.common_trace, f"common trace a = {rep.common_trace:g}")
        out.put("gram_violation", rep.gram_violation, f"gram route: {'pass' if rep.gram_pass else 'fail'} ({_fmt(rep.gram_violation)})")
        out.put("s_isometry_violation", rep.s_isometry_violation, f"S route: {'pass' if rep.s_pass else 'fail'} ({_fmt(rep.s_isometry_violation)})")
        out.put("routes_agree", rep.routes_agree, None if rep.routes_agree else "ROUTES DISAGREE (implementation bug)")
        out.put("pass", rep.passed, "PASS" if rep.passed else "FAIL")
        return EXIT_PASS if rep.passed and rep.routes_agree else EXIT_FAIL
    if a.n != b.n:
        raise InputError(f"size mismatch: {a.n} vs {b.n}")
    methods = qls.METHODS if args.method == "all" else (args.method,)
    reports = {m: qls.check_orthogonal(a, b, m, args.tol) for m in methods}
    for m, rep in reports.items():
        line = f"{m:14s} {'pass' if rep.passed else 'fail'}  max violation {_fmt(rep.max_violation)}"
        if rep.witness:
            line += f"  witness {rep.witness}"
        out.put(m, {"pass": rep.passed, "max_violation": rep.max_violation, "witness": rep.witness}, line)
    verdicts = {rep.passed for rep in reports.values()}
    agree = len(verdicts) == 1
    passed = agree and verdicts == {True}
    out.put("methods_agree", agree, None if agree else "METHODS DISAGREE (implementation bug)")
    out.put("pass", passed, "PASS" if passed else "FAIL")
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_moqls(args, out: Output) -> int:
    if len(args.paths) < 2:
        raise InputError("need at least two squares")
    family = [_load(p, "qls")[1] for p in args.paths]
    if len({sq.n for sq in family}) != 1:
        raise InputError("squares have different sizes")
    modes = qls.FAMILY_MODES if args.mode == "both" else (args.mode,)
    reports = {m: qls.check_mutually_orthogonal(family, m, args.tol) for m in modes}
    for m, rep in reports.items():
        line = f"{m:9s} {'pass' if rep.passed else 'fail'}  max violation {_fmt(rep.max_violation)}"
        if rep.worst:
            line += f"  worst {rep.worst}"
        out.put(m, {"pass": rep.passed, "max_violation": rep.max_violation, "worst": rep.worst}, line)
    verdicts = {rep.passed for rep in reports.values()}
    agree = len(verdicts) == 1
    passed = agree and verdicts == {True}
    out.put("family_size", len(family), f"family size {len(family)}, n = {family[0].n}")
    out.put("modes_agree", agree, None if agree else "MODES DISAGREE (implementation bug)")
    out.put("pass", passed, "PASS" if passed else "FAIL")
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_code(args, out: Output) -> int:
    try:
        if args.sppm:
            if args.paths:
                raise InputError("give either two isometry-square files or --sppm, not both")
            _, t = _load(args.sppm, "sppm")
            enc = codes.build_encoder_from_sppm(t, args.tol)
        else:
            if len(args.paths) != 2:
                raise InputError("need exactly two isometry-square files (K then Q)")
            _, k = _load(args.paths[0], "qlis")
            _, q = _load(args.paths[1], "qlis")
            enc = codes.build_encoder(k, q, args.tol)
    except (codes.NotOrthogonalError, qlis.CompositionError) as exc:
        out.put("error", str(exc), f"FAIL: {exc}")
        return EXIT_FAIL
    out.put("legs", list(enc.legs), f"encoder legs {enc.legs}, logical dimension {enc.logical_dim}")
    iso = codes.encoder_isometry_violation(enc)
    out.put("isometry_violation", iso, f"V^dagger V - I: {_fmt(iso)}")
    paper = codes.check_kl_paper(enc, args.tol)
    generic = codes.check_kl_generic(enc, args.tol)
    for name, v in paper.violations.items():
        out.put(f"kl_{name}", v, f"KL {name}: {_fmt(v)}")
    out.put("kl_leg_bending_pass", paper.passed, f"KL conditions: {'pass' if paper.passed else 'fail'}")
    out.put("kl_generic_pass", generic.passed, f"generic single-error sweep: {'pass' if generic.passed else 'fail'}")
    if generic.witness:
        out.put("generic_witness", generic.witness, f"witness: leg {generic.witness[0]}, {generic.witness[1]}")
    if args.out:
        formats.save(enc, args.out)
        out.put("written", str(args.out), f"wrote {args.out}")
    passed = paper.passed and generic.passed and iso <= args.tol
    out.put("pass", passed, "PASS" if passed else "FAIL")
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_ueb(args, out: Output) -> int:
    kind, obj = _load(args.path, "unitary_family", "qlis")
    if args.from_qlis and kind != "qlis":
        raise InputError("--from-qlis needs an isometry-square file")
    if args.to_qlis and kind != "unitary_family":
        raise InputError("--to-qlis needs a unitary-family file")
    if kind == "qlis":
        try:
            fam = codes.qlis_to_ueb(obj, args.tol)
        except (codes.NotUEBError, codes.NotOrthogonalError) as exc:
            out.put("error", str(exc), f"FAIL: {exc}")
            return EXIT_FAIL
        out.put("recovered", len(fam.members), f"recovered {len(fam.members)} unitaries on C^{fam.d}")
        round_trip = codes.ueb_to_qlis(fam, args.tol)
        exact = all(
            np.array_equal(round_trip.block(i, i), obj.block(i, i)) for i in range(obj.n)
        )
        out.put("round_trip_exact", exact, f"round trip exact: {exact}")
        if args.out:
            formats.save(fam, args.out)
            out.put("written", str(args.out), f"wrote {args.out}")
        passed = exact
    else:
        rep = codes.is_ueb(obj, args.tol)
        out.put("count", rep.count, f"{rep.count} members (UEB needs {rep.expected_count})")
        out.put("gram_violation", rep.gram_violation, f"trace-Gram violation {_fmt(rep.gram_violation)}")
        out.put("is_ueb", rep.passed, "UEB" if rep.passed else "not a UEB")
        passed = rep.passed
        if passed:
            sq = codes.ueb_to_qlis(obj, args.tol)
            orth = qlis.check_orthogonal_qlis(qlis.identity_square(sq.n, sq.d), sq, args.tol)
            exact = codes.same_family(codes.qlis_to_ueb(sq, args.tol), obj)
            out.put("orthogonal_to_identity_square", orth.passed, f"orthogonal to identity square: {orth.passed} (a = {orth.common_trace:g})")
            out.put("round_trip_exact", exact, f"round trip exact: {exact}")
            passed = orth.passed and exact
            if args.out:
                formats.save(sq, args.out)
                out.put("written", str(args.out), f"wrote {args.out}")
    out.put("pass", passed, "PASS" if passed else "FAIL")
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_gen_mols(args, out: Output) -> int:
    try:
        family = qls.generate_cyclic_mols(args.p, args.count)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.seed is not None:
        # one shared pair of permutations, independent unitaries and phases
        rng = np.random.default_rng(args.seed)
        rows, cols = list(rng.permutation(args.p)), list(rng.permutation(args.p))
        family = [
            qls.apply_equivalence(sq, qls.random_equivalence(args.p, rng, rows, cols))
            for sq in family
        ]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, sq in enumerate(family, start=1):
        path = out_dir / f"mols_p{args.p}_k{k}.json"
        formats.save(sq, path)
        paths.append(str(path))
    out.put("files", paths, "\n".join(f"wrote {p}" for p in paths))
    valid = all(qls.validate_qls(formats.load(p)[1], args.tol).passed for p in paths)
    passed = valid
    if len(family) >= 2:
        reloaded = [formats.load(p)[1] for p in paths]
        passed = valid and all(
            qls.check_mutually_orthogonal(reloaded, m, args.tol).passed for m in qls.FAMILY_MODES
        )
    out.put("pass", passed, "PASS" if passed else "FAIL")
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_obstruction(args, out: Output) -> int:
    _, q = _load(args.path, "qls")
    if not qls.validate_qls(q, args.tol).passed:
        out.put("error", "not a valid quantum Latin square", "FAIL: not a valid quantum Latin square")
        return EXIT_FAIL
    w = qls.classicality_obstruction(q, args.tol)
    if w is None:
        out.put("witness", None, "inconclusive")
    else:
        out.put(
            "witness",
            {"i": w.i, "j": w.j, "p": w.p, "q": w.q, "value": w.value},
            f"witness |<({w.i},{w.j})|({w.p},{w.q})>| = {w.value:.12f}: not equivalent to a classical square",
        )
    return EXIT_PASS


def cmd_export_fixtures(args, out: Output) -> int:
    paths = write_fixture_files(args.out_dir)
    out.put("files", [str(p) for p in paths], "\n".join(f"wrote {p}" for p in paths))
    return EXIT_PASS


def _default_tol() -> float:
    env = os.environ.get("QLSKIT_TOL")
    return float(env) if env else DEFAULT_TOL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="absolute tolerance (default 1e-9 or $QLSKIT_TOL)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized steps")

    parser = argparse.ArgumentParser(prog="qlskit", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a qls / qlis / sppm file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("orthogonal", parents=[common], help="check orthogonality of two squares")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--method", choices=("all",) + qls.METHODS, default="all")
    p.set_defaults(func=cmd_orthogonal)

    p = sub.add_parser("moqls", parents=[common], help="check mutual orthogonality of a family")
    p.add_argument("paths", nargs="+")
    p.add_argument("--mode", choices=("both",) + qls.FAMILY_MODES, default="both")
    p.set_defaults(func=cmd_moqls)

    p = sub.add_parser("code", parents=[common], help="build and check the error-detecting encoder")
    p.add_argument("paths", nargs="*", help="K and Q isometry-square files")
    p.add_argument("--sppm", help="build directly from a skew PPM file instead")
    p.add_argument("--out", help="write the encoder here")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("ueb", parents=[common], help="unitary error bases and diagonal squares")
    p.add_argument("path")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--to-qlis", action="store_true", help="convert a unitary family to a diagonal square")
    g.add_argument("--from-qlis", action="store_true", help="recover a unitary family from a diagonal square")
    p.add_argument("--out", help="write the converted object here")
    p.set_defaults(func=cmd_ueb)

    p = sub.add_parser("gen-mols", parents=[common], help="write cyclic MOLS of prime order")
    p.add_argument("p", type=int)
    p.add_argument("count", type=int)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_gen_mols)

    p = sub.add_parser("obstruction", parents=[common], help="search for a non-classicality witness")
    p.add_argument("path")
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("export-fixtures", parents=[common], help=f"write fixture files {', '.join(FIXTURE_IDS)}")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_export_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    out = Output(args.json)
    try:
        args.tol = check_tol(_default_tol() if args.tol is None else args.tol)
        code = args.func(args, out)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        out.put("error", str(exc))
        return out.finish(EXIT_INPUT)
    return out.finish(code)


if __name__ == "__main__":
    sys.exit(main())
