"""Command-line interface.

Exit codes: 0 success, 1 a built code failed validation, 2 usage error,
3 illegal construction, 4 exact-distance budget exceeded.

Every JSON document starts with ``tool_version``, ``command_line`` and
``seed`` so reruns can be compared byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import shlex
import sys
from pathlib import Path

from multicss import __version__
from multicss.analytics import CaseLabel, lattice_geometry, scan_fixed_n
from multicss.codes import ClassicalCode, emit_alist, emit_mtx, parse_alist, parse_mtx, read_alist, repetition_code
from multicss.construct import (
    ConstructionSpec,
    CssCode,
    LegalityError,
    assemble,
    check_legality,
    classify,
    css_violation,
    derive_roles,
)
from multicss.metrics import DEFAULT_BUDGET, DistanceBudgetError, code_metrics, compute_k, distance_exact

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_LEGALITY = 3
EXIT_BUDGET = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _csv_words(text: str) -> list[str]:
    return [t.strip().upper() for t in text.split(",") if t.strip()]


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("construction")
    g.add_argument("--d", type=int, help="number of classical codes")
    g.add_argument("--case", choices=[c.value for c in CaseLabel], help="three-code shorthand")
    g.add_argument("--seed-blocks", type=_csv_words, help="Z-check seed blocks, e.g. BBB,CCB")
    g.add_argument("--flips", type=_csv_ints, help="allowed odd FLIP counts, e.g. 1,3")
    g.add_argument("--rep", type=_csv_ints, help="repetition-code lengths, one per sector")
    g.add_argument("--alist", action="append", default=[], help="alist file for one sector (repeat per sector)")


def _add_matrix_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("prebuilt matrices")
    g.add_argument("--hx", help="X-check matrix file (.alist or .mtx)")
    g.add_argument("--hz", help="Z-check matrix file (.alist or .mtx)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    p.add_argument("--out", help="directory for output files; stdout if omitted")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multicss", description="CSS codes from several classical codes.")
    parser.add_argument("--version", action="version", version=f"multicss {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="assemble hx/hz and write them to files")
    _add_spec_args(p)
    _add_common(p)
    p.add_argument("--format", choices=["alist", "mtx"], default="mtx")

    p = sub.add_parser("metrics", help="n, k and distance of a code")
    _add_spec_args(p)
    _add_matrix_args(p)
    _add_common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--exact", action="store_true", help="fail with exit 4 rather than report an upper bound")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("validate", help="check that every X check commutes with every Z check")
    _add_spec_args(p)
    _add_matrix_args(p)
    _add_common(p)

    p = sub.add_parser("scan", help="k and d of every (L1, L2, L3) at a fixed qubit count")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cases", type=_csv_words, default=[c.value for c in CaseLabel])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _add_common(p)

    p = sub.add_parser("classify", help="census of inequivalent constructions")
    p.add_argument("--d", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("lattice", help="lattice geometry of a three-code case")
    p.add_argument("--case", choices=[c.value for c in CaseLabel], required=True)
    p.add_argument("--rep", type=_csv_ints, required=True)
    _add_common(p)
    return parser


# -- inputs -------------------------------------------------------------------------


def _spec_from_args(args) -> ConstructionSpec:
    try:
        if args.case:
            if args.d not in (None, 3) or args.seed_blocks or args.flips:
                raise CliError("--case fixes the construction; drop --d/--seed-blocks/--flips", EXIT_USAGE)
            return CaseLabel(args.case).spec
        if args.d is None or not args.seed_blocks or not args.flips:
            raise CliError("give --case, or all of --d, --seed-blocks and --flips", EXIT_USAGE)
        return ConstructionSpec(args.d, tuple(args.seed_blocks), tuple(args.flips))
    except LegalityError as exc:
        raise CliError(f"illegal construction: {exc}", EXIT_LEGALITY) from exc


def _codes_from_args(args, d: int) -> list[ClassicalCode]:
    if args.rep and args.alist:
        raise CliError("use either --rep or --alist, not both", EXIT_USAGE)
    if args.rep:
        if len(args.rep) != d:
            raise CliError(f"--rep lists {len(args.rep)} lengths for D={d}", EXIT_USAGE)
        try:
            return [repetition_code(L) for L in args.rep]
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from exc
    if args.alist:
        if len(args.alist) != d:
            raise CliError(f"{len(args.alist)} --alist files given for D={d}", EXIT_USAGE)
        try:
            return [read_alist(p) for p in args.alist]
        except (OSError, ValueError) as exc:
            raise CliError(str(exc), EXIT_USAGE) from exc
    raise CliError("classical codes are required: --rep L1,L2,... or --alist per sector", EXIT_USAGE)


def _read_matrix(path: str):
    try:
        text = Path(path).read_text()
        if path.endswith(".mtx"):
            return parse_mtx(text)
        return parse_alist(text).h
    except (OSError, ValueError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_USAGE) from exc


def _code_from_args(args) -> CssCode:
    if getattr(args, "hx", None) or getattr(args, "hz", None):
        if not (args.hx and args.hz):
            raise CliError("--hx and --hz must be given together", EXIT_USAGE)
        try:
            return CssCode(_read_matrix(args.hx), _read_matrix(args.hz))
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from exc
    spec = _spec_from_args(args)
    report = check_legality(spec)
    if not report.legal:
        raise CliError("illegal construction: " + "; ".join(report.reasons()), EXIT_LEGALITY)
    codes = _codes_from_args(args, spec.d)
    try:
        return assemble(spec, codes)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


# -- outputs -------------------------------------------------------------------------


def _header(argv: list[str], seed: int) -> dict:
    return {"tool_version": __version__, "command_line": shlex.join(["multicss", *argv]), "seed": seed}


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _dump_csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (" ".join(map(str, v)) if isinstance(v, list) else ("" if v is None else v)) for k, v in row.items()})
    return buf.getvalue()


def _emit(args, text: str, filename: str, out) -> None:
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / filename).write_text(text)
    else:
        out.write(text)


def _spec_doc(spec: ConstructionSpec | None) -> dict | None:
    if spec is None:
        return None
    roles = derive_roles(spec)
    return {
        "d": spec.d,
        "z_seed": list(spec.z_seed),
        "flip_counts": list(spec.flip_counts),
        "qubit_blocks": list(roles.qubit_blocks),
        "x_blocks": list(roles.x_blocks),
    }


# -- commands ----------------------------------------------------------------------------


def cmd_build(args, argv, out) -> int:
    code = _code_from_args(args)
    ext = args.format
    writer = emit_mtx if ext == "mtx" else emit_alist
    files = {"hx": f"hx.{ext}", "hz": f"hz.{ext}", "layout": "layout.json"}
    doc = {
        **_header(argv, args.seed),
        "spec": _spec_doc(code.spec),
        "n": code.n,
        "hx_shape": list(code.hx.shape),
        "hz_shape": list(code.hz.shape),
        "layout": code.layout_document(),
        "files": files,
    }
    if args.out:
        _emit(args, writer(code.hx), files["hx"], out)
        _emit(args, writer(code.hz), files["hz"], out)
        _emit(args, _dump_json(doc), files["layout"], out)
        out.write(_dump_json(doc))
    else:
        doc["hx"] = writer(code.hx)
        doc["hz"] = writer(code.hz)
        out.write(_dump_json(doc))
    return EXIT_OK


def cmd_metrics(args, argv, out) -> int:
    code = _code_from_args(args)
    if args.trials <= 0:
        raise CliError("--trials must be positive", EXIT_USAGE)
    if args.exact:
        k = compute_k(code)
        if k == 0:
            metrics = {"n": code.n, "k": 0, "d": None, "d_kind": "undefined", "d_x": None, "d_z": None, "estimator": None}
        else:
            try:
                res = distance_exact(code, args.budget)
            except DistanceBudgetError as exc:
                raise CliError(str(exc), EXIT_BUDGET) from exc
            metrics = {"n": code.n, "k": k, "d": res.d, "d_kind": "exact", "d_x": res.d_x, "d_z": res.d_z, "estimator": None}
    else:
        metrics = code_metrics(code, trials=args.trials, seed=args.seed, budget=args.budget).as_dict()
    if args.format == "csv":
        text = _dump_csv([metrics], ["n", "k", "d", "d_kind", "d_x", "d_z"])
        _emit(args, text, "metrics.csv", out)
    else:
        doc = {**_header(argv, args.seed), "spec": _spec_doc(code.spec), "metrics": metrics}
        _emit(args, _dump_json(doc), "metrics.json", out)
    return EXIT_OK


def cmd_validate(args, argv, out) -> int:
    code = _code_from_args(args)
    violation = css_violation(code)
    doc = {
        **_header(argv, args.seed),
        "n": code.n,
        "result": "pass" if violation is None else "fail",
        "valid": violation is None,
        "violation": None if violation is None else {"x_row": violation[0], "z_row": violation[1]},
    }
    _emit(args, _dump_json(doc), "validate.json", out)
    return EXIT_OK if violation is None else EXIT_INVALID


def cmd_scan(args, argv, out) -> int:
    try:
        cases = [CaseLabel(c) for c in args.cases]
    except ValueError as exc:
        raise CliError(f"unknown case in --cases: {exc}", EXIT_USAGE) from exc
    if args.n < 1 or args.trials <= 0:
        raise CliError("--n and --trials must be positive", EXIT_USAGE)
    rows = [r.as_dict() for r in scan_fixed_n(args.n, cases, args.trials, args.seed, args.budget)]
    if args.format == "csv":
        _emit(args, _dump_csv(rows, ["case", "L", "n", "k", "d", "d_kind"]), "scan.csv", out)
    else:
        doc = {**_header(argv, args.seed), "n": args.n, "trials": args.trials, "budget": args.budget, "rows": rows}
        _emit(args, _dump_json(doc), "scan.json", out)
    return EXIT_OK


def cmd_classify(args, argv, out) -> int:
    try:
        classes = classify(args.d)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    doc = {
        **_header(argv, args.seed),
        "d": args.d,
        "classes": [
            {
                "seed_size": c.seed_size,
                "flip_counts": list(c.flip_counts),
                "count": c.count,
                "n_specs": c.n_specs,
                "representative": _spec_doc(c.representative),
            }
            for c in classes
        ],
    }
    _emit(args, _dump_json(doc), "classify.json", out)
    return EXIT_OK


def cmd_lattice(args, argv, out) -> int:
    if len(args.rep) != 3 or min(args.rep) < 1:
        raise CliError("--rep needs three positive lengths", EXIT_USAGE)
    doc = {**_header(argv, args.seed), **lattice_geometry(args.case, tuple(args.rep))}
    _emit(args, _dump_json(doc), "lattice.json", out)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "metrics": cmd_metrics,
    "validate": cmd_validate,
    "scan": cmd_scan,
    "classify": cmd_classify,
    "lattice": cmd_lattice,
}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, argv, out)
    except CliError as exc:
        err.write(f"multicss {args.command}: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
