"""Command-line front end.

Exit status: 0 ok, 1 domain error (the error class is reported), 2 usage or
payload-parse error.  Payloads are inline JSON, ``@path``, or a path to a
JSON file.  Output is a JSON ``CommandResult``; ``--format table`` renders
the same payload as aligned text.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import jsonschema

from . import azumaya as az
from . import quadform as qf
from .basefield import parse_field
from .errors import DomainError

BUDGET_ENV = "LOOPTORSORS_BUDGET"
VARIABLE_NOTE = "slot subsets index the Laurent variables t1..tn"
ACTION_NOTE = "GL_n(Z) acts on the n Laurent variables by g B g^T"


class UsageError(Exception):
    pass


def _schema(name: str) -> dict:
    return json.loads(resources.files("looptorsors.schemas").joinpath(name).read_text())


def _load(arg: str):
    if arg.startswith("@"):
        path = arg[1:]
    elif os.path.isfile(arg):
        path = arg
    else:
        path = None
    try:
        if path is not None:
            with open(path) as fh:
                return json.load(fh)
        return json.loads(arg)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON payload {arg!r}: {exc}") from exc


def _validate(obj, *schemas: str) -> None:
    errors = []
    for name in schemas:
        try:
            jsonschema.validate(obj, _schema(name))
            return
        except jsonschema.ValidationError as exc:
            errors.append(f"{name}: {exc.message}")
    raise UsageError("payload rejected: " + "; ".join(errors))


def _form(arg: str, args) -> qf.RDiagonalForm:
    obj = _load(arg)
    _validate(obj, "form.schema.json")
    field = parse_field(args.field) if args.field else None
    return qf.form_from_json(obj, field, args.n)


def _matrix(arg: str) -> az.BrauerMatrix:
    obj = _load(arg)
    _validate(obj, "matrix.schema.json", "descriptor.schema.json")
    return az.matrix_from_json(obj)


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, diagnostics)


def cmd_qf_normalize(args):
    lnf = qf.loop_normal_form(_form(args.form, args))
    return lnf.to_json(), [VARIABLE_NOTE]


def cmd_qf_isometric(args):
    a, b = _form(args.a, args), _form(args.b, args)
    return {"isometric": qf.is_isometric_r(a, b)}, []


def cmd_qf_witt(args):
    return qf.witt_decompose_f(_form(args.form, args)).to_json(), []


def cmd_qf_residue(args):
    q = _form(args.form, args)
    first, second = qf.second_residue(q, args.at)
    return {
        "at": args.at,
        "first": first.to_json(),
        "second": second.to_json(),
        "unramified": qf.witt_decompose_f(second).kernel.dim == 0,
    }, []


def cmd_qf_count(args):
    field = parse_field(args.field)
    payload = {
        "field": field.text,
        "n": args.n,
        "dim": args.dim,
        "count": qf.count_loop_classes(field, args.n, args.dim, jobs=args.jobs),
    }
    if args.list:
        payload["classes"] = [f.to_json() for f in qf.enumerate_loop_classes(field, args.n, args.dim)]
    return payload, [VARIABLE_NOTE]


def cmd_az_matrix(args):
    obj = _load(args.descriptor)
    _validate(obj, "descriptor.schema.json")
    t = az.ToralDescriptor.from_json(obj)
    return {"descriptor": t.to_json(), "matrix": az.brauer_matrix(t).to_json()}, []


def cmd_az_normalize(args):
    b = _matrix(args.matrix)
    nf, witness = az.skew_normal_form(b)
    payload = nf.to_json()
    payload["matrix"] = nf.matrix().to_json()
    payload["witness"] = witness
    return payload, [ACTION_NOTE]


def cmd_az_division(args):
    b = _matrix(args.payload)
    index, s0 = az.index_and_split(b, args.degree)
    return {"degree": args.degree, "index": index, "s0": s0, "division": s0 == 1}, []


def cmd_az_enumerate(args):
    if args.degree < 1 or args.vars < 0:
        raise UsageError("--degree must be >= 1 and --vars >= 0")
    ms = range(args.vars // 2 + 1)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            parts = list(pool.map(az._toral_with_m, *zip(*[(args.degree, args.vars, m) for m in ms])))
    else:
        parts = [az._toral_with_m(args.degree, args.vars, m) for m in ms]
    descriptors = [t.to_json() for part in parts for t in part]
    return {"degree": args.degree, "vars": args.vars, "count": len(descriptors), "descriptors": descriptors}, [
        "orbits are not merged; use 'az equivalent' to compare classes"
    ]


def cmd_az_equivalent(args):
    a, b = _matrix(args.a), _matrix(args.b)
    budget = args.budget
    if budget is None:
        try:
            budget = int(os.environ.get(BUDGET_ENV, az.DEFAULT_BUDGET))
        except ValueError as exc:
            raise UsageError(f"{BUDGET_ENV} must be an integer") from exc
    v = az.orbit_equivalent(a, b, budget)
    notes = [ACTION_NOTE]
    if v.verdict == "unknown":
        notes.append("search budget exhausted with equal invariants")
    return v.to_json(), notes


def cmd_az_tensor(args):
    return {"matrix": az.tensor(_matrix(args.a), _matrix(args.b)).to_json()}, []


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    formopts = argparse.ArgumentParser(add_help=False)
    formopts.add_argument("--field", help="Q, R or Fq:<q> (for bare entry lists)")
    formopts.add_argument("--n", type=int, help="number of Laurent variables")

    parser = argparse.ArgumentParser(prog="looptorsors", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="group", required=True)

    qfp = top.add_parser("qf", help="quadratic forms over Laurent polynomial rings")
    q = qfp.add_subparsers(dest="cmd", required=True)
    p = q.add_parser("normalize", parents=[common, formopts])
    p.add_argument("form")
    p.set_defaults(func=cmd_qf_normalize)
    p = q.add_parser("isometric", parents=[common, formopts])
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_qf_isometric)
    p = q.add_parser("witt", parents=[common, formopts])
    p.add_argument("form")
    p.set_defaults(func=cmd_qf_witt)
    p = q.add_parser("residue", parents=[common, formopts])
    p.add_argument("form")
    p.add_argument("--at", type=int, required=True)
    p.set_defaults(func=cmd_qf_residue)
    p = q.add_parser("count", parents=[common])
    p.add_argument("--field", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--list", action="store_true", help="also list one normal form per class")
    p.set_defaults(func=cmd_qf_count)

    azp = top.add_parser("az", help="toral Azumaya algebras and Brauer matrices")
    a = azp.add_subparsers(dest="cmd", required=True)
    p = a.add_parser("matrix", parents=[common])
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_az_matrix)
    p = a.add_parser("normalize", parents=[common])
    p.add_argument("matrix")
    p.set_defaults(func=cmd_az_normalize)
    p = a.add_parser("division", parents=[common])
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("payload", help="descriptor or Brauer matrix")
    p.set_defaults(func=cmd_az_division)
    p = a.add_parser("enumerate", parents=[common])
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_az_enumerate)
    p = a.add_parser("equivalent", parents=[common])
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--budget", type=int, default=None, help=f"default from ${BUDGET_ENV} or 10^5")
    p.set_defaults(func=cmd_az_equivalent)
    p = a.add_parser("tensor", parents=[common])
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_az_tensor)
    return parser


def _table(result: dict) -> str:
    lines = [f"status: {result['status']}"]

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}{k}.", obj[k])
        elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
            for i, x in enumerate(obj):
                walk(f"{prefix}{i}.", x)
        else:
            val = " ".join(map(str, obj)) if isinstance(obj, list) else obj
            lines.append(f"{prefix[:-1]:<32} {val}")

    walk("", result.get("payload", {}))
    if "error" in result:
        lines.append(f"error: {result['error']}: {result['message']}")
    for d in result.get("diagnostics", []):
        lines.append(f"note: {d}")
    return "\n".join(lines)


def run(argv) -> tuple[int, str]:
    """Execute one command; returns ``(exit status, serialized result)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), ""
    try:
        payload, notes = args.func(args)
        result = {"status": "ok", "payload": payload, "diagnostics": notes}
        code = 0
    except UsageError as exc:
        print(f"looptorsors: {exc}", file=sys.stderr)
        return 2, ""
    except DomainError as exc:
        result = {"status": "error", "error": type(exc).__name__, "message": str(exc), "diagnostics": []}
        code = 1
    if args.format == "table":
        return code, _table(result)
    return code, json.dumps(result, sort_keys=True)


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
