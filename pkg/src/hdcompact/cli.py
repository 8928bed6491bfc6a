"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 a
verification report did not pass.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

import numpy as np

from . import decompositions as dec
from .boundary_chart import chart_decompose, chart_reconstruct, curve_limit, invert_in_chart
from .documents import DocumentError, MatrixDocument, chart_from_dict, chart_to_dict, dumps
from .exceptions import (
    IllConditionedError,
    SingularBlockError,
    UnreliableFitError,
)
from .face_lattice import enumerate_faces
from .root_datum import _coroot_exact, build_root_datum
from .verification import (
    AxiomReport,
    b_transitivity_report,
    bracket_report,
    curve_limit_report,
    haar_report,
    inversion_diffeo_check,
    isotropy_vanishing_check,
    minimality_report,
    vanishing_exponent_table,
)

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4
NUMERIC_ERRORS = (IllConditionedError, SingularBlockError, UnreliableFitError, np.linalg.LinAlgError)


class InputError(Exception):
    pass


class NumericFailure(Exception):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def _read_json(stream) -> dict:
    try:
        return json.load(stream)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _read_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return _read_json(fh)
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _parse_subset(text: str) -> list[int]:
    text = text.strip().strip("{}[]")
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise InputError(f"invalid subset {text!r}") from exc


def cmd_roots(args) -> int:
    datum = build_root_datum(args.n)
    coroots = [[str(x) for x in _coroot_exact(args.n, k)] for k in datum.nodes]
    out = {
        "n": datum.n,
        "nodes": list(datum.nodes),
        "positive_roots": [list(r) for r in datum.positive_roots],
        "coroots": coroots,
        "sigma": list(datum.sigma),
    }
    if args.json:
        _emit(out)
    else:
        print(f"SL({datum.n}): nodes {list(datum.nodes)}")
        print("positive roots: " + ", ".join(f"e{i}-e{j}" for i, j in datum.positive_roots))
        for k, c in zip(datum.nodes, coroots):
            print(f"coroot H{k}: diag({', '.join(c)})")
        print(f"sigma: {list(datum.sigma)}")
    return EXIT_OK


def _residual(g, rec) -> float:
    return float(np.linalg.norm(rec - g) / max(1.0, np.linalg.norm(g)))


def cmd_decompose(args) -> int:
    if args.mode == "horospherical" and args.subset is None:
        raise InputError("--mode horospherical requires --subset")
    doc = MatrixDocument.from_dict(_read_json(sys.stdin), require_sl=args.mode != "polar")
    g = doc.rows
    if args.mode == "kak":
        f = dec.cartan_kak(g)
        out = {"k1": f.k1, "a": f.a, "k2": f.k2, "unique": f.unique}
        rec = f.reconstruct()
    elif args.mode == "iwasawa":
        f = dec.iwasawa_kan(g)
        out = {"k": f.k, "a": f.a, "n": f.n_upper}
        rec = f.reconstruct()
    elif args.mode == "polar":
        q, p = dec.polar(g)
        out = {"q": q, "p": p}
        rec = q @ p
    else:
        f = dec.horospherical(g, _parse_subset(args.subset))
        out = {"S": sorted(f.S), "k": f.k, "m": f.m, "a_S": f.a_S, "n_S": f.n_S}
        rec = f.reconstruct()
    out["residual"] = _residual(g, rec)
    _emit(out)
    if out["residual"] > args.tol:
        raise NumericFailure(f"reconstruction residual {out['residual']:.3g} exceeds {args.tol:g}")
    return EXIT_OK


def cmd_chart(args) -> int:
    data = _read_json(sys.stdin)
    if args.action == "decompose":
        g = MatrixDocument.from_dict(data, require_sl=True).rows
        _emit(chart_to_dict(chart_decompose(g, args.eps_break)))
    elif args.action == "reconstruct":
        p = chart_from_dict(data)
        _emit({"n": p.n, "rows": chart_reconstruct(p), "boundary": p.is_boundary})
    else:
        _emit(chart_to_dict(invert_in_chart(chart_from_dict(data))))
    return EXIT_OK


def cmd_limit(args) -> int:
    k1 = MatrixDocument.from_dict(_read_file(args.k1)).rows
    k2 = MatrixDocument.from_dict(_read_file(args.k2)).rows
    hdata = _read_file(args.H)
    entries = hdata.get("entries", hdata.get("diag")) if isinstance(hdata, dict) else hdata
    if entries is None:
        raise InputError("H document needs an 'entries' array")
    lim = curve_limit(k1, np.asarray(entries, dtype=float), k2, tol=args.tol)
    _emit({
        "face": lim.face.to_dict(),
        "left_flag": {"basis": lim.left_flag.basis, "breaks": list(lim.left_flag.breaks)},
        "right_flag": {"basis": lim.right_flag.basis, "breaks": list(lim.right_flag.breaks)},
        "fiber_representative": lim.fiber_representative,
    })
    return EXIT_OK


def cmd_faces(args) -> int:
    faces = enumerate_faces(args.n)
    if args.json:
        _emit([f.to_dict() for f in faces])
    else:
        print(f"{'S':<16}{'blocks':<16}{'codim':>6}{'flag':>6}{'levi':>6}{'dim':>6}")
        for f in faces:
            print(f"{str(sorted(f.S)):<16}{str(list(f.block_sizes)):<16}"
                  f"{f.codim:>6}{f.dim_flag:>6}{f.dim_levi:>6}{f.dim_face:>6}")
    return EXIT_OK


def _bnormal(n: int, seed: int) -> AxiomReport:
    worst = np.inf
    details = []
    for size in range(n - 1):
        for S in combinations(range(1, n), size):
            rep = isotropy_vanishing_check(n, S, seed=seed)
            worst = min(worst, rep.worst_case)
            details += [{"S": list(S), **d} for d in rep.details]
    return AxiomReport.from_worst("D2", worst, 1.0, "min", details)


def cmd_verify(args) -> int:
    n, seed = args.n, args.seed
    if n < 2 and args.check not in ("brackets", "inversion"):
        raise InputError("verification needs n >= 2")
    if args.check == "exponents":
        _emit(vanishing_exponent_table(n))
        return EXIT_OK
    if args.check == "haar":
        rep = haar_report(n, seed=seed)
    elif args.check == "inversion":
        rep = inversion_diffeo_check(n, samples=args.samples or 500, seed=seed)
    elif args.check == "bnormal":
        rep = _bnormal(n, seed)
    elif args.check == "rank":
        rep = b_transitivity_report(n, samples=args.samples or 100, seed=seed)
    elif args.check == "minimality":
        rep = minimality_report(n, samples=args.samples or 20, seed=seed)
    elif args.check == "limits":
        rep = curve_limit_report(n, samples=args.samples or 100, seed=seed)
    else:
        rep = bracket_report(n)
    if args.json:
        _emit(rep.to_dict())
    else:
        status = "PASS" if rep.passed else "FAIL"
        cmp = "<=" if rep.sense == "max" else ">="
        print(f"{rep.axiom} n={n}: {status} worst_case={rep.worst_case:.6g} {cmp} {rep.tolerance:g}")
    return EXIT_OK if rep.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hdcompact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="root datum of SL(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("decompose", help="factor a matrix read from stdin")
    p.add_argument("--mode", choices=["kak", "iwasawa", "polar", "horospherical"], required=True)
    p.add_argument("--subset", help="node subset S, e.g. '1,3' (horospherical only)")
    p.add_argument("--tol", type=float, default=1e-8, help="maximal reconstruction residual")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("chart", help="boundary chart operations on stdin documents")
    p.add_argument("action", choices=["decompose", "reconstruct", "invert"])
    p.add_argument("--eps-break", type=float, default=1e-3)
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("limit", help="boundary limit of k1 exp(tH) k2")
    p.add_argument("--k1", required=True)
    p.add_argument("--H", required=True)
    p.add_argument("--k2", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("faces", help="boundary faces and their dimensions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("verify", help="run a numerical certification")
    p.add_argument("check", choices=["haar", "inversion", "bnormal", "rank", "minimality",
                                      "brackets", "limits", "exponents"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, DocumentError, ValueError, TypeError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
