"""Command-line entry point.

Exit codes: 0 when every check passed, 1 when a verification ran and
failed, 2 for usage errors or malformed input.  All output is a Report,
emitted as canonical JSON (the machine contract) or a text summary.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import SymextError
from .jsonio import (
    dumps_canonical,
    extension_from_json,
    extension_to_json,
    polytope_from_json,
    polytope_to_json,
    sdp_from_json,
    superlinear_from_json,
    theorem1_from_json,
    vec_to_json,
)
from .scenarios import Report, SCENARIOS, report_emit, run_scenario

USAGE_ERROR = 2
CHECK_FAILED = 1


def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(report: Report, args) -> int:
    _write_output(report_emit(report, args.format), args.out)
    return 0 if report.passed else CHECK_FAILED


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _cmd_scenario(args) -> int:
    params = {}
    for key in ("n", "l", "max_dim", "max_side", "max_degree", "target"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    report = run_scenario(args.name, params)
    return _emit(report, args)


def _cmd_zoo_build(args) -> int:
    from .zoo import build
    entry = build(args.id, args.n, args.l, cap_override=args.cap_override)
    payload = {
        "id": entry.id, "params": entry.params,
        "polytope": polytope_to_json(entry.polytope),
        "metadata": entry.metadata,
    }
    _write_output(dumps_canonical(payload), args.out)
    return 0


def _cmd_polytope(args) -> int:
    from .polytope import certify, enumerate_vertices, facet_filter
    data = _load_json(args.infile)
    poly = polytope_from_json(data)
    report = Report(f"polytope-{args.action}", {"in": args.infile})
    if args.action == "certify":
        try:
            certify(poly, cross_enumerate=True)
            report.check("h-and-v-representations-match", True, "")
        except SymextError as exc:
            report.check("h-and-v-representations-match", False, str(exc))
    elif args.action == "facets":
        ff = facet_filter(poly.h)
        report.check("facet-count", True, str(len(ff.ineqs)))
        report.inputs["facets"] = len(ff.ineqs)
    elif args.action == "vertices":
        vs = enumerate_vertices(poly.h)
        payload = {"dim": vs.dim,
                   "vertices": [vec_to_json(v) for v in vs.vertices]}
        _write_output(dumps_canonical(payload), args.out)
        return 0
    return _emit(report, args)


def _cmd_extension(args) -> int:
    from .extension import (
        an_extension,
        certify_projection_equality,
        verify_symmetric_extension,
    )
    if args.action == "an":
        spec = an_extension(args.n)
        _write_output(dumps_canonical(extension_to_json(spec)), args.out)
        return 0
    spec = extension_from_json(_load_json(args.infile))
    report = Report(f"extension-{args.action}", {"in": args.infile})
    if args.action == "verify":
        vd = verify_symmetric_extension(spec)
        report.check("extension", vd.is_extension, "; ".join(vd.counterexamples))
        report.check("equivariance", vd.is_symmetric,
                     "; ".join(vd.counterexamples))
    else:  # project-check
        pv = certify_projection_equality(spec)
        report.check("projection-equality", pv.equal, "; ".join(pv.failures))
    return _emit(report, args)


def _cmd_certify(args) -> int:
    from .certificates import (
        verify_matching_bound,
        verify_theorem1,
        verify_theorem1_sdp,
    )
    if args.kind == "matching":
        verdict, checks, bound = verify_matching_bound(args.n, args.l)
        report = Report("certify-matching", {"n": args.n, "l": args.l})
        report.check("system-ok", verdict.system_ok, "")
        report.check("point-outside", verdict.membership == "outside", "")
        report.check("refutation", verdict.refutation, "")
        report.check("block-sums-match-closed-form",
                     checks.closed_form_agrees, "")
        report.bound(
            f"symmetric extension size for size-{args.l} matchings of "
            f"K_{args.n}", f">= {bound}", "claim:matching-stabilizer-bound")
        return _emit(report, args)
    report = Report(f"certify-{args.kind}", {"in": args.infile})
    if args.kind == "theorem1":
        verdict = verify_theorem1(theorem1_from_json(_load_json(args.infile)))
        report.check("system-ok", verdict.system_ok, "")
        report.check("refutation", verdict.refutation,
                     f"membership: {verdict.membership}")
    else:  # sdp
        verdict = verify_theorem1_sdp(sdp_from_json(_load_json(args.infile)))
        report.check("system-ok", verdict.system_ok,
                     f"{len(verdict.psd_failures)} psd failures")
        report.check("refutation", verdict.refutation,
                     f"membership: {verdict.membership}")
    return _emit(report, args)


def _cmd_superlinear(args) -> int:
    from .superlinear import (
        CERTIFICATE_BUILDERS,
        check_superlinear,
        cube_family_search,
    )
    if args.action == "check":
        cert = superlinear_from_json(_load_json(args.infile))
        report = Report("superlinear-check", {"in": args.infile})
    elif args.action == "demo":
        mapping = {"perm": "permutahedron", "card": "cardinality",
                   "stp": "spanning_tree", "birkhoff": "birkhoff"}
        if args.polytope not in mapping:
            raise SymextError(f"unknown demo polytope {args.polytope!r}")
        cert = CERTIFICATE_BUILDERS[mapping[args.polytope]](args.n)
        report = Report("superlinear-demo",
                        {"polytope": args.polytope, "n": args.n})
    else:  # cube-search
        result = cube_family_search(args.n)
        report = Report("superlinear-cube-search", {"n": args.n})
        report.check("max-family-size",
                     result.max_feasible_family_size == 2,
                     str(result.max_feasible_family_size))
        return _emit(report, args)
    verdict = check_superlinear(cert)
    report.check("conditions-met", verdict.conditions_met,
                 "; ".join(verdict.failures))
    for w in verdict.parity_warnings:
        report.check("parity-note", True, w)
    if verdict.conditions_met:
        report.bound("symmetric extension size", f">= {verdict.bound}",
                     "claim:superlinear-nk/2")
    return _emit(report, args)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="write the report to a file")
    common.add_argument("--format", choices=("json", "text"),
                        default=argparse.SUPPRESS)
    common.add_argument("--single-thread", action="store_true",
                        default=argparse.SUPPRESS,
                        help="force sequential execution (always on)")
    common.add_argument("--cap-override", type=int, default=argparse.SUPPRESS,
                        help="raise enumeration caps at your own risk")
    parser = argparse.ArgumentParser(
        prog="symext",
        description="exact verifiers for symmetric extended formulations",
        parents=[common])
    parser.set_defaults(out=None, format="json", single_thread=False,
                        cap_override=None)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sub(name: str, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    sc = add_sub("scenario", help="run a named reproduction scenario")
    sc.add_argument("name", choices=sorted(SCENARIOS))
    sc.add_argument("--n", type=int)
    sc.add_argument("--l", type=int)
    sc.add_argument("--max-dim", type=int, dest="max_dim")
    sc.add_argument("--max-side", type=int, dest="max_side")
    sc.add_argument("--max-degree", type=int, dest="max_degree")
    sc.add_argument("--target")
    sc.set_defaults(func=_cmd_scenario)

    zoo = sub.add_parser("zoo", help="polytope constructors")
    zoo_sub = zoo.add_subparsers(dest="action", required=True)
    zb = zoo_sub.add_parser("build")
    zb.add_argument("id")
    zb.add_argument("--n", type=int, required=True)
    zb.add_argument("--l", type=int)
    zb.set_defaults(func=_cmd_zoo_build)

    poly = sub.add_parser("polytope", help="certify, filter, enumerate")
    poly.add_argument("action", choices=("certify", "facets", "vertices"))
    poly.add_argument("--in", dest="infile", required=True)
    poly.set_defaults(func=_cmd_polytope)

    ext = sub.add_parser("extension", help="extension specifications")
    ext.add_argument("action", choices=("verify", "an", "project-check"))
    ext.add_argument("--in", dest="infile")
    ext.add_argument("--n", type=int)
    ext.set_defaults(func=_cmd_extension)

    cert = sub.add_parser("certify", help="lower-bound certificates")
    cert.add_argument("kind", choices=("theorem1", "matching", "sdp"))
    cert.add_argument("--in", dest="infile")
    cert.add_argument("--n", type=int)
    cert.add_argument("--l", type=int)
    cert.set_defaults(func=_cmd_certify)

    sup = sub.add_parser("superlinear", help="quadratic lower bounds")
    sup.add_argument("action", choices=("check", "demo", "cube-search"))
    sup.add_argument("--in", dest="infile")
    sup.add_argument("--polytope")
    sup.add_argument("--n", type=int)
    sup.set_defaults(func=_cmd_superlinear)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SymextError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        sys.stderr.write(f"malformed input: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
