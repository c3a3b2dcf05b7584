"""Command-line interface: one batch command per process.

Exit codes: 0 all checks pass, 1 a mathematical property failed (the report
carries witnesses), 2 input or validation error, 3 resource budget exceeded.
The environment variable GAMMA_BUDGET overrides the default enumeration cap.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from pathlib import Path

from .errors import InputError, ResourceError, StructuralError
from . import documents as docs
from . import reports
from .homology import cone, heart_check, homology, truncate
from .ideals import check_basis_laws, spec
from .localize import canonical_map, close_multiplicative, localize
from .modules import group_completion, localize_module, tensor
from .shadow import BinaryRing, shadow_search
from .sheaves import check_gluing, global_sections, minimal_basic_cover, tilde
from .structures import (
    build_z6_z4modes,
    check_axioms,
    check_axioms_sampled,
    generate_standard_family,
)

DEFAULT_BUDGET = 1_000_000


def _parse_elements(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise InputError("element list %r must be comma-separated integers" % text) from None


def _validated_structure(path):
    """Structural plus semantic validation: the additive monoid laws must
    hold for every command except check-axioms, whose job is to report them."""
    T = docs.load_structure(path)
    verdict = check_axioms(T).verdicts["i"]
    if not verdict.passed:
        raise InputError(
            "%s: addition is not a commutative monoid: %s"
            % (path, verdict.witness.as_dict()))
    return T


def _digest(values) -> str:
    return hashlib.sha256(repr(tuple(values)).encode()).hexdigest()[:16]


def _relative_ref(out_path: Path, target: Path) -> str:
    try:
        return os.path.relpath(target, out_path.parent)
    except ValueError:
        return str(target)


# --- command handlers: each returns (result, exit_code, input_paths) ---------


def cmd_check_axioms(args):
    doc = docs._read_json(args.document)
    if docs.is_family_doc(doc):
        family, window, gammas = docs.load_family(args.document)
        if args.window is not None:
            window = args.window
        report = check_axioms_sampled(
            family, window, sample_budget=args.budget, gammas=gammas, seed=args.seed)
        result = {"kind": "formula-family", "family": family.name,
                  "window": window, **report.as_dict()}
    elif docs.is_structure_doc(doc):
        T = docs.load_structure(args.document)
        report = check_axioms(T)
        result = {"kind": "structure", "carrier": T.carrier_size, **report.as_dict()}
    else:
        raise InputError("%s: neither a structure nor a formula-family document"
                         % args.document)
    return result, (0 if report.all_passed else 1), [args.document]


def cmd_spec(args):
    T = _validated_structure(args.structure)
    sg = spec(T, carrier_bound=args.max_spec_carrier)
    result = sg.as_dict()
    code = 0
    if args.list_ideals:
        result["ideals"] = [list(i) for i in sg.ideals]
    if args.check_basis:
        basis = check_basis_laws(T, sg)
        result["basis_laws"] = basis.as_dict()
        if not basis.all_passed:
            code = 1
    return result, code, [args.structure]


def cmd_localize(args):
    T = _validated_structure(args.structure)
    S = close_multiplicative(T, _parse_elements(args.seed))
    L = localize(T, S)
    result = L.as_dict()
    result["class_sizes"] = [len(m) for m in L.class_members]
    result["invertibility"] = {
        L.fraction_label(c): (list(L.class_invertible(c)) if L.class_invertible(c) else None)
        for c in range(L.class_count)
    }
    code = 1 if L.add_defects else 0
    try:
        ell = canonical_map(T, L)
        result["canonical_map"] = ell.as_dict()
    except StructuralError as exc:
        result["canonical_map"] = {"failed": str(exc)}
        code = 1
    if not args.diagnostics:
        result.pop("diagnostic_log", None)
    return result, code, [args.structure]


def cmd_localize_module(args):
    T = _validated_structure(args.structure)
    M, _ = docs.load_module(args.module, expected_structure=T)
    S = close_multiplicative(T, _parse_elements(args.seed))
    lm = localize_module(T, S, M)
    result = lm.as_dict()
    code = 1 if lm.defects else 0
    if args.output:
        out = Path(args.output)
        ref = _relative_ref(out, Path(args.structure).resolve())
        out.write_text(docs.canonical_json(docs.module_to_doc(lm.module, ref)),
                       encoding="utf-8")
        result["written"] = str(out)
    return result, code, [args.structure, args.module]


def cmd_tensor(args):
    T = _validated_structure(args.structure)
    M, _ = docs.load_module(args.module_m, expected_structure=T)
    N, _ = docs.load_module(args.module_n, expected_structure=T)
    TR = tensor(M, N)
    result = TR.as_dict()
    if args.output:
        out = Path(args.output)
        ref = _relative_ref(out, Path(args.structure).resolve())
        out.write_text(docs.canonical_json(docs.module_to_doc(TR.module, ref)),
                       encoding="utf-8")
        result["written"] = str(out)
    return result, 0, [args.structure, args.module_m, args.module_n]


def cmd_complete(args):
    M, over_path = docs.load_module(args.module)
    gp = group_completion(M)
    result = gp.as_dict()
    if args.output:
        out = Path(args.output)
        ref = _relative_ref(out, over_path)
        out.write_text(docs.canonical_json(docs.module_to_doc(gp.module, ref)),
                       encoding="utf-8")
        result["written"] = str(out)
    return result, 0, [args.module]


def cmd_sheaf_check(args):
    T = _validated_structure(args.structure)
    M, _ = docs.load_module(args.module, expected_structure=T)
    P = tilde(T, M)
    result = {"presheaf": P.as_dict()}
    result["restriction_digests"] = {
        "%d->%d" % (a, b): (_digest(r.morphism.values) if r.morphism else None)
        for (a, b), r in sorted(P.restrictions.items())
    }
    gs = global_sections(P, budget=args.budget)
    result["global_sections"] = gs.as_dict()
    cover = _parse_elements(args.cover) if args.cover else minimal_basic_cover(P)
    code = 0 if P.defect_free and gs.comparison_is_bijective else 1
    if cover:
        glue = check_gluing(P, cover, budget=args.budget)
        result["gluing"] = glue.as_dict()
        if not glue.passed:
            code = 1
    return result, code, [args.structure, args.module]


def cmd_homology(args):
    T = _validated_structure(args.structure)
    K = docs.load_complex(args.complex, expected_structure=T)
    inputs = [args.structure, args.complex]
    bad = K.verify()
    if bad is not None:
        return {"complex_invalid": bad}, 1, inputs
    result = {}
    if args.cone:
        f = docs.load_chain_map(args.cone, source=K)
        bad = f.verify()
        if bad is not None:
            return {"chain_map_invalid": bad}, 1, inputs + [args.cone]
        K = cone(f)
        inputs.append(args.cone)
        result["cone_of"] = str(args.cone)
    if args.truncate:
        K = truncate(K, args.truncate)
        result["truncated"] = args.truncate
    degrees = [args.degree] if args.degree is not None else K.degrees()
    result["homology"] = {
        str(n): homology(K, n).as_dict() for n in degrees
    }
    result["heart"] = heart_check(K)
    return result, 0, inputs


def _load_extra_rings(path) -> list[BinaryRing]:
    doc = docs._read_json(path)
    rings = doc.get("rings")
    if not isinstance(rings, list):
        raise InputError("%s: expected {'rings': [...]}" % path)
    out = []
    for r in rings:
        try:
            out.append(BinaryRing(
                name=r["name"], carrier_size=r["carrier"],
                add=tuple(tuple(x) for x in r["add"]),
                mul=tuple(tuple(x) for x in r["mul"]),
                one=r["one"]))
        except (KeyError, TypeError) as exc:
            raise InputError("%s: malformed ring entry: %s" % (path, exc)) from None
    return out


def cmd_shadow_search(args):
    T = _validated_structure(args.structure)
    S = close_multiplicative(T, _parse_elements(args.seed))
    extra = _load_extra_rings(args.extra_rings) if args.extra_rings else None
    report = shadow_search(
        T, S, max_ring_size=args.max_ring, semiring=args.semiring,
        extra_rings=extra, candidate_budget=args.budget)
    inputs = [args.structure] + ([args.extra_rings] if args.extra_rings else [])
    return report.as_dict(), (0 if report.complete else 3), inputs


def cmd_generate(args):
    if args.family == "standard":
        if args.modulus is None or args.gammas is None:
            raise InputError("generate standard needs --modulus and --gammas")
        T = generate_standard_family(args.modulus, _parse_elements(args.gammas))
        doc = docs.structure_to_doc(T)
    elif args.family == "z6z4":
        doc = docs.structure_to_doc(build_z6_z4modes())
    elif args.family == "nat-window":
        if args.window is None:
            raise InputError("generate nat-window needs --window")
        gammas = _parse_elements(args.gammas) if args.gammas else None
        doc = docs.family_to_doc("pairwise-products-plus-mode", args.window, gammas)
    else:
        raise InputError("unknown family %r" % args.family)
    text = docs.canonical_json(doc)
    result = {"family": args.family}
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        result["written"] = str(args.output)
        inputs = [args.output]
    else:
        sys.stdout.write(text)
        inputs = []
    return result, 0, inputs


# --- wiring -------------------------------------------------------------------


def _summary_lines(command: str, result: dict, code: int) -> list[str]:
    lines = ["%s: %s" % (command, "ok" if code == 0 else "FAILED (exit %d)" % code)]
    if "error" in result:
        lines.append("  %s" % result["error"])
        return lines
    if command == "check-axioms":
        for key, info in sorted(result.get("axioms", {}).items()):
            mark = "pass" if info["passed"] else "FAIL"
            lines.append("  axiom (%s) %s: %s" % (key, info["name"], mark))
            if not info["passed"]:
                lines.append("    witness: %s" % (info.get("witness"),))
    elif command == "spec":
        lines.append("  primes: %s" % (result.get("primes"),))
        if "basis_laws" in result:
            lines.append("  basis laws pass: %s" % result["basis_laws"]["all_passed"])
    elif command == "localize":
        lines.append("  classes: %d, raw_equals_closure: %s"
                     % (result["class_count"], result["raw_equals_closure"]))
        lines.append("  fractions: %s" % (result["fractions"],))
        if result.get("add_defects"):
            lines.append("  addition defects: %d" % len(result["add_defects"]))
    elif command in ("tensor", "complete", "localize-module"):
        for k in ("size", "invariant_factors", "unit_is_iso", "written"):
            if k in result:
                lines.append("  %s: %s" % (k, result[k]))
    elif command == "sheaf-check":
        lines.append("  sections: %s"
                     % [s["size"] for s in result["presheaf"]["sections"]])
        lines.append("  global sections iso: %s"
                     % result["global_sections"]["isomorphic_to_completed_module"])
        if "gluing" in result:
            lines.append("  gluing: exists=%s unique=%s"
                         % (result["gluing"]["exists"], result["gluing"]["unique"]))
    elif command == "homology":
        for n, h in sorted(result.get("homology", {}).items(), key=lambda kv: int(kv[0])):
            lines.append("  |H_%s| = %d" % (n, h["size"]))
        lines.append("  heart: %s" % result.get("heart", {}).get("verdict"))
    elif command == "shadow-search":
        lines.append("  candidates: %d, satisfying: %d, complete: %s"
                     % (result["candidates_total"], len(result["satisfying"]),
                        result["complete"]))
        lines.append("  rejections: %s" % (result["rejection_counts"],))
    elif command == "generate" and "written" in result:
        lines.append("  wrote %s" % result["written"])
    return lines


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    # registered on the top-level parser with real defaults and on every
    # subparser with SUPPRESS, so the flags work in either position without
    # the subparser default clobbering an already-parsed value
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("text", "json"),
                   default=d if suppress else "text",
                   help="stdout format (default text)")
    p.add_argument("--out", default=d,
                   help="write the JSON report to this file")
    p.add_argument("--figures", default=d,
                   help="render figures and CSV tables into this directory")
    p.add_argument("--budget", type=int,
                   default=d if suppress else int(
                       os.environ.get("GAMMA_BUDGET", DEFAULT_BUDGET)),
                   help="enumeration budget (env GAMMA_BUDGET)")
    p.add_argument("--seed-rng", dest="seed", type=int,
                   default=d if suppress else 0,
                   help="determinism seed for sampled modes only")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="terngamma",
        description="finite computer algebra for commutative ternary "
                    "Gamma-semirings")
    _add_common(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=lambda **kw: argparse.ArgumentParser(
                               parents=[common], **kw))

    s = sub.add_parser("check-axioms", help="verify or refute the six structure laws")
    s.add_argument("document")
    s.add_argument("--window", type=int, help="override the scan window for families")
    s.set_defaults(func=cmd_check_axioms)

    s = sub.add_parser("spec", help="enumerate the prime spectrum")
    s.add_argument("structure")
    s.add_argument("--list-ideals", action="store_true")
    s.add_argument("--check-basis", action="store_true")
    s.add_argument("--max-spec-carrier", type=int, default=16)
    s.set_defaults(func=cmd_spec)

    s = sub.add_parser("localize", help="build S^-1 T from a seed")
    s.add_argument("structure")
    s.add_argument("--seed", required=True, help="comma-separated seed elements")
    s.add_argument("--diagnostics", action="store_true")
    s.set_defaults(func=cmd_localize)

    s = sub.add_parser("localize-module", help="S^-1 M by scalar extension")
    s.add_argument("structure")
    s.add_argument("module")
    s.add_argument("--seed", required=True)
    s.add_argument("-o", "--output", help="write the localized module document")
    s.set_defaults(func=cmd_localize_module)

    s = sub.add_parser("tensor", help="ternary tensor product of two modules")
    s.add_argument("structure")
    s.add_argument("module_m")
    s.add_argument("module_n")
    s.add_argument("-o", "--output", help="write the tensor module document")
    s.set_defaults(func=cmd_tensor)

    s = sub.add_parser("complete", help="Grothendieck group completion")
    s.add_argument("module")
    s.add_argument("-o", "--output", help="write the completed module document")
    s.set_defaults(func=cmd_complete)

    s = sub.add_parser("sheaf-check", help="tilde presheaf, sections, gluing")
    s.add_argument("structure")
    s.add_argument("module")
    s.add_argument("--cover", help="comma-separated basic-open generators")
    s.set_defaults(func=cmd_sheaf_check)

    s = sub.add_parser("homology", help="homology of a bounded complex")
    s.add_argument("structure")
    s.add_argument("complex")
    s.add_argument("--truncate", choices=("le0", "ge0"))
    s.add_argument("--cone", help="chain map document; compute its cone first")
    s.add_argument("--degree", type=int)
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("shadow-search", help="binary-shadow obstruction search")
    s.add_argument("structure")
    s.add_argument("--seed", required=True)
    s.add_argument("--max-ring", type=int, default=12)
    s.add_argument("--semiring", action="store_true",
                   help="use the additive-slack witness form")
    s.add_argument("--extra-rings", help="JSON file with additional ring tables")
    s.set_defaults(func=cmd_shadow_search)

    s = sub.add_parser("generate", help="write fixture documents")
    s.add_argument("family", choices=("standard", "z6z4", "nat-window"))
    s.add_argument("--modulus", type=int)
    s.add_argument("--gammas", help="comma-separated residues")
    s.add_argument("--window", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_generate)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    try:
        if args.budget < 1:
            raise InputError("budget must be positive")
        result, code, inputs = args.func(args)
    except InputError as exc:
        result, code, inputs = {"error": str(exc)}, 2, []
    except ResourceError as exc:
        result, code, inputs = {"error": str(exc), "required": exc.required}, 3, []
    except StructuralError as exc:
        result, code, inputs = {"error": str(exc)}, 1, []
    timing_ms = int((time.monotonic() - start) * 1000)
    existing = [p for p in inputs if Path(p).exists()]
    report = reports.build_report(
        args.command, existing, result, code,
        budgets={"budget": args.budget}, timing_ms=timing_ms)
    if args.figures and code in (0, 1):
        from .plots import render_figures

        try:
            report["figures"] = render_figures(args.command, result, args.figures)
        except Exception as exc:  # rendering must never mask the verdict
            report["figures_error"] = str(exc)
    if args.out:
        Path(args.out).write_text(reports.report_to_json(report), encoding="utf-8")
    if args.format == "json":
        sys.stdout.write(reports.report_to_json(report))
    else:
        for line in _summary_lines(args.command, result, code):
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
