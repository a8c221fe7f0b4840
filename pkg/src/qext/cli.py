"""Command-line front end.

Commands: build, resolve, ext, ainf, dualext, koszul, box, family,
family-check.  Presentations are read from --in or stdin in the line format
of qext.presentations; results are machine-readable JSON on stdout (or
--out), or human tables with --pretty.  Identical inputs and configuration
produce byte-identical JSON.  The environment variable QEXT_FIELD overrides
the --field option.

Exit codes: 0 success (verification mismatches are data, not failures),
1 parse or validation error, 2 computational precondition (cutoff/window).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .an_family import FamilyParams, build_family, family_check
from .borel import compute_box, decompose_all, morita_multiplicities
from .errors import CutoffExceeded, QextError, WindowExceeded
from .ext import ExtTable, verify_dualext_iso
from .linalg import field_from_spec
from .merkulov import build_end_dg, make_splitting, transfer
from .modules import canonical_module, loewy_layers
from .presentations import (build_algebra, detect_dual_extension,
                            dual_extension, format_presentation,
                            parse_presentation)
from .resolutions import koszul_report, minimal_resolution


def _scalar(x):
    if isinstance(x, Fraction):
        return str(x)
    return x


def _dump(obj, pretty=False):
    def default(x):
        if isinstance(x, Fraction):
            return str(x)
        raise TypeError(f"not serializable: {x!r}")
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2, default=default) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=default) + "\n"


def _read_presentation(args):
    if args.infile:
        with open(args.infile, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    return detect_dual_extension(parse_presentation(text))


def _field(args):
    spec = os.environ.get("QEXT_FIELD") or args.field
    return field_from_spec(spec)


def _emit(args, payload):
    out = payload if isinstance(payload, str) else _dump(payload, pretty=False)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _validate_config(cutoff, max_arity):
    if max_arity is not None and cutoff is not None and cutoff < max_arity + 2:
        raise CutoffExceeded(
            f"cutoff {cutoff} must be at least max arity + 2 = {max_arity + 2}")


# -- commands -----------------------------------------------------------------

def cmd_build(args):
    alg = build_algebra(_read_presentation(args), _field(args))
    if args.pretty:
        lines = [f"algebra {alg.pres.name}: dim {alg.dim} over {alg.field!r}"]
        for i, p in enumerate(alg.basis):
            lines.append(f"  [{i}] {p!r}: {alg.source[i]} -> {alg.target[i]}"
                         f" deg {alg.degree[i]}")
        for v in alg.pres.quiver.vertices:
            proj = canonical_module(alg, "projective", v)
            lines.append(f"P({v}) dim vector {proj.dim_vector()} "
                         f"loewy {loewy_layers(proj)}")
        _emit(args, "\n".join(lines) + "\n")
        return 0
    payload = {
        "algebra": alg.pres.name,
        "field": alg.field.name,
        "dim": alg.dim,
        "vertices": alg.pres.quiver.n,
        "graded": alg.graded,
        "basis": [{"label": repr(p), "source": alg.source[i],
                   "target": alg.target[i], "length": alg.length[i],
                   "degree": alg.degree[i]} for i, p in enumerate(alg.basis)],
    }
    _emit(args, payload)
    return 0


def cmd_resolve(args):
    alg = build_algebra(_read_presentation(args), _field(args))
    kind, _, num = args.module.partition(":")
    module = canonical_module(alg, kind, int(num))
    res = minimal_resolution(module, args.cutoff)
    if args.pretty:
        lines = [f"resolution of {kind}({num}), "
                 + ("complete" if res.complete else f"cutoff {res.cutoff}")]
        for k, label in res.table():
            lines.append(f"  {k} | {label}")
        _emit(args, "\n".join(lines) + "\n")
        return 0
    payload = {
        "module": args.module,
        "complete": res.complete,
        "cutoff": res.cutoff,
        "terms": [{"degree": k, "summands": res.term_data(k)}
                  for k in range(res.computed + 1)],
    }
    _emit(args, payload)
    return 0


def _table_for(args, alg):
    return ExtTable(alg, args.family, args.cutoff)


def cmd_ext(args):
    alg = build_algebra(_read_presentation(args), _field(args))
    table = _table_for(args, alg)
    entries = []
    for (i, j, k), d in sorted(table.total_dims().items()):
        entries.append({"source": i, "target": j, "degree": k, "dim": d,
                        "basis_labels": [table.label((i, j, k, m))
                                         for m in range(d)]})
    payload = {"family": args.family, "cutoff": args.cutoff, "entries": entries}
    if args.products:
        prods = []
        for (akey, bkey), coeffs in sorted(table.structure_constants().items()):
            prods.append({"a": list(akey), "b": list(bkey),
                          "coeffs": sorted([idx, _scalar(c)]
                                           for idx, c in coeffs.items())})
        payload["products"] = prods
    if args.pretty:
        lines = [f"Ext table ({args.family}), cutoff {args.cutoff}"]
        for e in entries:
            lines.append(f"  Ext^{e['degree']}({e['source']},{e['target']}) "
                         f"dim {e['dim']}: " + ", ".join(e["basis_labels"]))
        _emit(args, "\n".join(lines) + "\n")
        return 0
    _emit(args, payload)
    return 0


def cmd_ainf(args):
    _validate_config(args.cutoff, args.max_arity)
    alg = build_algebra(_read_presentation(args), _field(args))
    table = _table_for(args, alg)
    splitting = _splitting_for(args, table)
    ops = transfer(splitting, args.max_arity)
    entries = []
    for entry in ops.entries():
        entries.append({
            "arity": entry["arity"],
            "inputs": [list(k) for k in entry["inputs"]],
            "input_labels": [table.label(k) for k in entry["inputs"]],
            "valid": entry["valid"],
            "output": sorted([idx, _scalar(c)]
                             for idx, c in entry["output"].items()),
        })
    payload = {"family": args.family, "cutoff": args.cutoff,
               "max_arity": args.max_arity, "splitting": args.splitting,
               "entries": entries}
    if args.pretty:
        lines = []
        for e in entries:
            if e["output"] or not e["valid"]:
                mark = "?" if not e["valid"] else "="
                lines.append(f"m{e['arity']}(" + ", ".join(e["input_labels"])
                             + f") {mark} {e['output']}")
        _emit(args, "\n".join(lines) + "\n")
        return 0
    _emit(args, payload)
    return 0


def _splitting_for(args, table):
    endg = build_end_dg(table, window=args.window)
    if args.splitting == "compatible":
        if table.b_table is None:
            raise QextError("compatible splitting needs standards over a dual extension")
        b_endg = build_end_dg(table.b_table, window=args.window)
        b_split = make_splitting(b_endg)
        return make_splitting(endg, mode="compatible", b_splitting=b_split)
    return make_splitting(endg)


def cmd_dualext(args):
    b_pres = _read_presentation(args)
    if args.with_file:
        with open(args.with_file, "r", encoding="utf-8") as fh:
            a_pres = parse_presentation(fh.read())
    else:
        a_pres = b_pres
    _emit(args, format_presentation(dual_extension(b_pres, a_pres)))
    return 0


def cmd_koszul(args):
    alg = build_algebra(_read_presentation(args), _field(args))
    _emit(args, koszul_report(alg, cutoff=args.cutoff))
    return 0


def cmd_box(args):
    _validate_config(args.cutoff, args.max_arity)
    pres = _read_presentation(args)
    if pres.provenance is None:
        pres = dual_extension(pres, pres)
    alg = build_algebra(pres, _field(args))
    table = ExtTable(alg, "standards", args.cutoff)
    b_split = make_splitting(build_end_dg(table.b_table, window=args.window))
    splitting = make_splitting(build_end_dg(table, window=args.window),
                               mode="compatible", b_splitting=b_split)
    ops = transfer(splitting, args.max_arity)
    box = compute_box(table, ops, max_arity=args.max_arity)
    decompose_all(box, table)
    payload = {
        "presentation": format_presentation(box.pres),
        "arrows": [{"name": nm, "source": key[0], "target": key[1],
                    "ext_key": list(key)}
                   for nm, key in sorted(box.arrow_keys.items())],
        "relations": [repr(r) for r in box.pres.relations],
        "c_matrix": box.c_matrix,
        "multiplicities": morita_multiplicities(box),
        "report": box.relation_report,
    }
    if args.pretty:
        lines = [box.pres.name, payload["presentation"], "relations:"]
        lines += ["  " + r for r in payload["relations"]]
        lines.append("c matrix: " + str(box.c_matrix))
        lines.append("multiplicities: " + str(payload["multiplicities"]))
        _emit(args, "\n".join(lines) + "\n")
        return 0
    _emit(args, payload)
    return 0


def cmd_family(args):
    params = FamilyParams(args.n, args.ell)
    _emit(args, format_presentation(build_family(params)))
    return 0


def cmd_family_check(args):
    params = FamilyParams(args.n, args.ell)
    report = family_check(params, cutoff=args.cutoff, max_arity=args.max_arity,
                          field=_field(args))
    if args.pretty:
        lines = [f"family (n={args.n}, ell={args.ell}): "
                 + ("PASS" if report["ok"] else "FAIL")]
        for key in ("resolution_terms_ok", "ext_dims_ok", "presentation_dims_ok",
                    "products_ok", "higher_vanishing_ok"):
            lines.append(f"  {key}: {report[key]}")
        for fail in report["failures"]:
            lines.append("  ! " + str(fail))
        _emit(args, "\n".join(lines) + "\n")
        return 0
    _emit(args, report)
    return 0


def cmd_verify_iso(args):
    alg = build_algebra(_read_presentation(args), _field(args))
    _emit(args, verify_dualext_iso(alg, args.cutoff))
    return 0


def build_parser():
    top = argparse.ArgumentParser(prog="qext", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--in", dest="infile", default=None,
                           help="presentation file (default: stdin)")
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--field", default=None,
                       help="rationals (default) or a prime modulus")
        p.add_argument("--pretty", action="store_true")

    p = sub.add_parser("build", help="build the algebra and print its basis")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("resolve", help="minimal projective resolution term table")
    common(p)
    p.add_argument("--module", required=True,
                   help="simple:i | projective:i | standard:i")
    p.add_argument("--cutoff", type=int, default=12)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("ext", help="Ext table with Yoneda structure constants")
    common(p)
    p.add_argument("--family", choices=["simples", "standards"], default="simples")
    p.add_argument("--cutoff", type=int, default=12)
    p.add_argument("--products", action="store_true")
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("ainf", help="transferred A-infinity products")
    common(p)
    p.add_argument("--family", choices=["simples", "standards"], default="simples")
    p.add_argument("--cutoff", type=int, default=12)
    p.add_argument("--max-arity", dest="max_arity", type=int, default=4)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--splitting", choices=["plain", "compatible"], default="plain")
    p.set_defaults(func=cmd_ainf)

    p = sub.add_parser("dualext", help="dual extension presentation A(B, A^op)")
    common(p)
    p.add_argument("--with", dest="with_file", default=None,
                   help="presentation of A (default: A = B)")
    p.set_defaults(func=cmd_dualext)

    p = sub.add_parser("koszul", help="Koszulity report")
    common(p)
    p.add_argument("--cutoff", type=int, default=None)
    p.set_defaults(func=cmd_koszul)

    p = sub.add_parser("box", help="exact Borel subalgebra B-hat and Morita data")
    common(p)
    p.add_argument("--cutoff", type=int, default=12)
    p.add_argument("--max-arity", dest="max_arity", type=int, default=8)
    p.add_argument("--window", type=int, default=None)
    p.set_defaults(func=cmd_box)

    p = sub.add_parser("family", help="emit the K A_n / rad^l presentation")
    common(p, needs_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("family-check", help="oracle comparison matrix")
    common(p, needs_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--max-arity", dest="max_arity", type=int, default=None)
    p.set_defaults(func=cmd_family_check)

    p = sub.add_parser("verify-iso", help="Ext(Delta,Delta) vs A(Ext_B(L,L), A)")
    common(p)
    p.add_argument("--cutoff", type=int, default=8)
    p.set_defaults(func=cmd_verify_iso)

    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CutoffExceeded, WindowExceeded) as exc:
        print(f"qext: {exc}", file=sys.stderr)
        return 2
    except QextError as exc:
        print(f"qext: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
