"""Command-line interface: ``dw2vect <command> [options]``.

Exit status is 0 on success, 1 when the computation rejects its input
(the error message is printed to stderr), and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys

from . import __version__
from .characters import DEFAULT_SEED, character_table
from .cocycles import (
    DecoratedSpan,
    find_primitive,
    is_cocycle,
    load_cochain,
    load_group_cocycle,
    parse_omega_selector,
    transgress_to_loop_groupoid,
)
from .errors import DomainError, GroupError
from .field_theory import (
    builtin_presentation,
    builtin_three_cobordism,
    circle_groupoid,
    decorate,
    decorate_three,
    decorated_circles,
    dw_closed_invariant,
    dw_vector_space,
    fc,
    fc_three,
    mednykh_hom_count,
    CobordismPresentation,
    ThreeCobordism,
)
from .groupoids import dump_groupoid
from .groups import DEFAULT_ENUMERATION_CAP, FiniteGroup, build_group, cyclic, dihedral, direct_product, symmetric
from .linearization import (
    fusion_check,
    fusion_coefficients,
    lambda_block,
    lambda_morphism,
    lambda_object,
    lambda_twisted_morphism,
)
from .twisted import twisted_algebra, twisted_irreps


class UsageError(Exception):
    pass


# input parsing ------------------------------------------------------------------

_GROUP_TOKEN = re.compile(r"(cyc|sym|dih):(\d+)")


def parse_group(text: str) -> FiniteGroup:
    """``cyc:n``, ``sym:n``, ``dih:n``, products joined by ``x``, a JSON
    GroupSpec, or a path to a JSON GroupSpec file."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return build_group(json.loads(text))
        except json.JSONDecodeError as exc:
            raise UsageError(f"--group: invalid JSON ({exc})") from None
    if os.path.isfile(text):
        return build_group(_read_json(text, "--group"))
    factors = []
    for token in text.split("x"):
        m = _GROUP_TOKEN.fullmatch(token.strip())
        if not m:
            raise UsageError(f"--group: cannot parse {token!r}; expected cyc:n, sym:n, dih:n, products "
                             "joined by 'x', or a JSON GroupSpec")
        kind, n = m.group(1), int(m.group(2))
        factors.append({"cyc": cyclic, "sym": symmetric, "dih": dihedral}[kind](n))
    return factors[0] if len(factors) == 1 else direct_product(*factors)


def _read_json(path: str, flag: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{flag}: cannot read {path!r} ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: {path!r} is not valid JSON ({exc})") from None


def parse_presentation(text: str | None, default: str = "pants") -> CobordismPresentation:
    text = text or default
    if text.endswith(".json"):
        return CobordismPresentation.from_json(_read_json(text, "--presentation"), os.path.basename(text))
    return builtin_presentation(text)


def parse_three_cobordism(text: str | None, genus: int | None) -> ThreeCobordism:
    if text is None:
        return builtin_three_cobordism(f"surface:{genus if genus is not None else 1}")
    if text.endswith(".json"):
        return ThreeCobordism.from_json(_read_json(text, "--presentation"), os.path.basename(text))
    return builtin_three_cobordism(text)


def parse_omega(text: str, G: FiniteGroup):
    if text.endswith(".json"):
        w, _ = load_group_cocycle(_read_json(text, "--omega"), G)
        return w
    w = parse_omega_selector(text)
    if w.group.table.tobytes() != G.table.tobytes():
        raise GroupError(f"3-cocycle {text} lives on Z_{w.group.order}, not on {G.name}")
    return w


# output -----------------------------------------------------------------------

def render(headers: list[str], rows: list[list], fmt: str, meta: dict | None = None) -> str:
    meta = meta or {}
    if fmt == "json":
        doc = dict(meta)
        doc["columns"] = headers
        doc["rows"] = rows
        return json.dumps(doc, indent=1, default=str) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for k, v in meta.items():
            if not isinstance(v, (list, dict)):
                buf.write(f"# {k}: {v}\n")
        w.writerow(headers)
        w.writerows(rows)
        return buf.getvalue()
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = [f"{k}: {v}" for k, v in meta.items() if not isinstance(v, (list, dict))]
    for r in cells:
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_provenance(prov: dict, row_labels, col_labels, fmt: str) -> str | list:
    items = []
    for (r, c) in sorted(prov):
        contribs = prov[(r, c)]
        items.append({"row": row_labels[r], "column": col_labels[c],
                      "contributions": [{"apex_class": a, "aut_order": o, "multiplicity": m} for a, o, m in contribs]})
    if fmt == "json":
        return items
    lines = ["provenance:"]
    for it in items:
        parts = "; ".join(f"[{x['apex_class']}] |Aut|={x['aut_order']} -> {x['multiplicity']}"
                          for x in it["contributions"])
        lines.append(f"  ({it['row']} <- {it['column']}): {parts}")
    if fmt == "csv":
        lines = [f"# {line}" for line in lines]
    return "\n".join(lines) + "\n"


def matrix_output(L, args, meta: dict) -> str:
    rows_l, cols_l = L.target.labels, L.source.labels
    rows = [[rows_l[i]] + [int(v) for v in L.entries[i]] for i in range(len(rows_l))]
    meta = dict(meta, shape=f"{L.entries.shape[0]}x{L.entries.shape[1]}",
                orientation="rows = target basis, columns = source basis")
    if args.provenance and args.format == "json":
        meta["provenance"] = render_provenance(L.provenance, rows_l, cols_l, "json")
    out = render(["basis"] + cols_l, rows, args.format, meta)
    if args.provenance and args.format != "json":
        out += render_provenance(L.provenance, rows_l, cols_l, args.format)
    return out


def _dump(args, X) -> None:
    if args.dump_groupoid:
        with open(args.dump_groupoid, "w") as fh:
            fh.write(dump_groupoid(X) + "\n")


# commands ------------------------------------------------------------------------

def cmd_character_table(args) -> str:
    G = parse_group(args.group)
    t = character_table(G, args.seed)
    headers = ["irrep"] + [f"{G.label(int(c[0]))}[{len(c)}]" for c in G.classes]
    rows = [[t.labels[i]] + [t.format_value(i, c) for c in range(len(G.classes))] for i in range(t.n_irreps)]
    meta = {"group": G.name, "order": G.order, "method": "exact" if t.exact else "numerical"}
    return render(headers, rows, args.format, meta)


def cmd_circle_basis(args) -> str:
    G = parse_group(args.group)
    X = circle_groupoid(G)
    _dump(args, X)
    if args.omega:
        D = decorated_circles(G, parse_omega(args.omega, G), 1)
        B = lambda_object(D, seed=args.seed)
    else:
        B = lambda_object(X, seed=args.seed)
    sk = X.skeleton
    rows = [[k, B.classes[c].label, sk.aut_groups[c].order, B.classes[c].irrep_labels[i], B.classes[c].dims[i]]
            for k, (c, i) in enumerate(B.order)]
    meta = {"group": G.name, "rank": B.rank, "twisted": bool(args.omega)}
    return render(["index", "class", "aut_order", "irrep", "dim"], rows, args.format, meta)


def cmd_pants_matrix(args) -> str:
    G = parse_group(args.group)
    P = parse_presentation(args.presentation)
    if args.omega:
        alpha = load_cochain(_read_json(args.alpha, "--alpha"), fc(P, G, args.cap).apex) if args.alpha else None
        D = decorate(P, G, parse_omega(args.omega, G), alpha, cap=args.cap)
        _dump(args, D.span.apex)
        L = lambda_twisted_morphism(D, seed=args.seed)
    else:
        if args.alpha:
            raise UsageError("--alpha needs --omega")
        S = fc(P, G, args.cap)
        _dump(args, S.apex)
        L = lambda_morphism(S, seed=args.seed)
    return matrix_output(L, args, {"group": G.name, "presentation": P.name, "twisted": bool(args.omega)})


def cmd_block(args) -> str:
    if not args.block:
        raise UsageError("block needs --block SRC TGT")
    G = parse_group(args.group)
    P = parse_presentation(args.presentation)
    S = fc(P, G, args.cap)
    _dump(args, S.apex)
    L = lambda_block(S, args.block[0], args.block[1], seed=args.seed)
    return matrix_output(L, args, {"group": G.name, "presentation": P.name,
                                   "source_class": args.block[0], "target_class": args.block[1]})


def cmd_surface_dim(args) -> str:
    if args.genus is None:
        raise UsageError("surface-dim needs --genus")
    G = parse_group(args.group)
    V = dw_vector_space(args.genus, G, args.cap)
    oracle = mednykh_hom_count(G, args.genus)
    rows = [[i, lab, aut] for i, (lab, aut) in enumerate(zip(V.class_labels, V.aut_orders))]
    meta = {"group": G.name, "genus": args.genus, "hom_count": V.hom_count, "mednykh": str(oracle),
            "agrees": oracle == V.hom_count, "dimension": V.dimension}
    return render(["index", "class", "aut_order"], rows, args.format, meta)


def cmd_closed_invariant(args) -> str:
    G = parse_group(args.group)
    M = parse_three_cobordism(args.presentation, args.genus)
    beta = None
    if args.beta:
        span = fc_three(M, G, args.cap)
        beta = load_cochain(_read_json(args.beta, "--beta"), span.apex)
        decorate_three(M, G, beta=beta, cap=args.cap)
    Z = dw_closed_invariant(M, G, beta, args.cap)
    rows = [[Z.row_labels[r]] + [str(Z.entries[r][c]) for c in range(len(Z.col_labels))] for r in range(len(Z.row_labels))]
    meta = {"group": G.name, "cobordism": M.name,
            "orientation": "rows = target connection classes, columns = source connection classes"}
    return render(["class"] + list(Z.col_labels), rows, args.format, meta)


def cmd_validate_cocycle(args) -> str:
    G = parse_group(args.group)
    if not args.omega:
        raise UsageError("validate-cocycle needs --omega")
    w = parse_omega(args.omega, G)
    check = w.check()
    if not check:
        raise DomainError(f"not a 3-cocycle: identity fails at {check.witness}")
    meta = {"group": G.name, "omega": args.omega, "cocycle": True, "normalized": w.is_normalized()}
    if args.presentation:
        P = parse_presentation(args.presentation)
        alpha = load_cochain(_read_json(args.alpha, "--alpha"), fc(P, G, args.cap).apex) if args.alpha else None
        D: DecoratedSpan = decorate(P, G, w, alpha, cap=args.cap)
        meta.update(presentation=P.name, span_condition=True,
                    apex_objects=D.span.apex.n_objects, apex_morphisms=D.span.apex.n_morphisms)
    elif args.alpha:
        raise UsageError("--alpha needs --presentation")
    return render(["check", "result"], [[k, v] for k, v in meta.items()], args.format)


def cmd_transgress(args) -> str:
    G = parse_group(args.group)
    if not args.omega:
        raise UsageError("transgress needs --omega")
    w = parse_omega(args.omega, G)
    X = circle_groupoid(G)
    theta = transgress_to_loop_groupoid(w, X)
    f, g = X.composable_pairs()
    vals = theta.values(f, g)
    n = X.n_objects
    rows = []
    for a, b, v in zip(f, g, vals):
        if v % theta.modulus:
            rows.append([G.label(int(X.src[b])), G.label(int(b // n)), G.label(int(a // n)),
                         f"{int(v)}/{theta.modulus}"])
    A = twisted_algebra(X, theta)
    irr = twisted_irreps(A, args.seed)
    meta = {"group": G.name, "omega": args.omega, "cocycle": bool(is_cocycle(theta)),
            "primitive": find_primitive(theta) is not None if X.n_morphisms <= 4096 else "skipped",
            "rank": irr.rank, "dims": " ".join(map(str, irr.dims)),
            "note": "rows list the nontrivial values theta((k, h x h^-1), (h, x))"}
    return render(["x", "h", "k", "theta"], rows, args.format, meta)


def cmd_fusion_check(args) -> str:
    G = parse_group(args.group)
    P = lambda_morphism(fc(builtin_presentation("pants"), G, args.cap), seed=args.seed)
    U = lambda_morphism(fc(builtin_presentation("disk"), G, args.cap), tgt=P.target, seed=args.seed)
    N = fusion_coefficients(P)
    res = fusion_check(N, U.entries[:, 0])
    labels = P.target.labels
    unit = " + ".join(labels[i] if v == 1 else f"{v}*{labels[i]}" for i, v in enumerate(U.entries[:, 0]) if v)
    rows = []
    for a in range(len(labels)):
        for b in range(len(labels)):
            terms = [labels[c] if N[c, a, b] == 1 else f"{N[c, a, b]}*{labels[c]}"
                     for c in range(len(labels)) if N[c, a, b]]
            rows.append([labels[a], labels[b], " + ".join(terms) or "0"])
    meta = {"group": G.name, "rank": len(labels), "associative": res["associative"],
            "unit": unit, "left_unit": res["left_unit"], "right_unit": res["right_unit"]}
    if not (res["associative"] and res["left_unit"] and res["right_unit"]):
        meta["first_failure"] = res["first_failure"]
    return render(["a", "b", "a*b"], rows, args.format, meta)


COMMANDS = {
    "character-table": cmd_character_table,
    "circle-basis": cmd_circle_basis,
    "pants-matrix": cmd_pants_matrix,
    "block": cmd_block,
    "surface-dim": cmd_surface_dim,
    "closed-invariant": cmd_closed_invariant,
    "validate-cocycle": cmd_validate_cocycle,
    "transgress": cmd_transgress,
    "fusion-check": cmd_fusion_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dw2vect", description="Exact Dijkgraaf-Witten 2-linearization for finite groups.")
    p.add_argument("--version", action="version", version=f"dw2vect {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--group", required=True, help="cyc:n | sym:n | dih:n | products joined by x | JSON GroupSpec")
        s.add_argument("--presentation", help="builtin selector or JSON file")
        s.add_argument("--omega", help="zn:<n>:<p> or a JSON degree-3 cocycle file")
        s.add_argument("--alpha", help="JSON degree-1 cochain file on the span apex")
        s.add_argument("--beta", help="JSON degree-0 cochain file on the 3-cobordism apex")
        s.add_argument("--block", nargs=2, metavar=("SRC", "TGT"), help="object labels naming the source/target classes")
        s.add_argument("--genus", type=int)
        s.add_argument("--boundary", type=int, help="boundary circles for surface:<g>:<b> (with --genus)")
        s.add_argument("--format", choices=["table", "csv", "json"], default="table")
        s.add_argument("--provenance", action="store_true")
        s.add_argument("--seed", type=lambda v: int(v, 0), default=DEFAULT_SEED)
        s.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
        s.add_argument("--dump-groupoid", metavar="PATH", help="write the relevant groupoid as JSON")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.boundary is not None:
        if args.presentation or args.genus is None:
            parser.print_usage(sys.stderr)
            print("dw2vect: error: --boundary needs --genus and no --presentation", file=sys.stderr)
            return 2
        args.presentation = f"surface:{args.genus}:{args.boundary}"
    try:
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dw2vect: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"dw2vect: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
