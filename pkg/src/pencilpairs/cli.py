"""Command-line entry point: ``pencilpairs <command> [options]``."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence, TextIO

from .chern_ring import AmbientProduct, integrate, parse_class
from .mcg import Move, apply_move, load_config, p_of_word, parity_check, parse_word, tau_of_word, int_det
from .output import FORMATS, OutputDocument, render
from .pairs import (
    PencilPairRecord,
    SearchBounds,
    SurfaceMember,
    discrepancy_report,
    dp6_counts,
    dp6_pairs,
    find_group,
    group_fano_pairs,
    member_counts,
    pair_report,
    search_dim2,
)
from .pencil import (
    fano_crit_count,
    fillings_report,
    pencil_invariants,
    model_for_genus,
)
from .varieties import CompleteIntersection, DivisorClass, default_catalog, load_catalog, verify_entry

__all__ = ["UsageError", "build_parser", "run", "main"]


class UsageError(Exception):
    """Flag values that parse but do not make sense; exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- flag helpers --------------------------------------------------------

def _ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _group_flag(text: str) -> tuple[int, int]:
    vals = _ints(text, "--group")
    if len(vals) != 2:
        raise UsageError(f"--group expects IND,DEG, got {text!r}")
    return vals


def _bounds_flag(text: Optional[str]) -> SearchBounds:
    if not text:
        return SearchBounds()
    fields = {}
    allowed = SearchBounds.__dataclass_fields__
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in allowed:
            raise UsageError(
                f"--bounds expects key=value pairs with keys {', '.join(allowed)}; got {item!r}"
            )
        try:
            fields[key] = int(val)
        except ValueError:
            raise UsageError(f"--bounds value for {key} is not an integer: {val!r}") from None
    return SearchBounds(**fields)


def _catalog(args):
    return load_catalog(args.catalog) if args.catalog else default_catalog()


def _records_doc(records: Sequence[PencilPairRecord], title: str = "") -> OutputDocument:
    return OutputDocument("records", PencilPairRecord.COLUMNS, [r.as_row() for r in records], title=title)


def _report(pairs: Sequence[tuple[str, object]], title: str = "", notes=()) -> OutputDocument:
    return OutputDocument("report", ("quantity", "value"), [list(p) for p in pairs], notes, title)


# --- commands ------------------------------------------------------------

def cmd_catalog_list(args):
    rows = []
    for e in _catalog(args):
        rows.append([
            e.id, e.index, e.deg_a3, e.euler, e.picard_rank,
            str(e.ci_model) if e.ci_model else "", e.description,
        ])
    cols = ("id", "index", "deg_a3", "euler", "picard_rank", "ci_model", "description")
    return OutputDocument("table", cols, rows), 0


def cmd_catalog_verify(args):
    rows, failed = [], 0
    for e in _catalog(args):
        v = verify_entry(e)
        if v.checkable:
            status = "ok" if v.ok else "MISMATCH"
            failed += not v.ok
            rows.append([
                e.id, status, v.tabulated["deg_a3"], v.computed["deg_a3"],
                v.tabulated["euler"], v.computed["euler"], v.computed["index_relation"],
            ])
        else:
            rows.append([e.id, "not checkable", e.deg_a3, None, e.euler, None, None])
    cols = ("id", "status", "deg_tab", "deg_computed", "chi_tab", "chi_computed", "index_ok")
    notes = [f"{failed} entries disagree with their model"] if failed else []
    return OutputDocument("table", cols, rows, notes), 1 if failed else 0


def cmd_pairs_search(args):
    return _records_doc(search_dim2(_bounds_flag(args.bounds))), 0


def cmd_pairs_groups(args):
    rows = []
    for g in group_fano_pairs(_catalog(args)):
        amb, ds = model_for_genus(g.genus)
        rows.append([g.index, g.deg_a3, g.genus, " ".join(g.ids), f"{amb} cut by degrees {list(ds)}"])
    cols = ("index", "deg_a3", "k3_genus", "members", "k3_model")
    return OutputDocument("table", cols, rows), 0


def _surface_pair(args):
    if len(args.pair) != 2:
        raise UsageError("--pair must be given exactly twice")
    return tuple(SurfaceMember.parse(p) for p in args.pair)


def cmd_pairs_report(args):
    k = args.k
    if args.pair:
        return _records_doc(pair_report(_surface_pair(args), k)), 0
    if not args.group:
        raise UsageError("pairs report needs --group IND,DEG or two --pair labels")
    ind, deg = _group_flag(args.group)
    group = find_group(group_fano_pairs(_catalog(args)), ind, deg)
    if args.records:
        return _records_doc(pair_report(group, k)), 0
    rows = [list(r) for r in member_counts(group, k)]
    return OutputDocument(
        "records", ("id", "chi", f"crit(k={k})"), rows,
        title=f"group index={ind} deg={deg} genus={group.genus}",
    ), 0


def cmd_pairs_dp6(args):
    cat = _catalog(args)
    if args.records:
        return _records_doc(dp6_pairs(cat, args.k)), 0
    rows = [list(r) for r in dp6_counts(cat, args.k)]
    return OutputDocument("records", ("id", "chi", f"crit(l={args.k})"), rows), 0


def cmd_twists(args):
    k = args.k
    if args.surface:
        m = SurfaceMember.parse(args.surface).cabled(k)
        inv = m.invariants()
        return _report(sorted(inv.as_dict().items()), title=m.label), 0
    if args.entry:
        entries = {e.id: e for e in _catalog(args)}
        if args.entry not in entries:
            raise ValueError(f"no catalog entry {args.entry!r}")
        e = entries[args.entry]
        closed = fano_crit_count(e.euler, e.deg_a3, k)
        if e.ci_model is None:
            return _report(
                [("chi_X", e.euler), ("crit", closed)],
                title=f"{e.id} with k*A, k={k}",
                notes=["no complete-intersection model; count from (chi, deg) only"],
            ), 0
        X, L = e.ci_model, e.anticanonical.scale(k)
    else:
        if not args.ambient or not args.bundle:
            raise UsageError("twists needs --entry, --surface, or --ambient/--divisor/--bundle")
        X = CompleteIntersection.of(
            _ints(args.ambient, "--ambient"), *[_ints(d, "--divisor") for d in args.divisor]
        )
        L = DivisorClass(_ints(args.bundle, "--bundle")).scale(k)
        closed = None
    inv = pencil_invariants(X, L)
    pairs = sorted(inv.as_dict().items())
    if closed is not None:
        pairs.append(("crit_closed_form", closed))
    return _report(pairs, title=f"{X} with L={L}"), 0


def cmd_cable(args):
    max_k = args.max_k
    if max_k < 1:
        raise UsageError("--max-k must be positive")
    if args.pair:
        a, b = _surface_pair(args)
        cols = ("k", a.label, b.label, "delta")
        rows = []
        for k in range(1, max_k + 1):
            rec = pair_report((a, b), k)[0]
            rows.append([k, rec.crit_plus, rec.crit_minus, rec.delta])
        return OutputDocument("table", cols, rows), 0
    if not args.group:
        raise UsageError("cable needs --group IND,DEG or two --pair labels")
    ind, deg = _group_flag(args.group)
    group = find_group(group_fano_pairs(_catalog(args)), ind, deg)
    cols = ("k", *group.ids)
    rows = [[k, *(c for _, _, c in member_counts(group, k))] for k in range(1, max_k + 1)]
    return OutputDocument("table", cols, rows, title=f"group index={ind} deg={deg}"), 0


def cmd_fillings(args):
    rep = fillings_report(args.n)
    notes = [f"pairwise distinct: {'yes' if rep.distinct else 'no'}"]
    return OutputDocument("table", ("filling", "euler"), [list(v) for v in rep.values], notes,
                          title=f"N={rep.n}"), 0


def cmd_discrepancies(args):
    items = discrepancy_report(_catalog(args))
    cols = ("key", "quantity", "witness", "published", "derived", "note")
    return OutputDocument("table", cols, [d.as_row() for d in items]), 0


def _matrix_rows(m) -> list:
    return [[int(x) for x in row] for row in m]


def cmd_mcg_eval(args):
    cfg = load_config(args.config)
    w = parse_word(args.word)
    m = tau_of_word(cfg, w)
    ident = bool((m == cfg.lattice.identity()).all())
    pairs = [
        ("word", str(w)), ("p", p_of_word(w)), ("det", int_det(m)),
        ("identity", ident), ("matrix", _matrix_rows(m)),
    ]
    return _report(pairs), 0


def cmd_mcg_move(args):
    cfg = load_config(args.config)
    w = parse_word(args.word)
    new_cfg, w2 = cfg, w
    for text in args.move:
        new_cfg, w2 = apply_move(new_cfg, w2, Move.parse(text))
    before, after = tau_of_word(cfg, w), tau_of_word(new_cfg, w2)
    added = [s for s in new_cfg.spheres if s.id not in {t.id for t in cfg.spheres}]
    pairs = [
        ("word_before", str(w)), ("word_after", str(w2)),
        ("tau_preserved", bool((before == after).all())),
        ("p_preserved", p_of_word(w) == p_of_word(w2)),
    ]
    pairs += [(f"new_sphere {s.id}", [int(x) for x in s.v]) for s in added]
    return _report(pairs), 0


def cmd_mcg_parity(args):
    cfg = load_config(args.config)
    rep = parity_check(cfg, args.word)
    pairs = [("det", rep.det), ("p", rep.p), ("identity", rep.identity), ("verdict", rep.verdict)]
    return _report(pairs), 0 if rep.consistent else 1


def cmd_ring_integrate(args):
    amb = AmbientProduct(_ints(args.ambient, "--ambient"))
    c = parse_class(args.expr, amb)
    return _report([("class", str(c)), ("integral", integrate(c))], title=f"ambient {amb}"), 0


# --- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--catalog", metavar="PATH", help="catalog JSON (default: bundled)")

    p = _Parser(prog="pencilpairs", description="Twist counts and pencil pairs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def leaf(parent, name, func, help_):
        sp = parent.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    cat = sub.add_parser("catalog", help="bundled Fano 3-fold data")
    cs = cat.add_subparsers(dest="action", required=True, parser_class=_Parser)
    leaf(cs, "list", cmd_catalog_list, "list entries")
    leaf(cs, "verify", cmd_catalog_verify, "recompute invariants from the models")

    pairs = sub.add_parser("pairs", help="pencil-pair search and reports")
    ps = pairs.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = leaf(ps, "search-dim2", cmd_pairs_search, "search surfaces for equal (L^2, L.K)")
    sp.add_argument("--bounds", help="e.g. cp2_max_d=2,p1xp1_max=2,ruled_max_d=4")
    leaf(ps, "groups", cmd_pairs_groups, "group Fano 3-folds by (index, degree)")
    sp = leaf(ps, "report", cmd_pairs_report, "twist counts for a group or surface pair")
    sp.add_argument("--group", metavar="IND,DEG")
    sp.add_argument("--pair", action="append", default=[], metavar="LABEL")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--records", action="store_true", help="emit pairwise records")
    sp = leaf(ps, "dp6", cmd_pairs_dp6, "index-2 degree-6 counts with L^l")
    sp.add_argument("--k", type=int, default=1, help="power l of the index-2 generator")
    sp.add_argument("--records", action="store_true")

    sp = leaf(sub, "twists", cmd_twists, "pencil invariants for one variety and bundle")
    sp.add_argument("--entry", help="catalog id; bundle is k times the anticanonical class")
    sp.add_argument("--surface", help="surface label, e.g. ruled:chi=2,d=4,k=1")
    sp.add_argument("--ambient", help="projective factor dimensions, e.g. 1,1,2")
    sp.add_argument("--divisor", action="append", default=[], help="multidegree, repeatable")
    sp.add_argument("--bundle", help="multidegree of L")
    sp.add_argument("--k", type=int, default=1)

    sp = leaf(sub, "cable", cmd_cable, "twist counts for k = 1..max-k")
    sp.add_argument("--group", metavar="IND,DEG")
    sp.add_argument("--pair", action="append", default=[], metavar="LABEL")
    sp.add_argument("--max-k", type=int, default=5)

    sp = leaf(sub, "fillings", cmd_fillings, "Euler characteristics of distinct fillings")
    sp.add_argument("--n", type=int, default=2)

    leaf(sub, "discrepancies", cmd_discrepancies, "published vs recomputed values")

    mcg = sub.add_parser("mcg", help="action of twist words on middle homology")
    ms = mcg.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, func in (("eval", cmd_mcg_eval), ("move", cmd_mcg_move), ("parity", cmd_mcg_parity)):
        sp = leaf(ms, name, func, f"{name} a twist word")
        sp.add_argument("--config", required=True, metavar="PATH")
        sp.add_argument("--word", required=True)
        if name == "move":
            sp.add_argument("--move", action="append", required=True, metavar="KIND:POS")

    ring = sub.add_parser("ring", help="cohomology ring utilities")
    rs = ring.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = leaf(rs, "integrate", cmd_ring_integrate, "integrate a class over the ambient")
    sp.add_argument("--ambient", required=True)
    sp.add_argument("--expr", required=True)
    return p


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        doc, code = args.func(args)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=stderr)
        return 1
    stdout.write(render(doc, args.format).decode("utf-8"))
    return code


def main() -> None:
    sys.exit(run())
