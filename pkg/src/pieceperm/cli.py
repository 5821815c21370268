"""Command-line driver.

Exit codes: 0 success, 1 user error (bad field, recipe or parameters),
2 a failed check or an internal invariant violation.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import nullcontext
from math import gcd

import numpy as np

from . import _backend, constructions as C, equivalence, funcrep, gf2n, spectra, tables
from .cache import Cache
from .errors import InvariantViolation, ParameterError
from .funcrep import LutFunction
from .recipe import parse_piecewise, parse_recipe

EXIT_OK, EXIT_USER, EXIT_CHECK = 0, 1, 2
REFERENCE_CLASS_COUNT = {("cor1", 6, 2): 5, ("cor1", 10, 2): 5, ("cor2", 12, 4): 5}


# --- shared plumbing ---------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field", help="field spec, e.g. n=6,s=2 or n=8,mod=0x11d")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--no-cache", action="store_true", help="ignore and do not write the metric cache")
    p.add_argument("--threads", type=int, default=1, help="worker threads for spectra kernels")
    p.add_argument("--oracle-max-n", type=int, default=None,
                   help="cross-check against the brute-force oracles when n is at most this")
    return p


def _field(args, n=None, s=None, default=None):
    if n is not None:
        if args.field:
            spec = gf2n.parse_field_spec(args.field)
            if spec.n != n:
                raise ParameterError(f"--n {n} conflicts with --field {args.field}")
            return spec.with_subfield(s if s is not None else spec.s)
        return gf2n.make_field(n, s=s)
    if args.field:
        spec = gf2n.parse_field_spec(args.field)
        return spec.with_subfield(s) if s is not None else spec
    if default is not None:
        return gf2n.make_field(*default)
    raise ParameterError("a field is required: pass --field n=<n>[,s=<s>]")


def _load_function(args, spec=None) -> LutFunction:
    if getattr(args, "lut", None):
        lut = funcrep.read_lut(args.lut, s=spec.s if spec else None)
        if spec is not None and (lut.n != spec.n or lut.spec.modulus != spec.modulus):
            raise ParameterError(f"LUT field {lut.spec.describe()} differs from --field {spec.describe()}")
        return lut
    if not getattr(args, "recipe", None):
        raise ParameterError("pass --recipe or --lut")
    return parse_recipe(spec if spec is not None else _field(args), args.recipe)


def _cache(args) -> Cache:
    return Cache(enabled=not args.no_cache)


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2, sort_keys=False) if args.json else text)


def _oracle_check(args, lut: LutFunction) -> dict:
    limit = args.oracle_max_n
    if limit is None or lut.n > limit:
        return {}
    out = {}
    d = spectra.ddt_naive(lut, max_n=limit)
    out["ddt"] = d.histogram == spectra.ddt(lut).histogram
    w = spectra.walsh_naive(lut, max_n=limit)
    out["walsh"] = w.value_histogram == spectra.walsh(lut).value_histogram
    if funcrep.is_permutation(lut):
        b = spectra.bct_naive(lut, max_n=limit)
        out["bct"] = np.array_equal(b.table[1:, 1:], spectra.bct(lut, full=True).table[1:, 1:])
    if not all(out.values()):
        bad = [k for k, v in out.items() if not v]
        raise InvariantViolation(f"fast kernels disagree with the oracle on {bad}")
    return out


# --- analyze -----------------------------------------------------------------

def cmd_analyze(args) -> int:
    spec = _field(args) if args.field else None
    lut = _load_function(args, spec)
    wanted = [m for m in ("ddt", "walsh", "bct", "degree") if getattr(args, m)]
    if not wanted:
        wanted = ["ddt", "walsh", "degree"] + (["bct"] if funcrep.is_permutation(lut) else [])
    cache = _cache(args)
    cols = {"ddt": "delta", "walsh": "nl", "degree": "degree", "bct": "beta"}
    values = tables.metrics(lut, [cols[m] for m in wanted], args.threads, cache)
    result = {"n": lut.n, "field": gf2n.format_field_spec(lut.spec), "function": lut.name,
              "permutation": funcrep.is_permutation(lut), **values}
    if args.full:
        if "ddt" in wanted:
            result["delta_hist"] = {str(k): v for k, v in spectra.ddt(lut, threads=args.threads).histogram.items()}
        if "walsh" in wanted:
            w = spectra.walsh(lut, threads=args.threads)
            result["walsh_abs_hist"] = {str(k): v for k, v in w.abs_histogram().items()}
        if "bct" in wanted:
            result["beta_cases"] = spectra.bct(lut, threads=args.threads).case_partition
    oracle = _oracle_check(args, lut)
    if oracle:
        result["oracle_agrees"] = oracle
    text = "\n".join(f"{k:>14}: {v}" for k, v in result.items())
    _emit(args, result, text)
    return EXIT_OK


# --- table -------------------------------------------------------------------

def cmd_table(args) -> int:
    ids = list(tables.TABLES) if args.table_id == "all" else [args.table_id]
    reports = [tables.run_table(t, args.threads, _cache(args)) for t in ids]
    payload = {"tables": [r.to_json() for r in reports], "pass": all(r.ok for r in reports)}
    _emit(args, payload, "\n\n".join(r.render() for r in reports))
    return EXIT_OK if payload["pass"] else EXIT_CHECK


# --- verify ------------------------------------------------------------------

def _piece_rows(table_id: str):
    if table_id not in tables.TABLES:
        raise ParameterError(f"unknown table {table_id!r}")
    return tables.table_pieces(table_id)


def _suite_lemma1(args):
    n, s, k = args.n or 6, args.s or 2, args.k or 2
    v = C.verify_lemma1(_field(args, n, s), s, k)
    return [(f"lemma1 n={n} s={s} k={k}", v.ok, v.message, v.witness)]


def _suite_lemma4k(args):
    n, s = args.n or 12, args.s or 4
    k = args.k or n // 4
    v = C.verify_lemma4k(_field(args, n, s), s, k)
    return [(f"lemma4k n={n} s={s} k={k}", v.ok, v.message, v.witness)]


def _suite_h3(args):
    n, s = args.n or 6, args.s or 2
    spec = _field(args, n, s)
    recipe = args.recipe or f"gold(k={args.k or 2})"
    v = C.verify_h3(parse_recipe(spec, recipe), s)
    return [(f"h3 {recipe} n={n} s={s}", v.ok, v.message, v.witness)]


def _suite_thm2(args):
    out = []
    for label, recipe, piece in _piece_rows(args.table or "T2"):
        rep = C.differential_case_bounds(piece, threads=args.threads)
        msg = (f"delta_f={rep.delta_f} delta_g={rep.delta_g} row max inside={rep.inside_max} "
               f"outside={rep.outside_max}")
        out.append((f"thm2 {label}", rep.ok, msg, rep.violations[:1] or None))
    return out


def _suite_prop8(args):
    out = []
    t = tables.TABLES[args.table or "T2"]
    rows = list(_piece_rows(t.table_id))
    spec = gf2n.make_field(t.n, s=t.s)
    try:
        rows.append(("gold+1", "gold_plus_one(k=2)", C.gold_plus_one_spec(spec, t.s, 2)))
    except ParameterError:
        pass  # the Gold+1 map is only defined in the Gold parameter range
    for label, recipe, piece in rows:
        rep = spectra.boomerang_case_bounds(piece, strict=False, threads=args.threads)
        msg = " ".join(f"{k} max {v[0]} <= {v[1]}" for k, v in rep.cases.items())
        out.append((f"prop8 {label}", rep.ok, msg, rep.violations[:1] or None))
    return out


def _suite_prop9(args):
    n, s, k = args.n or 6, args.s or 2, args.k or 2
    v = C.verify_prop9(_field(args, n, s), s, k, threads=args.threads)
    return [(f"prop9 n={n} s={s} k={k}", v.ok, v.message, v.witness)]


def _suite_prop1(args):
    n, s = args.n or 9, args.s or 3
    spec = _field(args, n, s)
    f_exp, g_exp = args.f_exp or 5, args.g_exp or 3
    F = C.apn_piecewise(spec, s, funcrep.monomial(spec, f_exp), funcrep.monomial(spec, g_exp))
    delta = spectra.ddt(F, threads=args.threads).uniformity
    ok = funcrep.is_permutation(F) and delta <= 4
    return [(f"prop1 n={n} s={s} f=x^{f_exp} g=x^{g_exp}", ok, f"permutation, delta={delta}", None)]


def _suite_nl(args):
    t = tables.TABLES[args.table or "T2"]
    bound = spectra.nl_lower_bound(t.n, t.s)
    out = []
    for label, recipe, piece in _piece_rows(t.table_id):
        nl = spectra.walsh(C.materialize(piece), threads=args.threads).nonlinearity
        out.append((f"nl-bound {label}", nl >= bound, f"NL={nl} >= {bound}", None if nl >= bound else nl))
    return out


def _suite_deg_inverse(args):
    out = []
    for label, recipe, piece in _piece_rows(args.table or "T2"):
        v = C.verify_degree_inverse(C.materialize(piece))
        out.append((f"deg-inverse {label}", v.ok, v.message, v.witness))
    return out


SUITES = {
    "lemma1": _suite_lemma1, "lemma4k": _suite_lemma4k, "h3": _suite_h3, "thm2-bounds": _suite_thm2,
    "prop8-bounds": _suite_prop8, "prop9": _suite_prop9, "prop1": _suite_prop1, "nl-bound": _suite_nl,
    "deg-inverse": _suite_deg_inverse,
}


def cmd_verify(args) -> int:
    results = SUITES[args.suite](args)
    ok = all(r[1] for r in results)
    payload = {"suite": args.suite, "pass": ok,
               "checks": [{"name": n, "pass": p, "detail": m, "witness": w} for n, p, m, w in results]}
    lines = [f"{'PASS' if p else 'FAIL'}  {n}: {m}" + ("" if p or w is None else f"  witness={w}")
             for n, p, m, w in results]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_CHECK


# --- search ------------------------------------------------------------------

def _search_candidates(args, spec):
    """Deterministic candidate list ``(recipe, piece)``; reference-table maps come first."""
    fam, s, k = args.family, spec.s, args.k
    if fam == "gold_plus_one":
        ks = [k] if k else [j for j in range(1, spec.n) if gcd(j, spec.n) == 2]
        for j in ks:
            yield f"gold_plus_one(k={j},s={s})", C.gold_plus_one_spec(spec, s, j)
        return
    if fam == "cor1":
        k = k or 2
        C.corollary1_spec(spec, s, k)  # validates the family conditions up front
        g = f"gold(k={k})"
    else:
        k = k or spec.n // 4
        C.corollary2_spec(spec, s, k)
        g = f"bracken_leander(k={k})"
    seen = set()
    for t in tables.TABLES.values():
        if (t.n, t.s, t.g) == (spec.n, s, g):
            for A in t.maps:
                recipe = f"piecewise(f=affine_inv({A});g={g};s={s})"
                piece = parse_piecewise(spec, recipe)
                key = piece.f_values.tobytes()
                if key not in seen:
                    seen.add(key)
                    yield recipe, piece
    for A in C.iter_affine_maps(spec, s):
        recipe = f"piecewise(f=affine_inv({A.describe()});g={g};s={s})"
        vals = C.affine_inverse_values(spec, s, A)
        if vals.tobytes() in seen:
            continue
        seen.add(vals.tobytes())
        yield recipe, C.PiecewiseSpec(spec, s, vals, _g_function(spec, g), recipe)


_G_CACHE: dict = {}


def _g_function(spec, g_recipe):
    key = (spec.key(), g_recipe)
    if key not in _G_CACHE:
        _G_CACHE[key] = parse_recipe(spec, g_recipe)
    return _G_CACHE[key]


SEARCH_FIELDS = ["index", "recipe", "delta", "nl", "degree", "beta", "fingerprint", "affine_fingerprint"]


def cmd_search(args) -> int:
    s = args.s or (2 if args.family in ("cor1", "gold_plus_one") else 4)
    spec = _field(args, args.n, s)
    cache = _cache(args)
    fmt = args.format or ("csv" if args.out and args.out.endswith(".csv") else "jsonl")
    sink = open(args.out, "w", newline="") if args.out else nullcontext(sys.stdout)
    classes: dict[str, list[int]] = {}
    affine_classes: set[str] = set()
    count = 0
    # with --json the records go to --out only and stdout carries the summary
    with sink as fh:
        writer = csv.DictWriter(fh, SEARCH_FIELDS) if fmt == "csv" else None
        if writer:
            writer.writeheader()
        for recipe, piece in _search_candidates(args, spec):
            if args.limit is not None and count >= args.limit:
                break
            F = C.materialize(piece).renamed(recipe)
            cols = ["delta", "nl", "degree"] + ([] if args.no_bct else ["beta"])
            m = tables.metrics(F, cols, args.threads, cache)
            prof = equivalence.InvariantProfile(
                F.n, spectra.walsh(F, threads=args.threads).abs_histogram(),
                spectra.ddt(F, threads=args.threads).histogram, m["degree"], m.get("beta"))
            rec = {"index": count, "recipe": recipe, **m, "beta": m.get("beta"),
                   "fingerprint": prof.fingerprint, "affine_fingerprint": prof.affine_fingerprint}
            classes.setdefault(prof.fingerprint, []).append(count)
            affine_classes.add(prof.affine_fingerprint)
            if not (args.json and not args.out):
                if writer:
                    writer.writerow(rec)
                else:
                    fh.write(json.dumps(rec) + "\n")
                fh.flush()
            count += 1
    ref = REFERENCE_CLASS_COUNT.get((args.family, spec.n, s))
    summary = {"family": args.family, "n": spec.n, "s": s, "candidates": count,
               "fingerprint_classes": len(classes), "affine_classes": len(affine_classes),
               "reference_class_count": ref,
               "classes": [{"fingerprint": fp, "members": idx} for fp, idx in classes.items()]}
    text = (f"# {count} candidates, {len(classes)} fingerprint classes (lower bound on CCZ classes), "
            f"{len(affine_classes)} affine classes" + (f"; reference count {ref}" if ref else ""))
    if args.json:
        print(json.dumps(summary, indent=2))
    else:
        print(text, file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


# --- export / invariants -----------------------------------------------------

def cmd_export(args) -> int:
    spec = _field(args)
    lut = parse_recipe(spec, args.recipe)
    if args.out:
        funcrep.write_lut(lut, args.out)
        if args.json:
            print(json.dumps({"written": args.out, "digest": lut.digest()}))
    else:
        sys.stdout.write(lut.to_text())
    return EXIT_OK


def cmd_invariants(args) -> int:
    spec = _field(args) if args.field else None
    lut = _load_function(args, spec)
    prof = equivalence.profile(lut, threads=args.threads)
    payload = prof.to_json()
    if args.against:
        other = parse_recipe(lut.spec, args.against)
        payload["distinguish"] = str(equivalence.distinguish(prof, equivalence.profile(other, args.threads)))
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for k in ("n", "fingerprint", "affine_fingerprint", "degree", "beta"):
            print(f"{k:>18}: {payload[k]}")
        print(f"{'delta_hist':>18}: {payload['delta_hist']}")
        print(f"{'walsh_abs_hist':>18}: {payload['walsh_abs_hist']}")
        if "distinguish" in payload:
            print(f"{'distinguish':>18}: {payload['distinguish']}")
    return EXIT_OK


# --- entry -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = argparse.ArgumentParser(prog="pieceperm", description="Piecewise permutations over GF(2^n).")
    p.add_argument("--backend", choices=_backend.BACKENDS, help="kernel backend (default: compiled if built)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="metrics of one function")
    a.add_argument("--recipe")
    a.add_argument("--lut", help="LUT file instead of a recipe")
    for m in ("ddt", "walsh", "bct", "degree"):
        a.add_argument(f"--{m}", action="store_true")
    a.add_argument("--full", action="store_true", help="include histograms")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("table", parents=[common], help="recompute a reference table")
    t.add_argument("table_id", choices=[*tables.TABLES, "all"])
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", parents=[common], help="exhaustive lemma and bound checks")
    v.add_argument("suite", choices=list(SUITES))
    v.add_argument("--n", type=int)
    v.add_argument("--s", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--table", choices=["T2", "T3", "T4"])
    v.add_argument("--recipe", help="function g for the h3 suite")
    v.add_argument("--f-exp", type=int, help="prop1: exponent of f on the subfield")
    v.add_argument("--g-exp", type=int, help="prop1: exponent of g")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="enumerate a construction family")
    s.add_argument("--family", required=True, choices=["cor1", "cor2", "gold_plus_one"])
    s.add_argument("--n", type=int)
    s.add_argument("--s", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--limit", type=int)
    s.add_argument("--out")
    s.add_argument("--format", choices=["csv", "jsonl"])
    s.add_argument("--no-bct", action="store_true", help="skip boomerang uniformity")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("export-lut", parents=[common], help="write a LUT file")
    e.add_argument("--recipe", required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)

    i = sub.add_parser("invariants", parents=[common], help="invariant profile")
    i.add_argument("--recipe")
    i.add_argument("--lut")
    i.add_argument("--against", help="second recipe to distinguish from")
    i.set_defaults(func=cmd_invariants)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.backend:
        try:
            _backend.kernels = _backend.load(args.backend)
        except ImportError as exc:
            print(f"error: backend {args.backend!r} unavailable: {exc}", file=sys.stderr)
            return EXIT_USER
        _backend.BACKEND = args.backend
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
