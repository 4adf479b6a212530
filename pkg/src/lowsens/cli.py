"""Command-line front end: one subcommand per module, JSON on stdout.

Exit status is 0 on success, 1 when an asserted check fails and 2 on usage
or capacity errors. Output is a deterministic function of argv and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from math import comb

from . import families
from .core import CapacityError, dim, read_table, set_max_arity, to_hex
from .criteria import RUNNERS, SEEDED, run_criterion
from .dtree import dt, optimal_tree, tree_to_json
from .fourier import deg_epsilon, degree, influence_moments, level_weights, total_influence
from .learn import draw_samples, hypothesis_error, low_degree_learn
from .restrictions import (CONDITIONAL, CSV_HEADER, MEASURES, THEOREMS, Restriction, apply,
                           bound_check, measure_values, restriction_stats, restrictions,
                           sandwich_rows)
from .sensitivity import component_dimension, sensitivity_stats
from .treewalk.encoding import WalkEncoding, decode_walk, encode_walk
from .treewalk.trees import (COUNT_MAX_ARITY, classify_tree, count_sensitive_trees,
                             lex_least_max_tree, max_trees, spanning_tree, tree_sensitivity)
from .treewalk.walks import (Walk, full_dim_proper_walk, is_proper_walk, min_proper_walk,
                             proper_walk_3n, walk_length_bound)
from .verify import (CHECK_SETS, dnf_checks, entropy_checks, moment_ratio, parse_checks,
                     scan_all, scan_long_run, scan_sample, tail_bound_check)


# -- input and output ---------------------------------------------------------------------

def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="family spec name:p1,p2[,seed]")
    src.add_argument("--table", help="truth-table file (n=<int> then LSB-first hex)")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pretty", action="store_true", help="aligned text instead of JSON")
    p.add_argument("--out", help="write the report here instead of stdout")


def _load(args):
    if args.family is not None:
        return families.make(args.family), {"family": args.family}
    f = read_table(args.table)
    return f, {"table": to_hex(f)}


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for key in sorted(obj):
            yield from _flatten(obj[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(obj, list) and obj and all(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj) if isinstance(obj, (list, type(None), bool)) else str(obj)


def render(obj, pretty: bool) -> str:
    if not pretty:
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    rows = list(_flatten(obj))
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------------------------

def cmd_analyze(args) -> tuple[dict, bool]:
    f, src = _load(args)
    st = sensitivity_stats(f)
    out = {**src, "n": f.n, "s": st.s, "s0": st.s0, "s1": st.s1, "deg": degree(f),
           "dt": dt(f), "ts": tree_sensitivity(f), "cdim": component_dimension(f),
           "dim": dim(f), "total_influence": str(total_influence(f))}
    if args.tree:
        out["decision_tree"] = tree_to_json(optimal_tree(f))
    return out, True


def cmd_moments(args) -> tuple[dict, bool]:
    f, src = _load(args)
    reps = [influence_moments(f, k) for k in range(1, args.k + 1)]
    ok = all(r.ik == r.sk for r in reps[:2])
    out = {**src, "n": f.n, "moments": [r.to_json() for r in reps],
           "identities_hold": ok,
           "level_weights": [str(w) for w in level_weights(f)]}
    if args.k >= 3:
        out["ratio"] = {str(k): str(moment_ratio(f, k)) for k in range(3, args.k + 1)}
    if args.eps is not None:
        out["deg_eps"] = {"eps": str(args.eps), "degree": deg_epsilon(f, args.eps)}
    if args.tails:
        rows = [tail_bound_check(f, k) for k in range(1, args.tails + 1)]
        out["tails"] = [r.to_json() for r in rows]
        ok &= all(r.passed for r in rows)
    if args.dnf_width:
        r = dnf_checks(f, args.dnf_k, args.dnf_width)
        out["dnf"] = r.to_json()
        ok &= r.sk_pass and r.tail_pass
    return out, ok


def _need_seed(parser, args, why: str) -> None:
    if args.seed is None:
        parser.error(f"--seed is required for {why}")


def cmd_restrict(args, parser):
    f, src = _load(args)
    mode = "exhaustive"
    if args.samples is not None:
        _need_seed(parser, args, "sampled restrictions")
        mode = "sample"
    if args.csv:
        vals = measure_values(f, args.k, args.measure, mode, args.samples, args.seed)
        rhos = restrictions(f.n, args.k, mode, args.samples, args.seed)
        rows = [[rho.to_string(), int(v)] for rho, v in zip(rhos, vals.tolist())]
        return render_csv(["restriction", args.measure], rows), True
    st = restriction_stats(f, args.k, args.j, args.measure, mode, args.samples, args.seed)
    out = {**src, "n": f.n, **st.to_json()}
    if args.samples is not None:
        out["seed"] = args.seed
    return out, True


def _theorems(text: str) -> tuple[str, ...]:
    named = {"all": THEOREMS, "conditional": CONDITIONAL, "every": THEOREMS + CONDITIONAL}
    out: list[str] = []
    for part in text.split(","):
        for th in named.get(part.strip(), (part.strip(),)):
            if th not in THEOREMS + CONDITIONAL:
                raise ValueError(f"unknown theorem {th!r}; choose from "
                                 f"{', '.join(THEOREMS + CONDITIONAL)}, all, conditional, every")
            if th not in out:
                out.append(th)
    return tuple(out)


def cmd_bounds(args, parser):
    f, src = _load(args)
    ths = _theorems(args.theorem)
    if args.k is not None:
        j = args.k if args.j is None else args.j
        rows = [bound_check(f, args.k, j, th) for th in ths]
    else:
        if args.j is not None:
            parser.error("-j needs -k")
        rows = sandwich_rows(f, args.kmax, ths)
    ok = all(r.passed is not False for r in rows)
    if args.json:
        return {**src, "rows": [r.to_json() for r in rows], "passed": ok}, ok
    return render_csv(CSV_HEADER, [r.to_csv_row() for r in rows]), ok


def cmd_trees(args) -> tuple[dict, bool]:
    f, src = _load(args)
    out = {**src, "n": f.n, "ts": tree_sensitivity(f)}
    if args.point is not None:
        out["ts_at_point"] = {"point": args.point, "ts": tree_sensitivity(f, args.point)}
    if f.n <= COUNT_MAX_ARITY:
        out["counts"] = {str(j): count_sensitive_trees(f, j) for j in range(1, f.n + 1)}
    t = lex_least_max_tree(f)
    if t is not None:
        out["max_tree"] = {"vertices": list(t.vertices), "edges": [list(e) for e in t.edges],
                           **classify_tree(f, t).to_json()}
    sp = spanning_tree(f)
    out["spanning_tree"] = None if sp is None else list(sp.vertices)
    if args.list:
        out["max_trees"] = [list(v) for v in max_trees(f)[: args.limit]]
    return out, True


def cmd_walk(args) -> tuple[dict, bool]:
    f, src = _load(args)
    out = {**src, "n": f.n, "kind": args.kind}
    if args.check:
        with open(args.check) as fh:
            w = Walk.from_json(json.load(fh))
        proper = is_proper_walk(f, w)
        out.update({"walk": w.to_json(), "length": w.length, "dimension": w.dimension,
                    "proper": proper})
        return out, proper
    if args.kind == "min":
        v = min_proper_walk(f)
        out["min_length"] = v
        return out, True
    if args.kind == "3n":
        w, bound, need = proper_walk_3n(f), 3 * f.n, dt(f)
    else:
        w, bound, need = full_dim_proper_walk(f), walk_length_bound(f.n), dim(f)
    proper = is_proper_walk(f, w)
    ok = proper and w.length <= bound and w.dimension == need
    out.update({"walk": w.to_json(), "length": w.length, "dimension": w.dimension,
                "bound": bound, "proper": proper, "pass": ok})
    return out, ok


def cmd_encode(args, parser) -> tuple[dict, bool]:
    f, src = _load(args)
    out = {**src, "n": f.n}
    if args.restriction:
        rho = Restriction.from_string(args.restriction)
        if rho.n != f.n:
            raise ValueError(f"restriction has {rho.n} coordinates, function has {f.n}")
        depth = dt(apply(f, rho))
        if depth != rho.k:
            raise ValueError(f"restriction does not qualify: dt(f_rho) = {depth} < k = {rho.k}")
        out.update({"restriction": rho.to_string(), "encoding": encode_walk(f, rho).to_json()})
        return out, True
    if args.decode:
        if args.k is None:
            parser.error("--decode needs -k")
        enc = WalkEncoding.from_json(json.loads(args.decode))
        rho = decode_walk(f, enc, args.k)
        out.update({"encoding": enc.to_json(), "restriction": rho.to_string()})
        return out, True
    if args.k is None:
        parser.error("give --restriction, --decode or -k for the full bijection check")
    seen = set()
    qualifying = 0
    round_trip = True
    for rho in restrictions(f.n, args.k):
        if dt(apply(f, rho)) != args.k:
            continue
        qualifying += 1
        enc = encode_walk(f, rho)
        round_trip &= decode_walk(f, enc, args.k) == rho
        seen.add(enc)
    s = sensitivity_stats(f).s
    bound = Fraction((32 * s) ** args.k, comb(f.n, args.k))
    prob = Fraction(qualifying, comb(f.n, args.k) << (f.n - args.k))
    ok = round_trip and len(seen) == qualifying and prob <= bound
    out.update({"k": args.k, "qualifying": qualifying, "distinct": len(seen),
                "round_trip": round_trip, "probability": str(prob), "bound": str(bound),
                "pass": ok})
    return out, ok


def cmd_scan(args, parser):
    if args.criterion is not None:
        nums = sorted(RUNNERS) if args.criterion == "all" else [int(args.criterion)]
        for c in nums:
            if c not in RUNNERS:
                parser.error(f"criteria are numbered 1..{len(RUNNERS)}")
            if (c in SEEDED or c == 15) and args.seed is None:
                parser.error(f"--seed is required for criterion {c}")
        results = [run_criterion(c, args.seed) for c in nums]
        ok = all(r.passed for r in results)
        if len(results) == 1:
            return results[0].to_json(), ok
        return {"criteria": [r.to_json() for r in results], "passed": ok}, ok
    checks = parse_checks(args.checks)
    if args.long_run:
        if not args.checkpoint:
            parser.error("--long-run needs --checkpoint")
        rep = scan_long_run(args.checkpoint, args.start, args.stop, checks)
    else:
        if args.n is None:
            parser.error("give -n, --long-run or --criterion")
        if args.sample is not None:
            _need_seed(parser, args, "sampled scans")
            rep = scan_sample(args.n, args.sample, args.seed, checks)
        else:
            rep = scan_all(args.n, checks)
    out = rep.to_json()
    if args.sample is not None:
        out["seed"] = args.seed
    return out, rep.passed


def cmd_entropy(args) -> tuple[dict, bool]:
    f, src = _load(args)
    e = entropy_checks(f)
    return {**src, "n": f.n, **e.to_json()}, e.level_entropy_pass and e.per_level_pass


def cmd_learn(args) -> tuple[dict, bool]:
    f, src = _load(args)
    h = low_degree_learn(draw_samples(f, args.samples, args.seed), f.n, args.degree)
    err = hypothesis_error(h, f)
    out = {**src, "n": f.n, "error": str(err), "error_float": float(err), "d": args.degree,
           "m": args.samples, "seed": args.seed}
    ok = True
    if args.eps is not None:
        ok = err <= args.eps
        out.update({"eps": str(args.eps), "pass": ok})
    return out, ok


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lowsens",
                                description="Sensitivity, tree sensitivity, restrictions and "
                                            "Fourier tails of Boolean functions.")
    p.add_argument("--max-arity", type=int, help="arity cap for tables and spectra (default 24)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="all complexity measures of one function")
    _add_input(a)
    a.add_argument("--tree", action="store_true", help="include an optimal decision tree")

    m = sub.add_parser("moments", help="influence and sensitivity moments, tails, DNF checks")
    _add_input(m)
    m.add_argument("-k", type=int, default=2, help="highest moment order")
    m.add_argument("--eps", type=Fraction, help="report deg_eps for this eps")
    m.add_argument("--tails", type=int, metavar="K", help="tail bound checks for k = 1..K")
    m.add_argument("--dnf-width", type=int, metavar="W", help="width-W DNF checks")
    m.add_argument("--dnf-k", type=int, default=2, help="moment order for the DNF check")

    r = sub.add_parser("restrict", help="Pr[measure(f_rho) >= j] over random restrictions")
    _add_input(r)
    r.add_argument("-k", type=int, required=True, help="number of live coordinates")
    r.add_argument("-j", type=int, default=1, help="threshold")
    r.add_argument("--measure", choices=MEASURES, default="sensitivity")
    r.add_argument("--samples", type=int, help="Monte-Carlo sample count (needs --seed)")
    r.add_argument("--seed", type=int)
    r.add_argument("--csv", action="store_true", help="one row per restriction")

    b = sub.add_parser("bounds", help="exact sandwich bounds as CSV")
    _add_input(b)
    b.add_argument("-k", type=int, help="live coordinates; omit for the full sweep")
    b.add_argument("-j", type=int, help="threshold (default k)")
    b.add_argument("--kmax", type=int, help="sweep up to this k (default min(n, 4))")
    b.add_argument("--theorem", default="all",
                   help=f"comma list of {', '.join(THEOREMS + CONDITIONAL)}, all, conditional, every")
    b.add_argument("--json", action="store_true", help="JSON rows instead of CSV")

    t = sub.add_parser("trees", help="tree sensitivity, tree counts, maximal trees")
    _add_input(t)
    t.add_argument("--point", type=int, help="also report ts(f, x) at this point")
    t.add_argument("--list", action="store_true", help="list maximum trees")
    t.add_argument("--limit", type=int, default=100, help="cap on listed trees")

    w = sub.add_parser("walk", help="proper walks")
    _add_input(w)
    w.add_argument("--kind", choices=("3n", "full", "min"), default="3n")
    w.add_argument("--check", metavar="FILE", help="check a walk given as JSON")

    e = sub.add_parser("encode", help="walk encoding of restrictions")
    _add_input(e)
    e.add_argument("--restriction", help="e.g. 0*1* (coordinate 1 leftmost)")
    e.add_argument("--decode", metavar="JSON", help="encoding to decode (needs -k)")
    e.add_argument("-k", type=int, help="live coordinates")

    s = sub.add_parser("scan", help="exhaustive, sampled or long-run scans; acceptance criteria")
    s.add_argument("-n", type=int, help="arity")
    s.add_argument("--checks", default="core",
                   help=f"comma list of checks or sets ({', '.join(CHECK_SETS)})")
    s.add_argument("--sample", type=int, metavar="COUNT", help="random functions (needs --seed)")
    s.add_argument("--seed", type=int)
    s.add_argument("--long-run", action="store_true", help="resumable n = 5 scan")
    s.add_argument("--checkpoint", help="checkpoint file for --long-run")
    s.add_argument("--start", type=int, default=0)
    s.add_argument("--stop", type=int)
    s.add_argument("--criterion", help="acceptance criterion number or 'all'")

    en = sub.add_parser("entropy", help="spectral entropy inequalities")
    _add_input(en)

    le = sub.add_parser("learn", help="low-degree learning from uniform samples")
    _add_input(le)
    le.add_argument("--degree", type=int, required=True)
    le.add_argument("--samples", type=int, required=True)
    le.add_argument("--seed", type=int, required=True)
    le.add_argument("--eps", type=Fraction, help="fail (exit 1) when the error exceeds eps")

    for sp in sub.choices.values():
        _add_output(sp)
        sp.set_defaults(subparser=sp)
    return p


HANDLERS = {
    "analyze": cmd_analyze, "moments": cmd_moments, "trees": cmd_trees, "walk": cmd_walk,
    "entropy": cmd_entropy, "learn": cmd_learn,
}
WITH_PARSER = {"restrict": cmd_restrict, "bounds": cmd_bounds, "encode": cmd_encode,
               "scan": cmd_scan}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.max_arity is not None:
            set_max_arity(args.max_arity)
        if args.command in WITH_PARSER:
            result, ok = WITH_PARSER[args.command](args, args.subparser)
        else:
            result, ok = HANDLERS[args.command](args)
    except CapacityError as exc:
        print(f"lowsens: capacity error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"lowsens: error: {exc}", file=sys.stderr)
        return 2
    text = result if isinstance(result, str) else render(result, args.pretty)
    _emit(args, text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
