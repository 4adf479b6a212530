"""Scanners and checked inequalities.

`scan_all` evaluates a set of checks on every function of a given arity
(vectorised through the lookup tables for n <= 4), on a seeded sample, or
over an index range with checkpointing for n = 5. Asserted checks are
proven statements; report checks (open questions, measured constants)
are listed but never count as failures.

Partial reports from fixed index blocks merge left to right, so a scan's
JSON does not depend on how many workers computed it.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import BooleanFunction, CapacityError, check_cap, dim, popcounts, to_hex
from .dtree import dt
from .fourier import (degree, influence_falling_moment, influence_moment, level_sums,
                      spectral_entropy, spectrum, tail_weight, total_influence)
from .parallel import pmap
from .restrictions import sandwich_rows
from .sensitivity import (component_dimension, max_sensitivity, sensitivity_moment,
                          sensitivity_total_power, sensitivity_vector)
from .tables import TABLE_MAX_ARITY, table
from .treewalk.trees import (classify_tree, count_sensitive_trees, iter_sensitive_trees,
                             make_tree, non_maximal_shift, tree_sensitivity)
from .treewalk.walks import (full_dim_proper_walk, is_proper_walk, proper_walk_3n,
                             walk_length_bound)

FLOAT_SLACK = 1e-9
BLOCK = 4096

# name -> asserted (False: report only)
CHECKS = {
    "moments": True,        # I^1 = s^1 and I^2 = s^2
    "moments_high": False,  # I^k vs s^k for k = 3, 4, with the largest ratio
    "degts": True,          # deg = n implies ts = n
    "ts_depth": True,       # ts (ts + 1) / 2 >= dt
    "chain": True,          # cdim >= ts >= s, deg <= dt <= dim, s <= dt
    "tree_counts": True,    # tree counts <= 4^j sum_x s(f,x)^j
    "ts_dominates": False,  # ts >= dt and ts >= deg
    "sandwich": True,       # restriction sandwiches for every 1 <= j <= k <= min(n, 4)
    "entropy": True,        # level-entropy bound and per-level L1 inequality
    "orchard": True,        # maximum trees are orchards, orchards meet, non-orchards shift
    "walks": True,          # 3n walk and full-dimension walk constructions
}
CHECK_SETS = {
    "core": ("moments", "moments_high", "degts", "ts_depth", "chain", "tree_counts",
             "ts_dominates"),
    "all": ("moments", "moments_high", "degts", "ts_depth", "chain", "tree_counts",
            "ts_dominates", "sandwich", "entropy"),
}
LONG_RUN_CHECKS = ("moments", "degts")


def parse_checks(text: str) -> tuple[str, ...]:
    out: list[str] = []
    for part in text.split(","):
        part = part.strip()
        names = CHECK_SETS.get(part, (part,))
        for name in names:
            if name not in CHECKS:
                raise ValueError(f"unknown check {name!r}; choose from "
                                 f"{', '.join(list(CHECK_SETS) + list(CHECKS))}")
            if name not in out:
                out.append(name)
    return tuple(out)


def _q(x: Fraction) -> str:
    return str(x)


# -- partial reports ----------------------------------------------------------------

@dataclass
class CheckTally:
    asserted: bool
    evaluated: int = 0
    violations: int = 0
    witness: str | None = None
    extra: dict = field(default_factory=dict)

    def hit(self, count: int, first_hex: str | None) -> None:
        self.violations += count
        if count and self.witness is None:
            self.witness = first_hex

    def merge(self, other: "CheckTally") -> None:
        self.evaluated += other.evaluated
        self.hit(other.violations, other.witness)
        for key, val in other.extra.items():
            self.extra[key] = _merge_extra(self.extra.get(key), val)

    def to_json(self) -> dict:
        out = {"asserted": self.asserted, "evaluated": self.evaluated,
               "violations": self.violations, "witness": self.witness}
        for key in sorted(self.extra):
            out[key] = _extra_json(self.extra[key])
        return out


# extras are ("count", int), ("first", witness) or ("max", value, witness);
# ties keep the earlier block
def _merge_extra(a, b):
    if a is None:
        return b
    kind = a[0]
    if kind == "count":
        return ("count", a[1] + b[1])
    if kind == "first":
        return a
    if kind == "max":
        return a if a[1] >= b[1] else b
    raise AssertionError(kind)


def _extra_json(e):
    if e[0] in ("count", "first"):
        return e[1]
    val = _q(e[1]) if isinstance(e[1], Fraction) else e[1]
    return {"value": val, "witness": e[2]}


@dataclass
class ScanReport:
    n: int
    mode: str
    scanned: int = 0
    checks: dict[str, CheckTally] = field(default_factory=dict)
    next_index: int | None = None

    def merge(self, other: "ScanReport") -> None:
        self.scanned += other.scanned
        for name, tally in other.checks.items():
            if name in self.checks:
                self.checks[name].merge(tally)
            else:
                self.checks[name] = tally

    @property
    def failures(self) -> int:
        return sum(t.violations for t in self.checks.values() if t.asserted)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        out = {"n": self.n, "mode": self.mode, "scanned": self.scanned,
               "passed": self.passed,
               "checks": {name: self.checks[name].to_json() for name in self.checks}}
        if self.next_index is not None:
            out["next_index"] = self.next_index
        return out


def _new_report(n, mode, checks) -> ScanReport:
    return ScanReport(n, mode, 0, {c: CheckTally(CHECKS[c] and not (c == "degts" and n > 4))
                                   for c in checks})


def _hex_of_index(n: int, F: int) -> str:
    return to_hex(BooleanFunction.from_int(n, F))


# -- vectorised block scan for n <= 4 --------------------------------------------------

def _block_scan(args) -> ScanReport:
    n, indices, checks, mode = args
    T = table(n)
    Fs = np.asarray(indices, dtype=np.int64)
    rep = _new_report(n, mode, checks)
    rep.scanned = int(Fs.size)
    if Fs.size == 0:
        return rep
    size = 1 << n
    x = np.arange(size)
    bits = T.bits[Fs]
    sens = T.sens[Fs]
    had = 1 - 2 * (popcounts(n)[np.bitwise_and.outer(x, x)] & 1)
    coeffs = (1 - 2 * bits.astype(np.int64)) @ had
    lvl = popcounts(n)
    onehot = (lvl[:, None] == np.arange(n + 1)[None, :]).astype(np.int64)
    L = (coeffs ** 2) @ onehot  # level sums scaled by 4^n
    s, deg, dtd, ts, cdim = T.s[Fs], T.deg[Fs], T.dt[Fs], T.ts[Fs], T.cdim[Fs]
    levels = np.arange(n + 1, dtype=np.int64)

    def first(mask):
        idx = np.flatnonzero(mask)
        return _hex_of_index(n, int(Fs[idx[0]])) if idx.size else None

    def tally(name, bad):
        t = rep.checks[name]
        t.evaluated += int(Fs.size)
        t.hit(int(np.count_nonzero(bad)), first(bad))

    if "moments" in checks:
        bad = np.zeros(Fs.size, dtype=bool)
        for k in (1, 2):
            ik = L @ levels ** k
            sk = (sens ** k).sum(axis=1) << n
            bad |= ik != sk
        tally("moments", bad)
    if "moments_high" in checks:
        t = rep.checks["moments_high"]
        t.evaluated += int(Fs.size)
        for k in (3, 4):
            ik = L @ levels ** k
            sk = (sens ** k).sum(axis=1) << n
            neq = ik != sk
            t.extra[f"I{k}_ne_s{k}"] = ("count", int(np.count_nonzero(neq)))
            first_neq = first(neq)
            if first_neq is not None:
                t.extra.setdefault(f"I{k}_ne_s{k}_witness", ("first", first_neq))
            ratio = np.where(sk > 0, ik / np.maximum(sk, 1), 0.0)
            top = ratio.max()
            cand = np.flatnonzero(ratio >= top * (1 - 1e-12))
            best = max((Fraction(int(ik[i]), int(sk[i])) if sk[i] else Fraction(0), -int(i))
                       for i in cand)
            i = -best[1]
            t.extra[f"ratio{k}_max"] = ("max", best[0], _hex_of_index(n, int(Fs[i])))
    if "degts" in checks:
        tally("degts", (deg == n) & (ts != n))
    if "ts_depth" in checks:
        tally("ts_depth", ts * (ts + 1) < 2 * dtd)
    if "chain" in checks:
        smask = np.zeros(Fs.size, dtype=np.int64)
        for i in range(n):
            smask |= (bits != bits[:, x ^ (1 << i)]).any(axis=1).astype(np.int64) << i
        dims = popcounts(n)[smask] if n else np.zeros(Fs.size, dtype=np.int64)
        tally("chain", (cdim < ts) | (ts < s) | (deg > dtd) | (dtd > dims) | (s > dtd))
    if "tree_counts" in checks:
        bad = np.zeros(Fs.size, dtype=bool)
        counts = T.tree_counts[Fs]
        for j in range(1, min(n, 4) + 1):
            bad |= counts[:, j] > 4 ** j * (sens ** j).sum(axis=1)
        tally("tree_counts", bad)
    if "ts_dominates" in checks:
        t = rep.checks["ts_dominates"]
        t.evaluated += int(Fs.size)
        below = ts < dtd
        t.hit(int(np.count_nonzero(below)), first(below))
        t.extra["ts_lt_deg"] = ("count", int(np.count_nonzero(ts < deg)))
    if "sandwich" in checks:
        bad = _sandwich_block(n, bits, sens, L)
        tally("sandwich", bad)
    if "entropy" in checks:
        _entropy_block(rep, n, Fs, coeffs, L, s, first)
    for name in ("orchard", "walks"):
        if name in checks:
            for F in Fs.tolist():
                _per_function_check(rep, BooleanFunction.from_int(n, F), name)
    return rep


def _sandwich_block(n, bits, sens, L) -> np.ndarray:
    """Integer cross-multiplied sandwich checks for every row (n <= 4)."""
    from itertools import combinations
    from .core import subcube_points
    from .fourier import falling
    B = bits.shape[0]
    bad = np.zeros(B, dtype=bool)
    lvl = np.arange(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        Tk = table(k)
        w = np.int64(1) << np.arange(1 << k, dtype=np.int64)
        cols = []
        for live in combinations(range(1, n + 1), k):
            free = [c for c in range(1, n + 1) if c not in live]
            pts = subcube_points(free, 0)[:, None] | subcube_points(live, 0)[None, :]
            cols.append(bits[:, pts].astype(np.int64) @ w)
        idx = np.concatenate(cols, axis=1)  # (B, R)
        R = idx.shape[1]
        s_r, deg_r, dt_r, ts_r = Tk.s[idx], Tk.deg[idx], Tk.dt[idx], Tk.ts[idx]
        smax = sens.max(axis=1)
        # switching: hits * C(n,k) <= (32 s)^k * R
        hits = (dt_r >= k).sum(axis=1)
        bad |= hits * math.comb(n, k) > (32 * smax) ** k * R
        # ik: Iff^k scaled by 4^n is Q
        Q = L @ np.array([falling(int(v), k) for v in lvl], dtype=np.int64)
        hits = (deg_r >= k).sum(axis=1)
        lhs = hits * (4 ** n) * falling(n, k)
        bad |= (lhs < Q * R) | (lhs > 2 ** (2 * k - 2) * Q * R)
        for j in range(1, k + 1):
            Sff = np.array([falling(v, j) for v in range(n + 1)], dtype=np.int64)[sens].sum(axis=1)
            P = (sens ** j).sum(axis=1)
            nfj = falling(n, j)
            hits = (s_r >= j).sum(axis=1)
            lhs = hits * (2 ** n) * nfj
            bad |= (lhs < Sff * R) | (lhs > 2 ** k * math.comb(k, j) * Sff * R)
            hits = (ts_r >= j).sum(axis=1)
            lhs = hits * (2 ** n) * nfj
            bad |= lhs < Sff * R
            lhs = hits * (2 ** n) * math.comb(n, j)
            bad |= lhs > math.comb(k, j) * 2 ** (k + 2 * j) * P * R
    return bad


def _entropy_block(rep, n, Fs, coeffs, L, s, first) -> None:
    t = rep.checks["entropy"]
    t.evaluated += int(Fs.size)
    W = L / float(4 ** n)
    lvl = np.arange(n + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        lvl_ent = np.where(W > 0, -W * np.log2(np.where(W > 0, W, 1)), 0.0).sum(axis=1)
        I = W @ lvl
        bad = lvl_ent > 3 * I + FLOAT_SLACK
        sq = coeffs.astype(np.float64) ** 2 / float(4 ** n)
        ent = np.where(sq > 0, -sq * np.log2(np.where(sq > 0, sq, 1)), 0.0)
        absq = np.abs(coeffs).astype(np.float64) / float(1 << n)
        onehot = (popcounts(n)[:, None] == lvl[None, :]).astype(np.float64)
        lhs = ent @ onehot
        l1 = absq @ onehot
        rhs = np.where(W > 0, 2 * W * np.log2(np.where(l1 > 0, l1, 1))
                       + 2 * W * np.log2(1 / np.where(W > 0, W, 1)), 0.0)
        bad |= (lhs > rhs + FLOAT_SLACK).any(axis=1)
        H = ent.sum(axis=1)
        margin = H - 2 * I * np.log2(np.maximum(s, 2))
        const = np.where(I > 0, margin / np.where(I > 0, I, 1), -np.inf)
    t.hit(int(np.count_nonzero(bad)), first(bad))
    i = int(np.argmax(const))
    if np.isfinite(const[i]):
        t.extra["log_s_constant_max"] = ("max", float(const[i]), _hex_of_index(n, int(Fs[i])))


# -- per-function path (any n within caps) -------------------------------------------------

def _per_function_check(rep: ScanReport, f: BooleanFunction, name: str) -> None:
    t = rep.checks[name]
    t.evaluated += 1
    n = f.n
    bad = False
    if name == "moments":
        bad = any(influence_moment(f, k) != sensitivity_moment(f, k) for k in (1, 2))
    elif name == "moments_high":
        for k in (3, 4):
            neq = influence_moment(f, k) != sensitivity_moment(f, k)
            t.extra[f"I{k}_ne_s{k}"] = _merge_extra(t.extra.get(f"I{k}_ne_s{k}"), ("count", int(neq)))
            if neq:
                t.extra.setdefault(f"I{k}_ne_s{k}_witness", ("first", to_hex(f)))
            r = moment_ratio(f, k)
            t.extra[f"ratio{k}_max"] = _merge_extra(t.extra.get(f"ratio{k}_max"), ("max", r, to_hex(f)))
    elif name == "degts":
        bad = degree(f) == n and tree_sensitivity(f) != n
    elif name == "ts_depth":
        ts = tree_sensitivity(f)
        bad = ts * (ts + 1) < 2 * dt(f)
    elif name == "chain":
        s, ts, d, g = max_sensitivity(f), tree_sensitivity(f), dt(f), degree(f)
        bad = not (component_dimension(f) >= ts >= s and g <= d <= dim(f) and s <= d)
    elif name == "tree_counts":
        bad = any(count_sensitive_trees(f, j) > 4 ** j * sensitivity_total_power(f, j)
                  for j in range(1, min(n, 4) + 1))
    elif name == "ts_dominates":
        ts = tree_sensitivity(f)
        bad = ts < dt(f)
        t.extra["ts_lt_deg"] = _merge_extra(t.extra.get("ts_lt_deg"), ("count", int(ts < degree(f))))
    elif name == "sandwich":
        bad = not all(r.passed for r in sandwich_rows(f, min(n, TABLE_MAX_ARITY)))
    elif name == "entropy":
        e = entropy_checks(f)
        bad = not (e.level_entropy_pass and e.per_level_pass)
        if e.log_s_constant is not None:
            t.extra["log_s_constant_max"] = _merge_extra(t.extra.get("log_s_constant_max"),
                                                      ("max", e.log_s_constant, to_hex(f)))
    elif name == "orchard":
        bad = not orchard_checks(f)
    elif name == "walks":
        bad = not walk_checks(f)
    if bad:
        t.hit(1, to_hex(f))


def _functions_scan(args) -> ScanReport:
    n, tables, checks, mode = args
    rep = _new_report(n, mode, checks)
    for row in tables:
        f = BooleanFunction(n, row)
        rep.scanned += 1
        for name in checks:
            _per_function_check(rep, f, name)
    return rep


def orchard_checks(f: BooleanFunction) -> bool:
    """Maximum trees are orchards; orchards pairwise share a label; non-orchards shift to non-maximal."""
    m = tree_sensitivity(f)
    if m == 0:
        return True
    orchards = []
    for vs, lm in iter_sensitive_trees(f):
        t = make_tree(f, vs)
        cls = classify_tree(f, t)
        if cls.orchard is None:
            continue
        if len(vs) - 1 == m and not cls.orchard:
            return False
        if cls.orchard:
            orchards.append(lm)
        elif non_maximal_shift(f, t) is None:
            return False
    return all(a & b for i, a in enumerate(orchards) for b in orchards[i + 1:])


def walk_checks(f: BooleanFunction) -> bool:
    n = f.n
    if n == 0:
        return True
    ok = True
    if dt(f) == n:
        w = proper_walk_3n(f)
        ok &= is_proper_walk(f, w) and w.dimension == n and w.length <= 3 * n
    if dim(f) == n:
        w = full_dim_proper_walk(f)
        ok &= is_proper_walk(f, w) and w.dimension == n and w.length <= walk_length_bound(n)
    return bool(ok)


# -- scan entry points ----------------------------------------------------------------

def scan_all(n: int, checks=CHECK_SETS["core"], workers: int | None = None) -> ScanReport:
    """Every function of arity n <= 4."""
    check_cap("exhaustive scan arity", n, TABLE_MAX_ARITY)
    checks = tuple(checks)
    total = 1 << (1 << n)
    tasks = [(n, np.arange(lo, min(lo + BLOCK, total)), checks, "exhaustive")
             for lo in range(0, total, BLOCK)]
    rep = _new_report(n, "exhaustive", checks)
    for part in pmap(_block_scan, tasks, workers):
        rep.merge(part)
    return rep


def random_tables(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(count, 1 << n), dtype=np.uint8)


def scan_sample(n: int, count: int, seed: int, checks=CHECK_SETS["core"],
                workers: int | None = None, chunk: int = 64) -> ScanReport:
    """`count` seeded uniformly random functions of arity n."""
    check_cap("sampled scan arity", n, 6)
    checks = tuple(checks)
    tabs = random_tables(n, count, seed)
    rep = _new_report(n, "sample", checks)
    if n <= TABLE_MAX_ARITY:
        w = np.int64(1) << np.arange(1 << n, dtype=np.int64)
        idx = tabs.astype(np.int64) @ w
        tasks = [(n, idx[lo:lo + BLOCK], checks, "sample") for lo in range(0, count, BLOCK)]
        parts = pmap(_block_scan, tasks, workers)
    else:
        tasks = [(n, tabs[lo:lo + chunk], checks, "sample") for lo in range(0, count, chunk)]
        parts = pmap(_functions_scan, tasks, workers)
    for part in parts:
        rep.merge(part)
    return rep


# -- n = 5 long run ------------------------------------------------------------------------

LONG_BLOCK = 1 << 14


def _long_block(args) -> ScanReport:
    lo, hi, checks = args
    n = 5
    rep = _new_report(n, "long-run", checks)
    Fs = np.arange(lo, hi, dtype=np.int64)
    rep.scanned = int(Fs.size)
    x = np.arange(32)
    bits = ((Fs[:, None] >> x) & 1).astype(np.uint8)
    sens = np.zeros(bits.shape, dtype=np.int64)
    for i in range(n):
        sens += bits != bits[:, x ^ (1 << i)]
    had = 1 - 2 * (popcounts(n)[np.bitwise_and.outer(x, x)] & 1)
    coeffs = (1 - 2 * bits.astype(np.int64)) @ had

    def first(mask):
        idx = np.flatnonzero(mask)
        return _hex_of_index(n, int(Fs[idx[0]])) if idx.size else None

    if "moments" in checks:
        lvl = popcounts(n)
        bad = np.zeros(Fs.size, dtype=bool)
        for k in (1, 2):
            bad |= (coeffs ** 2) @ (lvl ** k) != (sens ** k).sum(axis=1) << n
        t = rep.checks["moments"]
        t.evaluated += int(Fs.size)
        t.hit(int(np.count_nonzero(bad)), first(bad))
    if "degts" in checks:
        full = coeffs[:, 31] != 0
        rows = np.flatnonzero(full)
        span = spanning_tree_exists(bits[rows], n) if rows.size else np.zeros(0, dtype=bool)
        bad = np.zeros(Fs.size, dtype=bool)
        bad[rows[~span]] = True
        t = rep.checks["degts"]
        t.evaluated += int(Fs.size)
        t.hit(int(np.count_nonzero(bad)), first(bad))
    return rep


def spanning_tree_exists(bits: np.ndarray, n: int) -> np.ndarray:
    """Per row, whether a sensitive tree using all n directions exists.

    Q[v][A] says some sensitive tree rooted at v has label set exactly A.
    Distinct labels make any such tree induced, so A is built by hanging
    a branch (edge label i to v xor e_i with label set B) off a tree with
    labels A minus ({i} and B).
    """
    size = 1 << n
    x = np.arange(size)
    B = bits.shape[0]
    sens = [bits != bits[:, x ^ (1 << i)] for i in range(n)]
    Q = np.zeros((size, size, B), dtype=bool)  # Q[A, v]
    Q[0, :, :] = True
    order = sorted(range(1, size), key=lambda a: (bin(a).count("1"), a))
    for A in order:
        low = A & -A
        for v in range(size):
            acc = np.zeros(B, dtype=bool)
            # the branch holding the lowest label of A hangs off v through some i in A
            for i in range(n):
                bi = 1 << i
                if not A & bi:
                    continue
                rest = A ^ bi
                sub = rest
                while True:
                    # branch labels: bi plus sub; it must contain the lowest label
                    if (bi | sub) & low:
                        acc |= sens[i][:, v] & Q[sub, v ^ bi] & Q[rest ^ sub, v]
                    if sub == 0:
                        break
                    sub = (sub - 1) & rest
            Q[A, v] = acc
    return Q[size - 1].any(axis=0)


def scan_long_run(checkpoint: str, start: int = 0, stop: int | None = None,
                  checks=LONG_RUN_CHECKS, workers: int | None = None,
                  blocks_per_save: int = 8) -> ScanReport:
    """Exhaustive n = 5 scan over indices [start, stop), resumable from a checkpoint file."""
    n = 5
    total = 1 << 32
    stop = total if stop is None else min(stop, total)
    checks = tuple(c for c in checks if c in LONG_RUN_CHECKS)
    rep = _new_report(n, "long-run", checks)
    nxt = start
    if os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            saved = json.load(fh)
        if saved.get("checks") == list(checks) and saved.get("start") == start:
            nxt = saved["next_index"]
            rep = _report_from_json(saved["report"], checks)
    while nxt < stop:
        hi = min(stop, nxt + LONG_BLOCK * blocks_per_save)
        tasks = [(lo, min(hi, lo + LONG_BLOCK), checks) for lo in range(nxt, hi, LONG_BLOCK)]
        for part in pmap(_long_block, tasks, workers):
            rep.merge(part)
        nxt = hi
        rep.next_index = nxt
        tmp = checkpoint + ".tmp"
        with open(tmp, "w") as fh:
            json.dump({"start": start, "checks": list(checks), "next_index": nxt,
                       "report": rep.to_json()}, fh, sort_keys=True)
        os.replace(tmp, checkpoint)
    rep.next_index = nxt
    return rep


def _report_from_json(obj, checks) -> ScanReport:
    rep = ScanReport(obj["n"], obj["mode"], obj["scanned"])
    for name in checks:
        c = obj["checks"][name]
        rep.checks[name] = CheckTally(c["asserted"], c["evaluated"], c["violations"], c["witness"])
    return rep


# -- single-function inequalities ------------------------------------------------------------

def moment_ratio(f: BooleanFunction, k: int) -> Fraction:
    """I^k / s^k, or 0 when both vanish."""
    ik = influence_moment(f, k)
    sk = sensitivity_moment(f, k)
    if sk == 0:
        return Fraction(0)
    return ik / sk


@dataclass(frozen=True)
class TailCheck:
    k: int
    iffk: Fraction
    bound: int
    threshold: int
    tail: Fraction
    passed: bool

    def to_json(self) -> dict:
        return {"k": self.k, "iffk": _q(self.iffk), "bound": self.bound,
                "threshold": self.threshold, "tail_at_64sk": _q(self.tail),
                "pass": self.passed}


def tail_bound_check(f: BooleanFunction, k: int) -> TailCheck:
    """Iff^k <= (32 s)^k k! and Fourier weight at levels >= 64 s k is at most 2^-k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    s = max_sensitivity(f)
    iffk = influence_falling_moment(f, k)
    bound = (32 * s) ** k * math.factorial(k)
    t = max(64 * s * k, 1)  # constants: the level-0 coefficient is not tail mass
    tail = tail_weight(f, t) if t <= f.n else Fraction(0)
    return TailCheck(k, iffk, bound, t, tail, iffk <= bound and tail <= Fraction(1, 2 ** k))


def level_entropy_bound(ps) -> tuple[float, float]:
    """(sum p_i log(1/p_i), 2p log(sum sqrt p_i) + 2p log(1/p)) in bits, p = sum p_i."""
    ps = [float(p) for p in ps if p > 0]
    if not ps:
        return 0.0, 0.0
    p = math.fsum(ps)
    lhs = math.fsum(q * math.log2(1 / q) for q in ps)
    rhs = 2 * p * math.log2(math.fsum(math.sqrt(q) for q in ps)) + 2 * p * math.log2(1 / p)
    return lhs, rhs


@dataclass(frozen=True)
class EntropyCheck:
    H: float
    I: Fraction
    level_entropy: float
    level_entropy_pass: bool
    per_level_pass: bool
    log_s_margin: float | None
    log_s_constant: float | None

    def to_json(self) -> dict:
        return {"H": self.H, "I": _q(self.I), "level_entropy": self.level_entropy,
                "level_entropy_pass": self.level_entropy_pass,
                "per_level_pass": self.per_level_pass,
                "log_s_margin": self.log_s_margin, "log_s_constant": self.log_s_constant}


def entropy_checks(f: BooleanFunction) -> EntropyCheck:
    n = f.n
    sums = level_sums(f)
    denom = 4 ** n
    W = [Fraction(v, denom) for v in sums]
    lvl_ent = math.fsum(float(w) * math.log2(1 / float(w)) for w in W if w > 0)
    I = total_influence(f)
    level_entropy_pass = lvl_ent <= 3 * float(I) + FLOAT_SLACK
    coeffs = spectrum(f).coeffs
    lvl = popcounts(n)
    per_level_pass = True
    for k in range(n + 1):
        sq = coeffs[lvl == k].astype(np.float64) ** 2 / float(denom)
        lhs, rhs = level_entropy_bound(sq)
        if lhs > rhs + FLOAT_SLACK:
            per_level_pass = False
    H = spectral_entropy(f)
    s = max_sensitivity(f)
    margin = const = None
    if s >= 1:
        margin = H - 2 * float(I) * math.log2(max(s, 2))
        const = margin / float(I)
    return EntropyCheck(H, I, lvl_ent, level_entropy_pass, per_level_pass, margin, const)


@dataclass(frozen=True)
class DnfCheck:
    k: int
    w: int
    sk: Fraction
    sk_lower: Fraction
    sk_pass: bool
    tail: list
    tail_pass: bool
    c_measured: float

    def to_json(self) -> dict:
        return {"k": self.k, "w": self.w, "sk": _q(self.sk), "sk_lower": _q(self.sk_lower),
                "sk_pass": self.sk_pass, "tail": self.tail, "tail_pass": self.tail_pass,
                "c_measured": self.c_measured}


def dnf_checks(f: BooleanFunction, k: int, w: int) -> DnfCheck:
    """s^k >= (kw/2)^k for the k x w OR of parities, sensitivity tail of a width-w DNF,
    and the c with s^k = (c k w)^k."""
    n = f.n
    sk = sensitivity_moment(f, k)
    lower = Fraction(k * w, 2) ** k
    sv = sensitivity_vector(f)
    counts = np.bincount(sv, minlength=n + 2)
    tail_rows = []
    ok = True
    for s0 in range(w + 1, n + 1):
        hits = int(counts[s0:].sum())
        # Pr = hits / 2^n <= 2^(-s0/w)  <=>  hits^w * 2^s0 <= 2^(n w)
        good = hits ** w * 2 ** s0 <= 2 ** (n * w)
        ok &= good
        tail_rows.append({"s0": s0, "prob": _q(Fraction(hits, 1 << n)),
                          "bound": f"2^(-{s0}/{w})", "pass": good})
    c = float(sk) ** (1 / k) / (k * w)
    return DnfCheck(k, w, sk, lower, sk >= lower, tail_rows, bool(ok), c)


__all__ = ["CHECKS", "CHECK_SETS", "ScanReport", "CheckTally", "parse_checks", "scan_all",
           "scan_sample", "scan_long_run", "spanning_tree_exists", "moment_ratio",
           "tail_bound_check", "TailCheck", "entropy_checks", "EntropyCheck",
           "level_entropy_bound", "dnf_checks", "DnfCheck", "orchard_checks", "walk_checks",
           "random_tables", "CapacityError"]
