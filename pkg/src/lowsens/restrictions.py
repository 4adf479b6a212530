"""Random restrictions: the space R_{k,n}, restricted-function measures and
the probability sandwiches relating them to sensitivity and influence moments.

A restriction keeps k live coordinates and fixes the rest. Exhaustive
probabilities are exact fractions over all C(n,k) 2^(n-k) restrictions;
sampling is opt-in and always seeded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator

import numpy as np

from .core import BooleanFunction, CapacityError, mask_of, subcube_points
from .dtree import dt
from .fourier import degree, falling, influence_falling_moment
from .sensitivity import max_sensitivity, sensitivity_falling_moment, sensitivity_moment
from .tables import TABLE_MAX_ARITY, table
from .treewalk.trees import tree_sensitivity

EXHAUSTIVE_LOG2_CAP = 26
MEASURES = ("sensitivity", "degree", "dtdepth", "treesens")
THEOREMS = ("sk", "ik", "ts", "switching")
CONDITIONAL = ("dt_via_ts", "ts_dt", "ts_deg")


@dataclass(frozen=True)
class Restriction:
    """Live coordinates (ascending) plus a point holding the fixed bits (live bits zero)."""

    n: int
    live: tuple[int, ...]
    fixed: int

    def __post_init__(self):
        if any(not 1 <= c <= self.n for c in self.live) or list(self.live) != sorted(set(self.live)):
            raise ValueError("live coordinates must be distinct, ascending and within 1..n")
        if self.fixed & mask_of(self.live) or not 0 <= self.fixed < 1 << self.n:
            raise ValueError("fixed bits must be zero on live coordinates and fit in n bits")

    @property
    def k(self) -> int:
        return len(self.live)

    def points(self) -> np.ndarray:
        """The subcube C(rho); entry y has live coordinate j equal to bit j-1 of y."""
        return subcube_points(self.live, self.fixed)

    def to_string(self) -> str:
        """Coordinates 1..n left to right as '0', '1' or '*'."""
        live = set(self.live)
        return "".join("*" if i in live else str(self.fixed >> (i - 1) & 1)
                       for i in range(1, self.n + 1))

    @classmethod
    def from_string(cls, text: str) -> "Restriction":
        live = tuple(i + 1 for i, ch in enumerate(text) if ch == "*")
        if any(ch not in "01*" for ch in text):
            raise ValueError("restriction strings use only 0, 1 and *")
        fixed = sum(1 << i for i, ch in enumerate(text) if ch == "1")
        return cls(len(text), live, fixed)

    def to_json(self) -> dict:
        return {"n": self.n, "live": list(self.live), "fixed": self.fixed}


def space_size(n: int, k: int) -> int:
    return math.comb(n, k) << (n - k)


def _check_space(n: int, k: int) -> None:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    size = space_size(n, k)
    if size > 1 << EXHAUSTIVE_LOG2_CAP:
        raise CapacityError("|R_{k,n}|", size, 1 << EXHAUSTIVE_LOG2_CAP)


def _fixed_points(n: int, live) -> np.ndarray:
    """All fixed-bit points for a live set, in increasing order of the packed free bits."""
    free = [c for c in range(1, n + 1) if c not in set(live)]
    return subcube_points(free, 0)


def restrictions(n: int, k: int, mode: str = "exhaustive", count: int | None = None,
                 seed: int | None = None) -> Iterator[Restriction]:
    """Stream R_{k,n} exhaustively, or `count` uniform samples from a seeded generator."""
    if mode == "exhaustive":
        _check_space(n, k)
        for live in combinations(range(1, n + 1), k):
            for fx in _fixed_points(n, live).tolist():
                yield Restriction(n, live, fx)
    elif mode == "sample":
        lives, fixed = _sample_arrays(n, k, count, seed)
        for row, fx in zip(lives.tolist(), fixed.tolist()):
            yield Restriction(n, tuple(row), fx)
    else:
        raise ValueError(f"unknown mode {mode!r}")


def _sample_arrays(n, k, count, seed):
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if count is None or count < 1 or seed is None:
        raise ValueError("sample mode needs count >= 1 and a seed")
    rng = np.random.default_rng(seed)
    lives = np.sort(np.argsort(rng.random((count, n)), axis=1)[:, :k], axis=1) + 1
    bits = rng.integers(0, 2, size=(count, n), dtype=np.int64)
    fixed = (bits << np.arange(n)).sum(axis=1)
    livemask = (np.int64(1) << (lives - 1)).sum(axis=1) if k else np.zeros(count, dtype=np.int64)
    return lives.astype(np.int64), fixed & ~livemask


def apply(f: BooleanFunction, rho: Restriction) -> BooleanFunction:
    if rho.n != f.n:
        raise ValueError(f"restriction arity {rho.n} does not match function arity {f.n}")
    return BooleanFunction(rho.k, f.bits[rho.points()])


# -- measures over many restrictions ------------------------------------------------

def _measure_of(g: BooleanFunction, measure: str) -> int:
    if measure == "sensitivity":
        return max_sensitivity(g)
    if measure == "degree":
        return degree(g)
    if measure == "dtdepth":
        return dt(g)
    if measure == "treesens":
        return tree_sensitivity(g)
    raise ValueError(f"unknown measure {measure!r}; choose from {', '.join(MEASURES)}")


def _table_array(k: int, measure: str) -> np.ndarray:
    t = table(k)
    return {"sensitivity": t.s, "degree": t.deg, "dtdepth": t.dt, "treesens": t.ts}[measure]


def _indices(bits: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Lookup-table index of each restricted function; pts has shape (R, 2^k)."""
    w = np.int64(1) << np.arange(pts.shape[1], dtype=np.int64)
    return bits[pts].astype(np.int64) @ w


def measure_values(f: BooleanFunction, k: int, measure: str, mode: str = "exhaustive",
                   count: int | None = None, seed: int | None = None) -> np.ndarray:
    """The measure of f_rho for each restriction, in stream order."""
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}; choose from {', '.join(MEASURES)}")
    n = f.n
    if mode == "exhaustive":
        _check_space(n, k)
        if k <= TABLE_MAX_ARITY:
            lut = _table_array(k, measure)
            parts = []
            for live in combinations(range(1, n + 1), k):
                local = subcube_points(live, 0)
                pts = _fixed_points(n, live)[:, None] | local[None, :]
                parts.append(lut[_indices(f.bits, pts)])
            return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
        return np.array([_measure_of(apply(f, r), measure) for r in restrictions(n, k)],
                        dtype=np.int64)
    if mode == "sample":
        lives, fixed = _sample_arrays(n, k, count, seed)
        if k <= TABLE_MAX_ARITY:
            y = np.arange(1 << k, dtype=np.int64)
            sel = (y[None, :, None] >> np.arange(k)[None, None, :]) & 1
            local = (sel << (lives[:, None, :] - 1)).sum(axis=2)
            pts = fixed[:, None] | local
            return _table_array(k, measure)[_indices(f.bits, pts)]
        return np.array([_measure_of(apply(f, r), measure)
                         for r in restrictions(n, k, "sample", count, seed)], dtype=np.int64)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class RestrictionStats:
    measure: str
    k: int
    j: int
    hits: int
    samples: int
    exact: bool

    @property
    def probability(self) -> Fraction:
        return Fraction(self.hits, self.samples)

    @property
    def stderr(self) -> float | None:
        if self.exact:
            return None
        p = self.hits / self.samples
        return math.sqrt(p * (1 - p) / self.samples)

    def to_json(self) -> dict:
        p = self.probability
        out = {"measure": self.measure, "k": self.k, "j": self.j, "samples": self.samples,
               "exact": self.exact}
        if self.exact:
            out["probability"] = str(p)
        else:
            out["estimate"] = float(p)
            out["stderr"] = self.stderr
        return out


def restriction_stats(f: BooleanFunction, k: int, j: int, measure: str,
                      mode: str = "exhaustive", count: int | None = None,
                      seed: int | None = None) -> RestrictionStats:
    """Pr over rho of measure(f_rho) >= j."""
    vals = measure_values(f, k, measure, mode, count, seed)
    return RestrictionStats(measure, k, j, int(np.count_nonzero(vals >= j)), int(vals.size),
                            mode == "exhaustive")


# -- bound sandwiches -------------------------------------------------------------------

@dataclass(frozen=True)
class BoundRow:
    n: int
    k: int
    j: int
    theorem: str
    measure: str
    lower: Fraction
    observed: Fraction
    upper: Fraction | None
    passed: bool | None  # None for report-only rows

    def to_csv_row(self) -> list[str]:
        return [str(self.n), str(self.k), str(self.j), f"{self.theorem}:{self.measure}",
                _frac(self.lower), _frac(self.observed),
                "" if self.upper is None else _frac(self.upper),
                "conditional" if self.passed is None else ("pass" if self.passed else "FAIL")]

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "j": self.j, "theorem": self.theorem,
                "measure": self.measure, "lower": _frac(self.lower),
                "observed": _frac(self.observed),
                "upper": None if self.upper is None else _frac(self.upper),
                "pass": "conditional" if self.passed is None else self.passed}


CSV_HEADER = ["n", "k", "j", "measure", "lower", "observed", "upper", "pass"]


def _frac(q: Fraction) -> str:
    return str(q)


def ts_upper(n: int, k: int, j: int, s_pow_j: Fraction) -> Fraction:
    return Fraction(math.comb(k, j) * 2 ** (k + 2 * j)) * s_pow_j / math.comb(n, j)


def bound_check(f: BooleanFunction, k: int, j: int, theorem: str,
                values: dict[str, np.ndarray] | None = None) -> BoundRow:
    """Exact sandwich for one theorem at (k, j) over all of R_{k,n}.

    `values` may carry precomputed measure_values arrays keyed by measure.
    """
    n = f.n
    if not 1 <= j <= k <= n:
        raise ValueError(f"need 1 <= j <= k <= n, got j={j}, k={k}, n={n}")
    values = {} if values is None else values

    def prob(measure, thresh):
        if measure not in values:
            values[measure] = measure_values(f, k, measure)
        v = values[measure]
        return Fraction(int(np.count_nonzero(v >= thresh)), int(v.size))

    nfj = falling(n, j)
    if theorem == "sk":
        sff = sensitivity_falling_moment(f, j)
        lo = sff / nfj
        hi = 2 ** k * sff * math.comb(k, j) / nfj
        obs = prob("sensitivity", j)
        return BoundRow(n, k, j, theorem, "sensitivity", lo, obs, hi, lo <= obs <= hi)
    if theorem == "ik":
        iff = influence_falling_moment(f, k)
        nfk = falling(n, k)
        lo = iff / nfk
        hi = Fraction(2 ** (2 * k - 2)) * iff / nfk
        obs = prob("degree", k)
        return BoundRow(n, k, k, theorem, "degree", lo, obs, hi, lo <= obs <= hi)
    if theorem == "ts":
        lo = sensitivity_falling_moment(f, j) / nfj
        hi = ts_upper(n, k, j, sensitivity_moment(f, j))
        obs = prob("treesens", j)
        return BoundRow(n, k, j, theorem, "treesens", lo, obs, hi, lo <= obs <= hi)
    if theorem == "switching":
        hi = Fraction((32 * max_sensitivity(f)) ** k, math.comb(n, k))
        obs = prob("dtdepth", k)
        return BoundRow(n, k, k, theorem, "dtdepth", Fraction(0), obs, hi, obs <= hi)
    if theorem == "dt_via_ts":
        # dt >= j forces ts >= ceil(sqrt(2j) - 1); reuse the tree bound at that size
        lo = sensitivity_falling_moment(f, j) / nfj
        jj = max(1, math.ceil(math.sqrt(2 * j) - 1))
        hi = ts_upper(n, k, jj, sensitivity_moment(f, jj))
        return BoundRow(n, k, j, theorem, "dtdepth", lo, prob("dtdepth", j), hi, None)
    if theorem in ("ts_dt", "ts_deg"):
        measure = "dtdepth" if theorem == "ts_dt" else "degree"
        lo = sensitivity_falling_moment(f, j) / nfj if measure == "dtdepth" else Fraction(0)
        hi = ts_upper(n, k, j, sensitivity_moment(f, j))
        return BoundRow(n, k, j, theorem, measure, lo, prob(measure, j), hi, None)
    raise ValueError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS + CONDITIONAL)}")


def sandwich_rows(f: BooleanFunction, kmax: int | None = None, theorems=THEOREMS) -> list[BoundRow]:
    """Every requested sandwich for 1 <= j <= k <= kmax (default min(n, 4))."""
    n = f.n
    kmax = min(n, TABLE_MAX_ARITY) if kmax is None else kmax
    rows = []
    for k in range(1, kmax + 1):
        values: dict[str, np.ndarray] = {}
        for th in theorems:
            if th in ("ik", "switching"):
                rows.append(bound_check(f, k, k, th, values))
            else:
                for j in range(1, k + 1):
                    rows.append(bound_check(f, k, j, th, values))
    return rows


__all__ = ["Restriction", "RestrictionStats", "BoundRow", "CSV_HEADER", "MEASURES", "THEOREMS",
           "CONDITIONAL", "restrictions", "apply", "measure_values", "restriction_stats",
           "bound_check", "sandwich_rows", "space_size", "ts_upper"]
