"""Pointwise sensitivity, sensitivity moments and the sensitive-edge graph."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .core import BooleanFunction, np_popcount
from .fourier import falling


@lru_cache(maxsize=64)
def _sens(f: BooleanFunction) -> np.ndarray:
    c = f.cube()
    out = np.zeros(c.shape, dtype=np.int64)
    for axis in range(f.n):
        out += c != np.flip(c, axis=axis)
    out = out.reshape(-1)
    out.flags.writeable = False
    return out


def sensitivity_vector(f: BooleanFunction) -> np.ndarray:
    """s(f, x) for every x, indexed by point."""
    return _sens(f)


def point_sensitivity(f: BooleanFunction, x: int) -> int:
    if not 0 <= x < f.size:
        raise IndexError(f"point {x} outside {{0,1}}^{f.n}")
    return int(_sens(f)[x])


def is_sensitive(f: BooleanFunction, x: int, i: int) -> bool:
    """True iff f(x) != f(x xor e_i) for 1-based coordinate i."""
    return bool(f.bits[x] != f.bits[x ^ (1 << (i - 1))])


def sensitive_coords(f: BooleanFunction, x: int) -> list[int]:
    """Sensitive coordinates of x in increasing order."""
    b = f.bits
    return [i + 1 for i in range(f.n) if b[x] != b[x ^ (1 << i)]]


def max_sensitivity(f: BooleanFunction) -> int:
    return int(_sens(f).max()) if f.n else 0


def sensitivity_moment(f: BooleanFunction, k: int) -> Fraction:
    s = _sens(f)
    counts = np.bincount(s, minlength=f.n + 1)
    return Fraction(sum(int(c) * v ** k for v, c in enumerate(counts)), f.size)


def sensitivity_falling_moment(f: BooleanFunction, k: int) -> Fraction:
    s = _sens(f)
    counts = np.bincount(s, minlength=f.n + 1)
    return Fraction(sum(int(c) * falling(v, k) for v, c in enumerate(counts)), f.size)


def sensitivity_total_power(f: BooleanFunction, j: int) -> int:
    """sum_x s(f,x)^j as an exact integer."""
    counts = np.bincount(_sens(f), minlength=f.n + 1)
    return sum(int(c) * v ** j for v, c in enumerate(counts))


@dataclass(frozen=True)
class SensitivityStats:
    k: int
    s: int
    s0: int
    s1: int
    sk: Fraction
    sffk: Fraction

    def to_json(self) -> dict:
        return {"k": self.k, "s": self.s, "s0": self.s0, "s1": self.s1,
                "sk": str(self.sk),
                "sffk": str(self.sffk)}


def sensitivity_stats(f: BooleanFunction, k: int = 1) -> SensitivityStats:
    """Max sensitivity overall and on each side, plus the k-th moments.

    s0 is the max over points with output bit 0 (value +1), s1 over bit 1.
    An empty side contributes 0.
    """
    if k < 1:
        raise ValueError("moment order must be >= 1")
    s = _sens(f)
    on0 = s[f.bits == 0]
    on1 = s[f.bits == 1]
    return SensitivityStats(
        k=k,
        s=max_sensitivity(f),
        s0=int(on0.max()) if on0.size else 0,
        s1=int(on1.max()) if on1.size else 0,
        sk=sensitivity_moment(f, k),
        sffk=sensitivity_falling_moment(f, k),
    )


@dataclass(frozen=True, eq=False)
class SensitivityGraph:
    """Sensitive edges (x, i) with x < x xor e_i, and a component label per point."""

    n: int
    edge_points: np.ndarray
    edge_coords: np.ndarray
    component_id: np.ndarray

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.edge_points.tolist(), self.edge_coords.tolist()))

    def num_components(self) -> int:
        return int(self.component_id.max()) + 1 if self.component_id.size else 0

    def component_dims(self) -> np.ndarray:
        """Bitmask of edge directions present in each component."""
        dims = np.zeros(self.num_components(), dtype=np.int64)
        if self.edge_points.size:
            np.bitwise_or.at(dims, self.component_id[self.edge_points],
                             np.left_shift(1, self.edge_coords - 1))
        return dims


@lru_cache(maxsize=16)
def sensitivity_graph(f: BooleanFunction) -> SensitivityGraph:
    size = f.size
    idx = np.arange(size, dtype=np.int64)
    pts, crd = [], []
    for i in range(f.n):
        low = idx[(idx >> i) & 1 == 0]
        hit = low[f.bits[low] != f.bits[low | (1 << i)]]
        pts.append(hit)
        crd.append(np.full(hit.size, i + 1, dtype=np.int64))
    p = np.concatenate(pts) if pts else np.zeros(0, dtype=np.int64)
    c = np.concatenate(crd) if crd else np.zeros(0, dtype=np.int64)
    order = np.lexsort((c, p))
    p, c = p[order], c[order]
    adj = coo_matrix((np.ones(p.size, dtype=np.int8), (p, p ^ np.left_shift(1, c - 1))),
                     shape=(size, size))
    _, labels = connected_components(adj, directed=False)
    for arr in (p, c, labels):
        arr.flags.writeable = False
    return SensitivityGraph(f.n, p, c, labels.astype(np.int64))


def component_dimension(f: BooleanFunction) -> int:
    dims = sensitivity_graph(f).component_dims()
    if dims.size == 0:
        return 0
    return int(np_popcount(dims).max())
