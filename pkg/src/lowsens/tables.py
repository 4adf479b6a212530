"""Per-arity lookup tables over every Boolean function on at most 4 variables.

Function index F encodes the table: bit x of F is b(x). All measures are
computed for all 2^(2^a) functions at once with numpy; restriction sweeps
then reduce to gathering indices and indexing these arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import BooleanFunction, popcounts
from .families import parity
from .treewalk.trees import iter_sensitive_trees

TABLE_MAX_ARITY = 4


@dataclass(frozen=True, eq=False)
class ArityTable:
    a: int
    bits: np.ndarray          # (F, 2^a) uint8
    sens: np.ndarray          # (F, 2^a) pointwise sensitivity
    s: np.ndarray             # max sensitivity
    deg: np.ndarray           # Fourier degree, 0 for constants
    dt: np.ndarray            # decision-tree depth
    ts: np.ndarray            # tree sensitivity
    cdim: np.ndarray          # most edge directions inside one sensitive component
    tree_counts: np.ndarray   # (F, a+1): column j counts sensitive trees with j edges
    edge_sens: np.ndarray     # bitmask over hypercube edges that are sensitive

    @property
    def count(self) -> int:
        return self.bits.shape[0]


def function_index(f: BooleanFunction) -> int:
    return f.to_int()


@lru_cache(maxsize=None)
def cube_edges(a: int) -> tuple[tuple[int, int], ...]:
    """Edges (x, i) of Q_a with coordinate i of x equal to 0, in a fixed order."""
    return tuple((x, i) for i in range(1, a + 1) for x in range(1 << a)
                 if not x >> (i - 1) & 1)


@lru_cache(maxsize=None)
def cube_tree_masks(a: int) -> tuple[np.ndarray, np.ndarray]:
    """Every distinct-label induced tree of Q_a as an edge bitmask, with its size."""
    if a == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    index = {e: k for k, e in enumerate(cube_edges(a))}
    masks, sizes = [], []
    for vs, lm in iter_sensitive_trees(parity(a)):
        m = 0
        vset = set(vs)
        for x in vs:
            for i in range(1, a + 1):
                y = x ^ (1 << (i - 1))
                if y in vset and x < y:
                    m |= 1 << index[(x, i)]
        masks.append(m)
        sizes.append(len(vs) - 1)
    return np.array(masks, dtype=np.int64), np.array(sizes, dtype=np.int64)


def _restrict_index(bits: np.ndarray, a: int, i: int, b: int) -> np.ndarray:
    """Function index of f|x_i=b (arity a-1) for every row of bits."""
    pts = [x for x in range(1 << a) if (x >> (i - 1)) & 1 == b]
    sub = bits[:, pts].astype(np.int64)
    return sub @ (np.int64(1) << np.arange(len(pts), dtype=np.int64))


@lru_cache(maxsize=None)
def table(a: int) -> ArityTable:
    if not 0 <= a <= TABLE_MAX_ARITY:
        raise ValueError(f"lookup tables cover arity 0..{TABLE_MAX_ARITY}")
    size = 1 << a
    F = np.arange(1 << size, dtype=np.int64)
    bits = ((F[:, None] >> np.arange(size)) & 1).astype(np.uint8)
    x = np.arange(size)
    sens = np.zeros(bits.shape, dtype=np.int64)
    for i in range(a):
        sens += bits != bits[:, x ^ (1 << i)]
    s = sens.max(axis=1) if a else np.zeros(F.size, dtype=np.int64)

    # degree from the Walsh-Hadamard matrix
    w = popcounts(a)
    had = 1 - 2 * (popcounts(a)[np.bitwise_and.outer(x, x)] & 1)
    coeffs = (1 - 2 * bits.astype(np.int64)) @ had
    deg = np.where(coeffs != 0, w[None, :], 0).max(axis=1)

    if a == 0:
        dt = np.zeros(F.size, dtype=np.int64)
    else:
        prev = table(a - 1).dt
        const = (F == 0) | (F == (1 << size) - 1)
        best = np.full(F.size, a, dtype=np.int64)
        for i in range(1, a + 1):
            d0 = prev[_restrict_index(bits, a, i, 0)]
            d1 = prev[_restrict_index(bits, a, i, 1)]
            best = np.minimum(best, 1 + np.maximum(d0, d1))
        dt = np.where(const, 0, best)

    edges = cube_edges(a)
    edge_sens = np.zeros(F.size, dtype=np.int64)
    for k, (p, i) in enumerate(edges):
        edge_sens |= (bits[:, p] != bits[:, p ^ (1 << (i - 1))]).astype(np.int64) << k
    masks, sizes = cube_tree_masks(a)
    counts = np.zeros((F.size, a + 1), dtype=np.int64)
    for m, j in zip(masks.tolist(), sizes.tolist()):
        counts[:, j] += (edge_sens & m) == m
    counts[:, 0] = 0
    present = counts > 0
    ts = np.where(present.any(axis=1), a - np.argmax(present[:, ::-1], axis=1), 0)

    cdim = _component_dims(bits, a)
    arrs = (bits, sens, s, deg, dt, ts, cdim, counts, edge_sens)
    for arr in arrs:
        arr.flags.writeable = False
    return ArityTable(a, *arrs)


def _component_dims(bits: np.ndarray, a: int) -> np.ndarray:
    """cdim for every row: min-label propagation along sensitive edges."""
    F, size = bits.shape
    x = np.arange(size)
    lab = np.tile(x, (F, 1))
    smask = np.zeros(bits.shape, dtype=np.int64)
    sens_dir = []
    for i in range(a):
        d = bits != bits[:, x ^ (1 << i)]
        sens_dir.append(d)
        smask |= d.astype(np.int64) << i
    while True:
        new = lab
        for i, d in enumerate(sens_dir):
            new = np.where(d, np.minimum(new, new[:, x ^ (1 << i)]), new)
        if np.array_equal(new, lab):
            break
        lab = new
    dims = np.zeros(bits.shape, dtype=np.int64)
    rows = np.repeat(np.arange(F), size)
    np.bitwise_or.at(dims, (rows, lab.reshape(-1)), smask.reshape(-1))
    return popcounts(a)[dims].max(axis=1) if a else np.zeros(F, dtype=np.int64)


def all_functions(a: int):
    """Every function of arity a, in index order."""
    t = table(a)
    for row in t.bits:
        yield BooleanFunction(a, row)
