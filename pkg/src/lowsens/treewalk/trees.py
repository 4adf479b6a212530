"""Sensitive trees: enumeration, tree sensitivity, maximality and orchards.

A sensitive tree is a vertex set inducing a tree in the hypercube whose
edges are all sensitive and carry pairwise distinct coordinate labels.
Such a tree grows by attaching a leaf y = u xor e_i for a vertex u of the
tree and a sensitive direction i not yet used: y then has u as its only
neighbour in the tree, so the induced subgraph stays a tree. Every
sensitive tree arises this way, which gives the include/exclude
enumeration below (each vertex set is produced once per root).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..core import BooleanFunction, CapacityError, check_cap, coords_of, popcount
from ..sensitivity import sensitivity_graph

TREE_MAX_ARITY = 16
COUNT_MAX_ARITY = 5
ORCHARD_MAX_SHIFT_BITS = 20


class InvalidTree(ValueError):
    pass


@dataclass(frozen=True)
class SensitiveTree:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]

    @property
    def labels(self) -> frozenset[int]:
        return frozenset(e[2] for e in self.edges)

    @property
    def label_mask(self) -> int:
        m = 0
        for e in self.edges:
            m |= 1 << (e[2] - 1)
        return m

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def root(self) -> int:
        return self.vertices[0]

    def shifted(self, v: int) -> "SensitiveTree":
        return SensitiveTree(tuple(sorted(x ^ v for x in self.vertices)),
                             tuple(sorted((min(a ^ v, b ^ v), max(a ^ v, b ^ v), c)
                                          for a, b, c in self.edges)))


def induced_edges(vertices) -> list[tuple[int, int, int]]:
    vs = sorted(set(vertices))
    out = []
    for a, b in combinations(vs, 2):
        d = a ^ b
        if d & (d - 1) == 0:
            out.append((a, b, d.bit_length()))
    return out


def make_tree(f: BooleanFunction, vertices) -> SensitiveTree:
    """Validate a vertex set as a sensitive tree of f."""
    vs = tuple(sorted(set(vertices)))
    if len(vs) < 2:
        raise InvalidTree("a sensitive tree needs at least two vertices")
    if any(not 0 <= x < f.size for x in vs):
        raise InvalidTree("vertex outside the cube")
    edges = induced_edges(vs)
    if len(edges) != len(vs) - 1:
        raise InvalidTree("vertex set does not induce a tree")
    labels = [c for _, _, c in edges]
    if len(set(labels)) != len(labels):
        raise InvalidTree("edge labels are not distinct")
    b = f.bits
    for x, y, _ in edges:
        if b[x] == b[y]:
            raise InvalidTree(f"edge {x}-{y} is not sensitive")
    # connectivity: n-1 edges plus connected <=> tree
    seen = {vs[0]}
    stack = [vs[0]]
    adj: dict[int, list[int]] = {}
    for x, y, _ in edges:
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)
    while stack:
        u = stack.pop()
        for w in adj.get(u, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(vs):
        raise InvalidTree("vertex set is not connected")
    return SensitiveTree(vs, tuple(edges))


# -- enumeration ---------------------------------------------------------------

def _sens_masks(f: BooleanFunction) -> list[int]:
    """Per point, bitmask of sensitive directions."""
    b = f.bits
    idx = np.arange(f.size, dtype=np.int64)
    m = np.zeros(f.size, dtype=np.int64)
    for i in range(f.n):
        m |= (b != b[idx ^ (1 << i)]).astype(np.int64) << i
    return m.tolist()


def _grow(smask, root, min_root, visit, max_size=None):
    """Enumerate sensitive trees containing `root`.

    With min_root set, only vertices greater than root may join, so each
    tree is produced exactly once (from its minimum vertex). `visit` gets
    (vertices, label_mask) for every tree with at least one edge and may
    return True to stop the search.
    """
    verts = [root]
    excluded: set[int] = set()

    def cands_from(u, used):
        out = []
        m = smask[u] & ~used
        while m:
            low = m & -m
            y = u ^ low
            if (not min_root or y > root) and y not in excluded:
                out.append((y, low))
            m ^= low
        return out

    def rec(used, cands):
        if len(verts) > 1 and visit(verts, used):
            return True
        if max_size is not None and len(verts) - 1 >= max_size:
            return False
        added = []
        for idx, (y, low) in enumerate(cands):
            if y in excluded:
                continue
            nused = used | low
            ncands = [c for c in cands[idx + 1:] if not c[1] & low and c[0] not in excluded]
            verts.append(y)
            ncands.extend(cands_from(y, nused))
            stop = rec(nused, ncands)
            verts.pop()
            if stop:
                for z in added:
                    excluded.discard(z)
                return True
            excluded.add(y)
            added.append(y)
        for z in added:
            excluded.discard(z)
        return False

    rec(0, cands_from(root, 0))


def iter_sensitive_trees(f: BooleanFunction, size: int | None = None):
    """Yield every sensitive tree of f (optionally only those with `size` edges).

    Yields (sorted vertex tuple, label mask).
    """
    check_cap("tree enumeration arity", f.n, TREE_MAX_ARITY)
    smask = _sens_masks(f)
    found = []
    for root in range(f.size):
        if not smask[root]:
            continue

        def visit(vs, used):
            if size is None or len(vs) - 1 == size:
                found.append((tuple(sorted(vs)), used))
            return False

        _grow(smask, root, True, visit, max_size=size)
        yield from found
        found.clear()


def count_sensitive_trees(f: BooleanFunction, j: int, cap: int = COUNT_MAX_ARITY) -> int:
    """Number of vertex sets inducing a sensitive tree with exactly j edges."""
    check_cap("tree counting arity", f.n, cap)
    if j < 1:
        raise ValueError("tree size must be >= 1")
    return sum(1 for _ in iter_sensitive_trees(f, size=j))


# -- tree sensitivity -------------------------------------------------------------

def _component_bounds(f: BooleanFunction) -> list[int]:
    g = sensitivity_graph(f)
    dims = g.component_dims()
    counts = [popcount(int(d)) for d in dims]
    return [counts[c] for c in g.component_id.tolist()]


def tree_sensitivity(f: BooleanFunction, x: int | None = None, cap: int = TREE_MAX_ARITY) -> int:
    """ts(f, x), or ts(f) when x is None; 0 when no sensitive tree exists."""
    check_cap("tree search arity", f.n, cap)
    smask = _sens_masks(f)
    bound = _component_bounds(f)
    if x is not None:
        if not 0 <= x < f.size:
            raise IndexError(f"point {x} outside {{0,1}}^{f.n}")
        return _best_from(smask, x, False, bound[x], 0)
    best = 0
    roots = sorted((r for r in range(f.size) if smask[r]), key=lambda r: (-bound[r], r))
    # cheap lower bound first: greedy growth from each root
    for r in roots:
        best = max(best, _greedy(smask, r))
    top = max(bound) if bound else 0
    for r in roots:
        if best >= top:
            break
        if bound[r] <= best:
            continue
        best = _best_from(smask, r, True, bound[r], best)
    return best


def _greedy(smask, root) -> int:
    """Size of one maximal tree grown greedily from root (a lower bound)."""
    used = 0
    frontier = [root]
    while True:
        grown = False
        for u in list(frontier):
            m = smask[u] & ~used
            if m:
                low = m & -m
                used |= low
                frontier.append(u ^ low)
                grown = True
        if not grown:
            return popcount(used)


def _best_from(smask, root, min_root, bound, best) -> int:
    state = {"best": best}

    def visit(vs, used):
        size = popcount(used)
        if size > state["best"]:
            state["best"] = size
        return state["best"] >= bound

    _grow(smask, root, min_root, visit)
    return state["best"]


def max_trees(f: BooleanFunction, cap: int = TREE_MAX_ARITY) -> list[tuple[int, ...]]:
    """All sensitive trees of size ts(f), as sorted vertex tuples in lexicographic order."""
    m = tree_sensitivity(f, cap=cap)
    if m == 0:
        return []
    return sorted(vs for vs, _ in iter_sensitive_trees(f, size=m))


def lex_least_max_tree(f: BooleanFunction, cap: int = TREE_MAX_ARITY) -> SensitiveTree | None:
    """Lexicographically least vertex tuple among trees of size ts(f)."""
    m = tree_sensitivity(f, cap=cap)
    if m == 0:
        return None
    smask = _sens_masks(f)
    for root in range(f.size):
        if not smask[root]:
            continue
        hits = []

        def visit(vs, used):
            if len(vs) - 1 == m:
                hits.append(tuple(sorted(vs)))
            return False

        _grow(smask, root, True, visit, max_size=m)
        if hits:
            return make_tree(f, min(hits))
    raise AssertionError("tree of size ts(f) not found")


def spanning_tree(f: BooleanFunction, cap: int = TREE_MAX_ARITY) -> SensitiveTree | None:
    """A sensitive tree using all n directions, if one exists."""
    check_cap("tree search arity", f.n, cap)
    smask = _sens_masks(f)
    want = (1 << f.n) - 1
    for root in range(f.size):
        if not smask[root]:
            continue
        hit = []

        def visit(vs, used):
            if used == want:
                hit.append(tuple(vs))
                return True
            return False

        _grow(smask, root, True, visit)
        if hit:
            return make_tree(f, hit[0])
    return None


# -- maximality, shifts, orchards -------------------------------------------------

@dataclass(frozen=True)
class TreeClass:
    maximal: bool
    orchard: bool | None  # None: too many shift vectors to check exhaustively

    def to_json(self) -> dict:
        return {"maximal": self.maximal,
                "orchard": "unverified" if self.orchard is None else self.orchard}


def _complement_shifts(n: int, label_mask: int) -> np.ndarray:
    """All vectors supported on the coordinates outside label_mask."""
    free = [i for i in range(n) if not label_mask >> i & 1]
    vs = np.zeros(1, dtype=np.int64)
    for i in free:
        vs = np.concatenate([vs, vs | (1 << i)])
    return vs


def is_maximal(f: BooleanFunction, t: SensitiveTree) -> bool:
    lm = t.label_mask
    smask = _sens_masks(f)
    return all(smask[x] & ~lm == 0 for x in t.vertices)


def can_shift(f: BooleanFunction, t: SensitiveTree, v: int) -> bool:
    if v & t.label_mask:
        raise ValueError("shift vector must be supported off the tree's labels")
    b = f.bits
    return all(b[x] == b[x ^ v] for x in t.vertices)


def classify_tree(f: BooleanFunction, t: SensitiveTree,
                  max_shift_bits: int = ORCHARD_MAX_SHIFT_BITS) -> TreeClass:
    make_tree(f, t.vertices)
    free = f.n - t.size
    maximal = is_maximal(f, t)
    if free > max_shift_bits:
        return TreeClass(maximal, None)
    shifts = _complement_shifts(f.n, t.label_mask)
    b = f.bits
    ok = True
    for x in t.vertices:
        if np.any(b[x ^ shifts] != b[x]):
            ok = False
            break
    return TreeClass(maximal, ok)


def non_maximal_shift(f: BooleanFunction, t: SensitiveTree) -> int | None:
    """A shift v (allowed for t) with t xor v not maximal, smallest weight first."""
    shifts = _complement_shifts(f.n, t.label_mask).tolist()
    shifts.sort(key=lambda v: (popcount(v), v))
    for v in shifts:
        if can_shift(f, t, v) and not is_maximal(f, t.shifted(v)):
            return v
    return None


def tree_labels(vertices) -> int:
    m = 0
    for _, _, c in induced_edges(vertices):
        m |= 1 << (c - 1)
    return m


def tree_coords(t: SensitiveTree) -> list[int]:
    return coords_of(t.label_mask)
