"""Proper walks: checking, the full-dimension construction, tree traversals,
the recursive 3n construction for full-depth functions, and exact minimum
length by breadth-first search.

A walk is proper for f when each coordinate is first flipped at a vertex
sensitive to that coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..core import (BooleanFunction, check_cap, coords_of, dim, mask_of, np_popcount,
                    subcube_points, subfunction)
from ..dtree import dt
from .trees import SensitiveTree, _sens_masks, lex_least_max_tree, spanning_tree

WALK_MAX_ARITY = 16
WALK3N_MAX_ARITY = 12
BFS_MAX_ARITY = 12


class WalkError(ValueError):
    pass


@dataclass(frozen=True)
class Walk:
    start: int
    flips: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.flips)

    @property
    def dimension(self) -> int:
        return len(set(self.flips))

    def vertices(self) -> list[int]:
        out = [self.start]
        x = self.start
        for c in self.flips:
            x ^= 1 << (c - 1)
            out.append(x)
        return out

    def first_flips(self) -> list[tuple[int, int]]:
        """(vertex, coordinate) at each coordinate's first flip, in walk order."""
        seen = set()
        out = []
        x = self.start
        for c in self.flips:
            if c not in seen:
                seen.add(c)
                out.append((x, c))
            x ^= 1 << (c - 1)
        return out

    def to_json(self) -> dict:
        return {"start": self.start, "flips": list(self.flips)}

    @classmethod
    def from_json(cls, obj) -> "Walk":
        return cls(int(obj["start"]), tuple(int(c) for c in obj["flips"]))

    @classmethod
    def from_vertices(cls, vertices) -> "Walk":
        vs = list(vertices)
        flips = []
        for a, b in zip(vs, vs[1:]):
            d = a ^ b
            if d == 0 or d & (d - 1):
                raise WalkError(f"consecutive vertices {a}, {b} are not adjacent")
            flips.append(d.bit_length())
        return cls(vs[0], tuple(flips))


def is_proper_walk(f: BooleanFunction, w: Walk) -> bool:
    if not 0 <= w.start < f.size or any(not 1 <= c <= f.n for c in w.flips):
        raise WalkError("walk leaves the cube")
    b = f.bits
    return all(b[x] != b[x ^ (1 << (c - 1))] for x, c in w.first_flips())


def lift_walk(w: Walk, live, fixed: int) -> Walk:
    """Map a walk on the subcube (local coordinates 1..k) into the full cube."""
    start = int(subcube_points(live, fixed)[w.start])
    return Walk(start, tuple(live[c - 1] for c in w.flips))


# -- tree traversal ------------------------------------------------------------------

def traversal(tree: SensitiveTree, root: int) -> list[tuple[int, int, int]]:
    """Depth-first traversal from root, children by increasing edge coordinate.

    Returns steps (from, to, coordinate); each edge appears twice.
    """
    if root not in tree.vertices:
        raise WalkError("root is not a tree vertex")
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in tree.vertices}
    for a, b, c in tree.edges:
        adj[a].append((c, b))
        adj[b].append((c, a))
    steps = []

    def visit(u, parent):
        for c, w in sorted(adj[u]):
            if w == parent:
                continue
            steps.append((u, w, c))
            visit(w, u)
            steps.append((w, u, c))

    visit(root, None)
    return steps


def tree_walk(tree: SensitiveTree, root: int | None = None) -> Walk:
    """Closed proper walk visiting every tree vertex, of length 2|l(T)|."""
    r = tree.root if root is None else root
    return Walk(r, tuple(c for _, _, c in traversal(tree, r)))


def spanning_tree_walk(f: BooleanFunction) -> Walk | None:
    """Length-2n proper walk from a sensitive tree using every direction, if any."""
    t = spanning_tree(f)
    return None if t is None else tree_walk(t)


# -- full-dimension walk ---------------------------------------------------------------

def full_dim_proper_walk(f: BooleanFunction, cap: int = WALK_MAX_ARITY) -> Walk:
    """Proper walk of dimension n and length <= n(n+1)/2 for f depending on all n coordinates.

    Grows points x_1.., x_i and directions l_1.., l_i inside the subcube C
    spanned by the chosen directions. If some vertex of C is sensitive to a
    new direction it is taken (least vertex, then least direction); otherwise
    the whole configuration is shifted one step toward the nearest such
    vertex. The walk flips l_j at x_j and then follows a shortest path to
    x_{j+1}, flipping coordinates in increasing order.
    """
    check_cap("walk arity", f.n, cap)
    n = f.n
    if n == 0 or dim(f) < n:
        raise WalkError(f"f must depend on all {n} coordinates")
    smask = np.array(_sens_masks(f), dtype=np.int64)
    pts = np.arange(f.size, dtype=np.int64)
    x1 = int(np.flatnonzero(smask & 1)[0])
    xs, ls = [x1], [1]
    lmask = 1
    while len(ls) < n:
        base = xs[0] & ~lmask
        cube = subcube_points(coords_of(lmask), base)
        ext = smask[cube] & ~lmask
        hit = np.flatnonzero(ext)
        if hit.size:
            cand = cube[hit]
            k = int(np.argmin(cand))
            x = int(cand[k])
            c = coords_of(int(ext[hit[k]]))[0]
            xs.append(x)
            ls.append(c)
            lmask |= 1 << (c - 1)
            continue
        outside = np.flatnonzero(smask & ~lmask)
        if not outside.size:
            raise WalkError("no vertex is sensitive to a new coordinate")
        gap = (pts[outside] ^ base) & ~lmask
        dist = np_popcount(gap)
        k = int(np.argmin(dist))  # least z among the closest
        j = coords_of(int(gap[k]))[0]
        xs = [x ^ (1 << (j - 1)) for x in xs]
    flips = []
    for i, (x, c) in enumerate(zip(xs, ls)):
        flips.append(c)
        if i + 1 < len(xs):
            cur = x ^ (1 << (c - 1))
            flips.extend(coords_of(cur ^ xs[i + 1]))
    return Walk(xs[0], tuple(flips))


# -- 3n walk -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Phase:
    """One phase of the 3n walk: traverse `tree` from `root`, then flip `shift` coordinates."""

    root: int
    tree: SensitiveTree
    shift: tuple[int, ...]

    @property
    def labels(self) -> list[int]:
        return sorted(self.tree.labels)

    def flips(self) -> list[int]:
        return [c for _, _, c in traversal(self.tree, self.root)] + list(self.shift)


def walk_phases(f: BooleanFunction, cap: int = WALK3N_MAX_ARITY) -> list[Phase]:
    """Phase decomposition of the canonical 3n walk of a full-depth function.

    Ties are broken lexicographically: the least maximum-size tree (as a
    sorted vertex tuple), then the least restriction values on its labels
    (first label most significant) that keep full depth on the rest.
    """
    check_cap("3n-walk arity", f.n, cap)
    if f.n == 0 or dt(f) != f.n:
        raise WalkError(f"3n walk needs dt(f) = n = {f.n}")
    return _phases(f)


def _phases(g: BooleanFunction) -> list[Phase]:
    n = g.n
    tree = lex_least_max_tree(g)
    labels = sorted(tree.labels)
    m = len(labels)
    if m == n:
        return [Phase(tree.root, tree, ())]
    rest = [c for c in range(1, n + 1) if c not in tree.labels]
    for t in product((0, 1), repeat=m):
        fixed = mask_of(c for c, bit in zip(labels, t) if bit)
        sub = subfunction(g, rest, fixed)
        if dt(sub) == n - m:
            break
    else:  # pragma: no cover - full depth guarantees a witness
        raise AssertionError("no full-depth restriction of the tree labels")
    inner = _phases(sub)
    lifted = [_lift_phase(p, rest, fixed) for p in inner]
    s_next = lifted[0].root
    lmask = mask_of(labels)
    v = (s_next ^ tree.root) & ~lmask
    moved = tree.shifted(v)
    r = tree.root ^ v
    shift = tuple(coords_of((r ^ s_next) & lmask))
    return [Phase(r, moved, shift)] + lifted


def _lift_phase(p: Phase, live, fixed: int) -> Phase:
    pts = subcube_points(live, fixed)
    verts = tuple(sorted(int(pts[x]) for x in p.tree.vertices))
    edges = tuple(sorted((min(int(pts[a]), int(pts[b])), max(int(pts[a]), int(pts[b])), live[c - 1])
                         for a, b, c in p.tree.edges))
    return Phase(int(pts[p.root]), SensitiveTree(verts, edges), tuple(live[c - 1] for c in p.shift))


def phases_walk(phases: list[Phase]) -> Walk:
    flips = []
    for p in phases:
        flips.extend(p.flips())
    return Walk(phases[0].root, tuple(flips))


def proper_walk_3n(f: BooleanFunction, cap: int = WALK3N_MAX_ARITY) -> Walk:
    """Proper walk of dimension n and length <= 3n for f with dt(f) = n."""
    return phases_walk(walk_phases(f, cap))


# -- minimum length ----------------------------------------------------------------------

def min_proper_walk(f: BooleanFunction, cap: int = BFS_MAX_ARITY) -> int | None:
    """Least length of a proper walk of dimension n, or None if none exists.

    Breadth-first search over states (vertex, set of flipped coordinates),
    started from every vertex with nothing flipped.
    """
    check_cap("walk BFS arity", f.n, cap)
    n = f.n
    if n == 0:
        return 0
    if dim(f) < n:
        return None
    smask = np.array(_sens_masks(f), dtype=np.int64)
    full = (1 << n) - 1
    seen = np.zeros(1 << (2 * n), dtype=bool)
    frontier = np.arange(f.size, dtype=np.int64)  # state = flipped << n | vertex
    seen[frontier] = True
    depth = 0
    while frontier.size:
        if np.any(frontier >> n == full):
            return depth
        v = frontier & full
        d = frontier >> n
        nxt = []
        for i in range(n):
            bit = 1 << i
            ok = (d & bit != 0) | (smask[v] & bit != 0)
            st = ((d | bit) << n | (v ^ bit))[ok]
            nxt.append(st)
        cand = np.unique(np.concatenate(nxt))
        cand = cand[~seen[cand]]
        seen[cand] = True
        frontier = cand
        depth += 1
    return None  # pragma: no cover - dim(f) = n guarantees a walk


def walk_length_bound(n: int) -> int:
    return n * (n + 1) // 2


__all__ = ["Walk", "WalkError", "Phase", "is_proper_walk", "lift_walk", "traversal",
           "tree_walk", "spanning_tree_walk", "full_dim_proper_walk", "walk_phases",
           "phases_walk", "proper_walk_3n", "min_proper_walk", "walk_length_bound"]
