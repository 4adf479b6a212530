"""Exact deterministic decision-tree depth.

dt(f) = 0 for constants, else 1 + min_i max_b dt(f|x_i=b). Subresults are
memoised on the canonical subfunction: the table with every irrelevant
coordinate removed, so different restriction paths share work.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .core import BooleanFunction, check_cap, compress, restrict_coord
from .sensitivity import max_sensitivity

DT_MAX_ARITY = 16

# Shared memo: canonical key -> depth. Values are a pure function of the key,
# so concurrent writers can only store identical values.
_MEMO: dict[tuple[int, bytes], int] = {}
_MEMO_LIMIT = 1 << 20


def clear_cache() -> None:
    _MEMO.clear()


def subfunction_key(f: BooleanFunction) -> tuple[int, bytes]:
    return compress(f).key()


def dt(f: BooleanFunction, cap: int = DT_MAX_ARITY) -> int:
    check_cap("dt arity", f.n, cap)
    return _dt(compress(f))


def _dt(g: BooleanFunction) -> int:
    # g is compressed: it depends on all of its coordinates
    if g.n == 0:
        return 0
    key = g.key()
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    if g.n == 1:
        best = 1
    else:
        lower = max(1, max_sensitivity(g))
        best = g.n
        for i in range(1, g.n + 1):
            if best == lower:
                break
            a = _dt(compress(restrict_coord(g, i, 0)))
            if a + 1 >= best:
                continue
            b = _dt(compress(restrict_coord(g, i, 1)))
            best = min(best, 1 + max(a, b))
    if len(_MEMO) >= _MEMO_LIMIT:
        _MEMO.clear()
    _MEMO[key] = best
    return best


@dataclass(frozen=True)
class Leaf:
    value: int

    def depth(self) -> int:
        return 0

    def evaluate(self, x: int) -> int:
        return self.value


@dataclass(frozen=True)
class Query:
    coord: int
    zero: "DecisionTree"
    one: "DecisionTree"

    def depth(self) -> int:
        return 1 + max(self.zero.depth(), self.one.depth())

    def evaluate(self, x: int) -> int:
        branch = self.one if (x >> (self.coord - 1)) & 1 else self.zero
        return branch.evaluate(x)


DecisionTree = Union[Leaf, Query]


def optimal_tree(f: BooleanFunction, cap: int = DT_MAX_ARITY) -> DecisionTree:
    """A depth-dt(f) tree; among optimal first queries the lowest coordinate wins."""
    check_cap("dt arity", f.n, cap)
    return _build(f, list(range(1, f.n + 1)))


def _build(g: BooleanFunction, coords: list[int]) -> DecisionTree:
    if g.is_constant():
        return Leaf(-1 if g.bits[0] else 1)
    d = _dt(compress(g))
    for i in range(1, g.n + 1):
        g0 = restrict_coord(g, i, 0)
        g1 = restrict_coord(g, i, 1)
        if 1 + max(_dt(compress(g0)), _dt(compress(g1))) == d:
            rest = coords[: i - 1] + coords[i:]
            return Query(coords[i - 1], _build(g0, rest), _build(g1, rest))
    raise AssertionError("no coordinate attains dt")  # unreachable for consistent memo


def tree_to_json(t: DecisionTree):
    if isinstance(t, Leaf):
        return t.value
    return {"query": t.coord, "0": tree_to_json(t.zero), "1": tree_to_json(t.one)}
