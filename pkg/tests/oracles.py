"""Brute-force reference implementations written straight from the definitions.

Pure Python and deliberately slow; they share no code with the package
beyond the BooleanFunction container.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def val(f, x):
    return -1 if f.bits[x] else 1


def coeff(f, S):
    """f^(S) by summation over all points."""
    n = f.n
    tot = sum(val(f, x) * (-1) ** bin(x & S).count("1") for x in range(1 << n))
    return Fraction(tot, 1 << n)


def spectrum(f):
    return [coeff(f, S) for S in range(1 << f.n)]


def point_sens(f, x):
    return sum(f.bits[x] != f.bits[x ^ (1 << i)] for i in range(f.n))


def max_sens(f):
    return max(point_sens(f, x) for x in range(1 << f.n))


def sens_moment(f, k):
    return Fraction(sum(point_sens(f, x) ** k for x in range(1 << f.n)), 1 << f.n)


def infl_moment(f, k):
    return sum((bin(S).count("1") ** k * c * c for S, c in enumerate(spectrum(f))), Fraction(0))


def degree(f):
    return max((bin(S).count("1") for S, c in enumerate(spectrum(f)) if c), default=0)


def _dt_rec(table):
    """table: dict point-tuple -> bit over the remaining free coordinates."""
    vals = set(table.values())
    if len(vals) <= 1:
        return 0
    k = len(next(iter(table)))
    best = k
    for i in range(k):
        parts = []
        for b in (0, 1):
            parts.append({p[:i] + p[i + 1:]: v for p, v in table.items() if p[i] == b})
        best = min(best, 1 + max(_dt_rec(parts[0]), _dt_rec(parts[1])))
    return best


def dt(f):
    n = f.n
    table = {tuple((x >> i) & 1 for i in range(n)): int(f.bits[x]) for x in range(1 << n)}
    return _dt_rec(table)


def _is_tree(vs):
    """Induced subgraph of the cube on vs is connected and has |vs|-1 edges."""
    vs = list(vs)
    S = set(vs)
    edges = [(a, b) for a, b in itertools.combinations(vs, 2)
             if bin(a ^ b).count("1") == 1]
    if len(edges) != len(vs) - 1:
        return None
    seen = {vs[0]}
    stack = [vs[0]]
    while stack:
        u = stack.pop()
        for a, b in edges:
            for p, q in ((a, b), (b, a)):
                if p == u and q not in seen:
                    seen.add(q)
                    stack.append(q)
    return edges if seen == S else None


def sensitive_trees(f, j):
    """Every vertex set of size j+1 inducing a sensitive tree with distinct labels."""
    out = []
    for vs in itertools.combinations(range(1 << f.n), j + 1):
        edges = _is_tree(vs)
        if edges is None:
            continue
        labels = [(a ^ b).bit_length() for a, b in edges]
        if len(set(labels)) != len(labels):
            continue
        if all(f.bits[a] != f.bits[b] for a, b in edges):
            out.append(vs)
    return out


def tree_sens(f):
    for j in range(f.n, 0, -1):
        if sensitive_trees(f, j):
            return j
    return 0


def restrictions(n, k):
    """All (string, live, fixed) with exactly k stars; coordinate 1 leftmost."""
    out = []
    for word in itertools.product("01*", repeat=n):
        if word.count("*") != k:
            continue
        live = tuple(i + 1 for i, ch in enumerate(word) if ch == "*")
        fixed = sum(1 << i for i, ch in enumerate(word) if ch == "1")
        out.append(("".join(word), live, fixed))
    return out


def restricted_bits(f, live, fixed):
    k = len(live)
    out = []
    for y in range(1 << k):
        x = fixed
        for j, c in enumerate(live):
            if (y >> j) & 1:
                x |= 1 << (c - 1)
        out.append(int(f.bits[x]))
    return out


def proper(f, start, flips):
    seen = set()
    x = start
    for c in flips:
        if c not in seen:
            seen.add(c)
            if f.bits[x] == f.bits[x ^ (1 << (c - 1))]:
                return False
        x ^= 1 << (c - 1)
    return True


def component_dim(f):
    n = f.n
    parent = list(range(1 << n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(1 << n):
        for i in range(n):
            y = x ^ (1 << i)
            if f.bits[x] != f.bits[y]:
                parent[find(x)] = find(y)
    dirs = {}
    for x in range(1 << n):
        for i in range(n):
            if f.bits[x] != f.bits[x ^ (1 << i)]:
                dirs.setdefault(find(x), set()).add(i)
    return max((len(d) for d in dirs.values()), default=0)
