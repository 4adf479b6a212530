"""Encoding restrictions with full restricted depth as short walk descriptions.

A restriction rho with dt(f_rho) = k determines the canonical 3k walk of
f_rho (lifted into the full cube). The walk is split into phases, each a
traversal of a sensitive tree followed by a few flips of that tree's
labels. It is written as (v0, K, b, c, beta):

- v0: start vertex of the walk;
- K: prefix sums of the tree sizes, a subset of 1..k;
- b: per traversal step, 1 for moving to a child and 0 for returning;
- c: per phase, over the tree's labels in increasing order, 1 if flipped
  after the traversal;
- beta: for each move to a child, its 1-based position among the
  sensitive neighbours (under f) of the current vertex, by coordinate.

Replaying the encoding recovers the walk, and the set of flipped
coordinates together with v0 recovers rho.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import BooleanFunction, mask_of
from ..dtree import dt
from ..restrictions import Restriction, apply
from ..sensitivity import max_sensitivity, sensitive_coords
from .walks import Walk, WalkError, lift_walk, traversal, walk_phases


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class WalkEncoding:
    v0: int
    K: tuple[int, ...]
    b: str
    c: str
    beta: tuple[int, ...]

    def to_json(self) -> dict:
        return {"v0": self.v0, "K": list(self.K), "b": self.b, "c": self.c,
                "beta": list(self.beta)}

    @classmethod
    def from_json(cls, obj) -> "WalkEncoding":
        try:
            return cls(int(obj["v0"]), tuple(int(x) for x in obj["K"]), str(obj["b"]),
                       str(obj["c"]), tuple(int(x) for x in obj["beta"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"malformed encoding: {exc}") from None


def encode_walk(f: BooleanFunction, rho: Restriction) -> WalkEncoding:
    if rho.n != f.n:
        raise ValueError("restriction arity does not match function arity")
    k = rho.k
    g = apply(f, rho)
    if k == 0 or dt(g) != k:
        raise WalkError(f"encoding needs dt(f_rho) = k = {k} >= 1")
    if max_sensitivity(f) < 1:
        raise WalkError("encoding needs s(f) >= 1")
    phases = walk_phases(g)
    live = list(rho.live)
    pts = rho.points()
    K, b, c, beta = [], [], [], []
    total = 0
    for p in phases:
        total += p.tree.size
        K.append(total)
        seen = {p.root}
        for u, w, coord in traversal(p.tree, p.root):
            if w not in seen:  # first arrival at w is from its parent
                seen.add(w)
                b.append("1")
                nb = sensitive_coords(f, int(pts[u]))
                beta.append(nb.index(live[coord - 1]) + 1)
            else:
                b.append("0")
        shifted = set(p.shift)
        c.extend("1" if lab in shifted else "0" for lab in p.labels)
    v0 = int(pts[phases[0].root])
    return WalkEncoding(v0, tuple(K), "".join(b), "".join(c), tuple(beta))


def encoded_walk(f: BooleanFunction, rho: Restriction) -> Walk:
    """The lifted canonical walk that encode_walk describes."""
    g = apply(f, rho)
    phases = walk_phases(g)
    flips = []
    for p in phases:
        flips.extend(p.flips())
    return lift_walk(Walk(phases[0].root, tuple(flips)), list(rho.live), rho.fixed)


def decode_walk(f: BooleanFunction, enc: WalkEncoding, k: int, verify: bool = True) -> Restriction:
    """Replay the encoding and return the least subcube containing the walk.

    With verify set, the result is re-encoded and must reproduce enc, so any
    input outside the image of encode_walk raises DecodeError.
    """
    walk = replay(f, enc, k)
    flipped = set(walk.flips)
    live = tuple(sorted(flipped))
    fixed = walk.start & ~mask_of(live)
    rho = Restriction(f.n, live, fixed)
    if verify:
        try:
            again = encode_walk(f, rho)
        except WalkError as exc:
            raise DecodeError(f"decoded restriction does not qualify: {exc}") from None
        if again != enc:
            raise DecodeError("encoding is not in the image of encode_walk")
    return rho


def replay(f: BooleanFunction, enc: WalkEncoding, k: int) -> Walk:
    """The walk described by an encoding (structural checks only)."""
    if k < 1:
        raise DecodeError("k must be >= 1")
    if not 0 <= enc.v0 < f.size:
        raise DecodeError("v0 outside the cube")
    if len(enc.b) != 2 * k or len(enc.c) != k or len(enc.beta) != k:
        raise DecodeError(f"need |b| = {2 * k}, |c| = {k}, |beta| = {k}")
    if set(enc.b) - {"0", "1"} or set(enc.c) - {"0", "1"}:
        raise DecodeError("b and c must be bit strings")
    K = list(enc.K)
    if not K or K != sorted(set(K)) or K[0] < 1 or K[-1] != k:
        raise DecodeError("K must be increasing prefix sums ending at k")
    cur = enc.v0
    flips: list[int] = []
    used: set[int] = set()
    bpos = cpos = betapos = 0
    prev = 0
    for kp in K:
        size = kp - prev
        prev = kp
        root = cur
        stack = [root]
        labels = []
        for _ in range(2 * size):
            step = enc.b[bpos]
            bpos += 1
            if step == "1":
                if betapos >= len(enc.beta):
                    raise DecodeError("beta exhausted")
                idx = enc.beta[betapos]
                betapos += 1
                nb = sensitive_coords(f, cur)
                if not 1 <= idx <= len(nb):
                    raise DecodeError(f"beta index {idx} out of range 1..{len(nb)}")
                coord = nb[idx - 1]
                if coord in labels or coord in used:
                    raise DecodeError(f"coordinate {coord} repeated")
                labels.append(coord)
                cur ^= 1 << (coord - 1)
                stack.append(cur)
            else:
                if len(stack) < 2:
                    raise DecodeError("traversal returns above the root")
                stack.pop()
                nxt = stack[-1]
                flips.append((cur ^ nxt).bit_length())
                cur = nxt
                continue
            flips.append(coord)
        if len(stack) != 1 or len(labels) != size:
            raise DecodeError("traversal does not close at the root")
        for lab in sorted(labels):
            if enc.c[cpos] == "1":
                flips.append(lab)
                cur ^= 1 << (lab - 1)
            cpos += 1
        used.update(labels)
    return Walk(enc.v0, tuple(flips))


__all__ = ["DecodeError", "WalkEncoding", "encode_walk", "decode_walk", "replay",
           "encoded_walk"]
