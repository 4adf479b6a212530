"""Truth-table Boolean functions on the hypercube.

A function on n variables is stored as its 2^n output bits b(x), indexed by
the point x. Coordinate i (1-based) is bit i-1 of the point index. The +-1
value at x is (-1)^b(x), so bit 1 means -1.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_ARITY = 24


class CapacityError(ValueError):
    """Raised when an input exceeds a configured arity or enumeration cap."""

    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"{what} = {value} exceeds cap {cap}")
        self.what = what
        self.value = value
        self.cap = cap


_max_arity = DEFAULT_MAX_ARITY


def max_arity() -> int:
    return _max_arity


def set_max_arity(cap: int) -> None:
    """Change the arity cap for tables and spectra (process-wide)."""
    global _max_arity
    if cap < 0:
        raise ValueError("arity cap must be non-negative")
    _max_arity = int(cap)


def check_cap(what: str, value: int, cap: int) -> None:
    if value > cap:
        raise CapacityError(what, value, cap)


class BooleanFunction:
    """Immutable truth table of f: {0,1}^n -> {+1,-1}."""

    __slots__ = ("n", "bits", "_key")

    def __init__(self, n: int, bits):
        if n < 0:
            raise ValueError("arity must be non-negative")
        check_cap("arity", n, max_arity())
        arr = np.array(bits, dtype=np.uint8).reshape(-1)
        if arr.size != 1 << n:
            raise ValueError(f"truth table has {arr.size} entries, expected 2^{n} = {1 << n}")
        if arr.size and arr.max() > 1:
            raise ValueError("truth table entries must be 0 or 1")
        arr.flags.writeable = False
        self.n = n
        self.bits = arr
        self._key = None

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def values(self) -> np.ndarray:
        """The +-1 values as an int64 array."""
        return 1 - 2 * self.bits.astype(np.int64)

    def key(self) -> tuple[int, bytes]:
        if self._key is None:
            self._key = (self.n, np.packbits(self.bits, bitorder="little").tobytes())
        return self._key

    def __eq__(self, other):
        return isinstance(other, BooleanFunction) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"BooleanFunction(n={self.n}, hex={to_hex(self)!r})"

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def is_constant(self) -> bool:
        return bool(self.bits.min() == self.bits.max())

    def to_int(self) -> int:
        """Table as an integer whose bit x is b(x)."""
        return int.from_bytes(np.packbits(self.bits, bitorder="little").tobytes(), "little")

    @classmethod
    def from_int(cls, n: int, table: int) -> "BooleanFunction":
        size = 1 << n
        if table < 0 or table >> size:
            raise ValueError(f"table integer does not fit in 2^{n} bits")
        raw = table.to_bytes((size + 7) // 8, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
        return cls(n, bits)

    def negate(self) -> "BooleanFunction":
        return BooleanFunction(self.n, 1 - self.bits)

    def cube(self) -> np.ndarray:
        """Bits reshaped so that axis n-i indexes coordinate i."""
        return self.bits.reshape((2,) * self.n) if self.n else self.bits.reshape(())


def build(n: int, bits: Sequence[int]) -> BooleanFunction:
    return BooleanFunction(n, bits)


def from_callable(n: int, fn) -> BooleanFunction:
    """Build from a predicate on point indices returning the output bit."""
    return BooleanFunction(n, [1 if fn(x) else 0 for x in range(1 << n)])


def evaluate(f: BooleanFunction, x: int) -> int:
    if not 0 <= x < f.size:
        raise IndexError(f"point {x} outside {{0,1}}^{f.n}")
    return -1 if f.bits[x] else 1


def support_dims(f: BooleanFunction) -> frozenset[int]:
    """Coordinates (1-based) that f depends on."""
    return frozenset(i for i in range(1, f.n + 1) if depends_on(f, i))


def depends_on(f: BooleanFunction, i: int) -> bool:
    c = f.cube()
    axis = f.n - i
    return bool(np.any(np.take(c, 0, axis=axis) != np.take(c, 1, axis=axis)))


def dim(f: BooleanFunction) -> int:
    return len(support_dims(f))


def restrict_coord(f: BooleanFunction, i: int, b: int) -> BooleanFunction:
    """Fix coordinate i to b; remaining coordinates keep their relative order."""
    sub = np.take(f.cube(), b, axis=f.n - i)
    return BooleanFunction(f.n - 1, sub.reshape(-1))


def compress(f: BooleanFunction) -> BooleanFunction:
    """Drop the coordinates f does not depend on."""
    g = f
    for i in range(f.n, 0, -1):
        if not depends_on(g, i):
            g = restrict_coord(g, i, 0)
    return g


def mask_of(coords: Iterable[int]) -> int:
    m = 0
    for i in coords:
        m |= 1 << (i - 1)
    return m


def coords_of(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(x: int) -> int:
    return bin(x).count("1")


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """Hamming weights of 0..2^n-1 (read-only, cached)."""
    idx = np.arange(1 << n, dtype=np.int64)
    w = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        w += (idx >> i) & 1
    w.flags.writeable = False
    return w


def np_popcount(a: np.ndarray) -> np.ndarray:
    """Elementwise popcount of a non-negative int64 array."""
    a = np.asarray(a, dtype=np.int64)
    out = np.zeros(a.shape, dtype=np.int64)
    while np.any(a):
        out += a & 1
        a = a >> 1
    return out


# -- truth-table file format -------------------------------------------------

def to_hex(f: BooleanFunction) -> str:
    """Hex digits, LSB-first: digit d holds bits 4d..4d+3 with bit 4d lowest."""
    ndig = ((1 << f.n) + 3) // 4
    bits = np.zeros(ndig * 4, dtype=np.int64)
    bits[: f.size] = f.bits
    nibbles = bits.reshape(ndig, 4) @ np.array([1, 2, 4, 8])
    return "".join("0123456789abcdef"[v] for v in nibbles)


def from_hex(n: int, digits: str) -> BooleanFunction:
    digits = digits.strip().lower()
    ndig = ((1 << n) + 3) // 4
    if len(digits) != ndig:
        raise ValueError(f"expected {ndig} hex digits for n={n}, got {len(digits)}")
    try:
        nib = np.array([int(c, 16) for c in digits], dtype=np.int64)
    except ValueError as exc:
        raise ValueError(f"bad hex digit in truth table: {exc}") from None
    bits = ((nib[:, None] >> np.arange(4)) & 1).reshape(-1)
    if bits[1 << n:].any():
        raise ValueError("padding bits beyond 2^n must be zero")
    return BooleanFunction(n, bits[: 1 << n])


def dumps_table(f: BooleanFunction) -> str:
    return f"n={f.n}\n{to_hex(f)}\n"


def loads_table(text: str) -> BooleanFunction:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("n="):
        raise ValueError("truth-table file must be 'n=<int>' followed by one hex line")
    n = int(lines[0][2:])
    return from_hex(n, lines[1])


def read_table(path) -> BooleanFunction:
    with open(path) as fh:
        return loads_table(fh.read())


def write_table(f: BooleanFunction, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_table(f))


def subcube_points(live: Sequence[int], fixed: int) -> np.ndarray:
    """Points of the subcube with free coordinates `live` (ascending), other bits from `fixed`.

    Entry y is the point whose j-th live coordinate equals bit j-1 of y.
    """
    pts = np.array([fixed & ~mask_of(live)], dtype=np.int64)
    for c in live:
        pts = np.concatenate([pts, pts | (1 << (c - 1))])
    return pts


def subfunction(f: BooleanFunction, live: Sequence[int], fixed: int) -> BooleanFunction:
    """f on the subcube, with live coordinates relabelled 1..k in increasing order."""
    return BooleanFunction(len(live), f.bits[subcube_points(live, fixed)])
