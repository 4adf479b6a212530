"""Constructors for the function families used throughout the toolkit.

Every family produces output bits (1 means the value -1). Families whose
natural range is {0,1} map 0 to bit 0 (+1) and 1 to bit 1 (-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import BooleanFunction, check_cap, max_arity


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: tuple[int, ...] = ()
    seed: int | None = field(default=None)

    def __str__(self):
        parts = [str(p) for p in self.params]
        if self.seed is not None:
            parts.append(str(self.seed))
        return f"{self.name}:{','.join(parts)}" if parts else self.name


# name -> (number of integer params, takes a seed)
_ARITY = {
    "parity": (1, False),
    "and": (1, False),
    "or": (1, False),
    "dictator": (2, False),
    "constant": (2, False),
    "address_tree": (1, False),
    "hamming": (1, False),
    "or_ham_parity": (2, False),
    "hadamard_gadget": (1, False),
    "dnf_parity_rows": (2, False),
    "majority": (1, False),
    "random": (1, True),
    "random_width_dnf": (3, True),
}

FAMILY_NAMES = tuple(_ARITY)


def parse_family(text: str) -> FamilySpec:
    """Parse 'name:p1,p2[,seed]'."""
    name, _, rest = text.partition(":")
    name = name.strip()
    if name not in _ARITY:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILY_NAMES)}")
    nparams, seeded = _ARITY[name]
    try:
        vals = [int(v) for v in rest.split(",") if v.strip()] if rest else []
    except ValueError:
        raise ValueError(f"family parameters must be integers: {text!r}") from None
    if seeded:
        if len(vals) != nparams + 1:
            raise ValueError(f"{name} needs {nparams} parameters and a seed")
        return FamilySpec(name, tuple(vals[:nparams]), vals[nparams])
    if len(vals) != nparams:
        raise ValueError(f"{name} needs {nparams} parameter(s), got {len(vals)}")
    return FamilySpec(name, tuple(vals))


def _points(n: int) -> np.ndarray:
    check_cap("arity", n, max_arity())
    return np.arange(1 << n, dtype=np.int64)


def _bit(x: np.ndarray, i: int) -> np.ndarray:
    """Coordinate i (1-based) of each point."""
    return (x >> (i - 1)) & 1


def _parity_of(x: np.ndarray, coords) -> np.ndarray:
    out = np.zeros(x.shape, dtype=np.int64)
    for i in coords:
        out ^= _bit(x, i)
    return out


def parity(n: int) -> BooleanFunction:
    _need(n >= 1, "parity needs n >= 1")
    x = _points(n)
    return BooleanFunction(n, _parity_of(x, range(1, n + 1)))


def and_(n: int) -> BooleanFunction:
    _need(n >= 1, "and needs n >= 1")
    x = _points(n)
    return BooleanFunction(n, (x == (1 << n) - 1).astype(np.uint8))


def or_(n: int) -> BooleanFunction:
    _need(n >= 1, "or needs n >= 1")
    x = _points(n)
    return BooleanFunction(n, (x != 0).astype(np.uint8))


def majority(n: int) -> BooleanFunction:
    _need(n >= 1 and n % 2 == 1, "majority needs odd n")
    x = _points(n)
    w = _parity_weight(x, n)
    return BooleanFunction(n, (2 * w > n).astype(np.uint8))


def _parity_weight(x, n):
    w = np.zeros(x.shape, dtype=np.int64)
    for i in range(1, n + 1):
        w += _bit(x, i)
    return w


def dictator(n: int, i: int) -> BooleanFunction:
    _need(1 <= i <= n, "dictator needs 1 <= i <= n")
    return BooleanFunction(n, _bit(_points(n), i))


def constant(n: int, b: int) -> BooleanFunction:
    _need(b in (0, 1), "constant bit must be 0 or 1")
    return BooleanFunction(n, np.full(1 << n, b, dtype=np.uint8))


def address_tree(n: int) -> BooleanFunction:
    """Read-once complete binary decision tree with n = 2^k - 1 internal nodes.

    Internal nodes carry x_1..x_n in in-order; x = 0 goes left. The n+1
    leaves alternate +1, -1, +1, ... from left to right.
    """
    _need(n >= 1 and (n + 1) & n == 0, "address_tree needs n = 2^k - 1")
    x = _points(n)
    # Walk all points down the tree at once: each node is an in-order label range.
    lo = np.ones(x.shape, dtype=np.int64)
    hi = np.full(x.shape, n, dtype=np.int64)
    for _ in range((n + 1).bit_length() - 1):
        mid = (lo + hi) // 2
        go_right = (x >> (mid - 1)) & 1
        lo = np.where(go_right == 1, mid + 1, lo)
        hi = np.where(go_right == 1, hi, mid - 1)
    # After the last split lo = hi + 1 and the leaf index (0..n) is hi.
    leaf = hi
    return BooleanFunction(n, (leaf & 1).astype(np.uint8))


def hamming_codewords_mask(x: np.ndarray, m: int, offset: int = 0) -> np.ndarray:
    """1 where coordinates offset+1..offset+m form a Hamming codeword.

    The parity-check matrix has column j equal to the binary encoding of j.
    """
    syndrome = np.zeros(x.shape, dtype=np.int64)
    for j in range(1, m + 1):
        syndrome ^= _bit(x, offset + j) * j
    return (syndrome == 0).astype(np.int64)


def _check_hamming_length(m: int) -> None:
    _need(m >= 1 and (m + 1) & m == 0, f"Hamming code length must be 2^r - 1, got {m}")


def hamming(m: int) -> BooleanFunction:
    """Indicator of the length-m Hamming code; codewords map to -1."""
    _check_hamming_length(m)
    x = _points(m)
    return BooleanFunction(m, hamming_codewords_mask(x, m))


def or_ham_parity(m: int, ell: int) -> BooleanFunction:
    """OR_m of Ham_m of Parity_ell on m*m*ell inputs.

    Variable x_{i,j,k} (1-based) is coordinate ((i-1)*m + (j-1))*ell + k.
    """
    _check_hamming_length(m)
    _need(ell >= 1, "ell must be >= 1")
    n = m * m * ell
    x = _points(n)
    out = np.zeros(x.shape, dtype=np.int64)
    for i in range(m):
        syndrome = np.zeros(x.shape, dtype=np.int64)
        for j in range(m):
            base = (i * m + j) * ell
            y = _parity_of(x, range(base + 1, base + ell + 1))
            syndrome ^= y * (j + 1)
        out |= (syndrome == 0).astype(np.int64)
    return BooleanFunction(n, out)


def hadamard_codeword(i: int, length: int) -> int:
    """Walsh row i of the Sylvester Hadamard matrix, as a bitmask of length bits."""
    word = 0
    for j in range(length):
        if bin(i & j).count("1") & 1:
            word |= 1 << j
    return word


def hadamard_gadget(n: int) -> BooleanFunction:
    """Output y_i when x equals the i-th Hadamard codeword of length n/2, else +1.

    Coordinates 1..n/2 are x, coordinates n/2+1..n are y.
    """
    _need(n >= 2 and n & (n - 1) == 0, "hadamard_gadget needs n a power of 2")
    half = n // 2
    x = _points(n)
    xs = x & ((1 << half) - 1)
    out = np.zeros(x.shape, dtype=np.int64)
    for i in range(half):
        hit = xs == hadamard_codeword(i, half)
        out = np.where(hit, _bit(x, half + i + 1), out)
    return BooleanFunction(n, out)


def dnf_parity_rows(k: int, w: int) -> BooleanFunction:
    """OR over k rows of the parity of w bits; x_{i,j} is coordinate (i-1)*w + j."""
    _need(k >= 1 and w >= 1, "dnf_parity_rows needs k, w >= 1")
    n = k * w
    x = _points(n)
    out = np.zeros(x.shape, dtype=np.int64)
    for i in range(k):
        out |= _parity_of(x, range(i * w + 1, i * w + w + 1))
    return BooleanFunction(n, out)


def random_function(n: int, seed: int) -> BooleanFunction:
    rng = np.random.default_rng(seed)
    return BooleanFunction(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))


def random_width_dnf(n: int, w: int, terms: int, seed: int) -> BooleanFunction:
    """OR of `terms` random width-w conjunctions over n variables."""
    _need(1 <= w <= n and terms >= 1, "random_width_dnf needs 1 <= w <= n and terms >= 1")
    rng = np.random.default_rng(seed)
    x = _points(n)
    out = np.zeros(x.shape, dtype=np.int64)
    for _ in range(terms):
        coords = rng.choice(n, size=w, replace=False) + 1
        signs = rng.integers(0, 2, size=w)
        term = np.ones(x.shape, dtype=np.int64)
        for c, sgn in zip(coords.tolist(), signs.tolist()):
            term &= _bit(x, c) ^ (1 - sgn)
        out |= term
    return BooleanFunction(n, out)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


_BUILDERS = {
    "parity": parity,
    "and": and_,
    "or": or_,
    "majority": majority,
    "dictator": dictator,
    "constant": constant,
    "address_tree": address_tree,
    "hamming": hamming,
    "or_ham_parity": or_ham_parity,
    "hadamard_gadget": hadamard_gadget,
    "dnf_parity_rows": dnf_parity_rows,
}


def family_arity(spec: FamilySpec) -> int:
    p = spec.params
    if spec.name == "or_ham_parity":
        return p[0] * p[0] * p[1]
    if spec.name == "dnf_parity_rows":
        return p[0] * p[1]
    return p[0]


def make(spec: FamilySpec | str) -> BooleanFunction:
    if isinstance(spec, str):
        spec = parse_family(spec)
    check_cap("arity", family_arity(spec), max_arity())
    if spec.name == "random":
        return random_function(spec.params[0], spec.seed)
    if spec.name == "random_width_dnf":
        return random_width_dnf(*spec.params, spec.seed)
    return _BUILDERS[spec.name](*spec.params)


# Deterministic catalogue of structured instances used by sweeps.
NAMED_INSTANCES = (
    "parity:2", "parity:3", "parity:4", "parity:6", "parity:9", "parity:12",
    "and:2", "and:3", "and:4", "and:6", "and:9", "and:12",
    "or:3", "or:5", "or:9", "or:12",
    "majority:3", "majority:5", "majority:9",
    "dictator:3,2", "dictator:5,4",
    "address_tree:3", "address_tree:7",
    "hamming:3", "hamming:7",
    "or_ham_parity:3,1",
    "hadamard_gadget:4", "hadamard_gadget:8",
    "dnf_parity_rows:2,2", "dnf_parity_rows:2,3", "dnf_parity_rows:3,3",
    "dnf_parity_rows:3,4", "dnf_parity_rows:4,3",
)


def named_instances(max_n: int) -> list[str]:
    return [s for s in NAMED_INSTANCES if family_arity(parse_family(s)) <= max_n]
