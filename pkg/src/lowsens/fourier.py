"""Exact Walsh-Hadamard spectra and the quantities derived from them.

Coefficients are kept scaled by 2^n so they are integers:
coeffs[S] = sum_x f(x) chi_S(x) = 2^n * fhat(S). All moment and tail
arithmetic is done in Fractions; only entropy uses floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import BooleanFunction, popcounts


def fwht(vec: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform of an int64 vector of length 2^n."""
    x = np.array(vec, dtype=np.int64)
    size = x.size
    h = 1
    while h < size:
        x = x.reshape(-1, 2, h)
        a = x[:, 0, :].copy()
        b = x[:, 1, :]
        x[:, 0, :] += b
        x[:, 1, :] = a - b
        x = x.reshape(-1)
        h <<= 1
    return x


def falling(x: int, k: int) -> int:
    """Falling factorial x(x-1)...(x-k+1)."""
    out = 1
    for t in range(k):
        out *= x - t
    return out


@dataclass(frozen=True, eq=False)
class Spectrum:
    n: int
    coeffs: np.ndarray

    def coefficient(self, subset_mask: int) -> Fraction:
        return Fraction(int(self.coeffs[subset_mask]), 1 << self.n)

    def level_sums(self) -> list[int]:
        """Integer sums of coeffs^2 per level; level k weight is sums[k] / 4^n."""
        return [int(v) for v in _level_reduce(self.coeffs.astype(np.int64) ** 2, self.n)]

    def support(self) -> np.ndarray:
        return np.nonzero(self.coeffs)[0]


def _level_reduce(sq: np.ndarray, n: int) -> np.ndarray:
    # Float accumulation is exact here: every partial sum is an integer <= 4^n <= 2^48.
    sums = np.bincount(popcounts(n), weights=sq.astype(np.float64), minlength=n + 1)
    return sums.astype(np.int64)


@lru_cache(maxsize=32)
def spectrum(f: BooleanFunction) -> Spectrum:
    coeffs = fwht(f.values)
    coeffs.flags.writeable = False
    return Spectrum(f.n, coeffs)


def inverse(spec: Spectrum) -> BooleanFunction:
    """Rebuild the truth table; raises if the spectrum is not of a +-1 function."""
    vals = fwht(spec.coeffs)
    size = 1 << spec.n
    if not np.all(np.abs(vals) == size):
        raise ValueError("spectrum does not invert to a +-1 valued function")
    return BooleanFunction(spec.n, (vals < 0).astype(np.uint8))


@lru_cache(maxsize=256)
def _cached_level_sums(f: BooleanFunction) -> tuple[int, ...]:
    return tuple(spectrum(f).level_sums())


def level_sums(f: BooleanFunction) -> list[int]:
    return list(_cached_level_sums(f))


def level_weights(f: BooleanFunction) -> list[Fraction]:
    denom = 1 << (2 * f.n)
    return [Fraction(v, denom) for v in level_sums(f)]


def degree(f: BooleanFunction) -> int:
    sums = level_sums(f)
    return max(k for k, v in enumerate(sums) if v)


def influence_moment(f: BooleanFunction, k: int) -> Fraction:
    """I^k[f] = sum_S fhat(S)^2 |S|^k."""
    sums = level_sums(f)
    return Fraction(sum(v * lvl ** k for lvl, v in enumerate(sums)), 1 << (2 * f.n))


def influence_falling_moment(f: BooleanFunction, k: int) -> Fraction:
    """I^{falling k}[f] = sum_S fhat(S)^2 |S|(|S|-1)...(|S|-k+1)."""
    sums = level_sums(f)
    return Fraction(sum(v * falling(lvl, k) for lvl, v in enumerate(sums)), 1 << (2 * f.n))


def total_influence(f: BooleanFunction) -> Fraction:
    return influence_moment(f, 1)


@dataclass(frozen=True)
class MomentReport:
    n: int
    k: int
    ik: Fraction
    iffk: Fraction
    sk: Fraction
    sffk: Fraction

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "Ik": _q(self.ik), "Iffk": _q(self.iffk),
                "sk": _q(self.sk), "sffk": _q(self.sffk)}


def _q(x: Fraction) -> str:
    return str(x)


def influence_moments(f: BooleanFunction, k: int) -> MomentReport:
    if k < 1:
        raise ValueError("moment order must be >= 1")
    from .sensitivity import sensitivity_moment, sensitivity_falling_moment

    return MomentReport(
        n=f.n,
        k=k,
        ik=influence_moment(f, k),
        iffk=influence_falling_moment(f, k),
        sk=sensitivity_moment(f, k),
        sffk=sensitivity_falling_moment(f, k),
    )


def tail_weight(f: BooleanFunction, k: int) -> Fraction:
    """Fourier weight on levels >= k."""
    sums = level_sums(f)
    return Fraction(sum(sums[max(k, 0):]), 1 << (2 * f.n))


def deg_epsilon(f: BooleanFunction, eps) -> int:
    eps = Fraction(eps)
    if not 0 <= eps <= 1:
        raise ValueError("eps must lie in [0, 1]")
    sums = level_sums(f)
    denom = 1 << (2 * f.n)
    tail = denom
    for k in range(f.n + 1):
        if Fraction(tail, denom) <= eps:
            return k
        tail -= sums[k]
    return f.n + 1


def level_l1(f: BooleanFunction, k: int) -> Fraction:
    if not 0 <= k <= f.n:
        raise ValueError(f"level {k} outside 0..{f.n}")
    spec = spectrum(f)
    mask = popcounts(f.n) == k
    return Fraction(int(np.abs(spec.coeffs[mask]).sum()), 1 << f.n)


def level_coefficients(f: BooleanFunction, k: int) -> np.ndarray:
    """Scaled coefficients (times 2^n) of all sets of size k, in index order."""
    spec = spectrum(f)
    return spec.coeffs[popcounts(f.n) == k]


def plogp_bits(scaled_sq: np.ndarray, n: int) -> float:
    """sum p*log2(1/p) with p = scaled_sq / 4^n; zero entries contribute 0."""
    sq = np.asarray(scaled_sq, dtype=np.float64)
    sq = sq[sq > 0]
    if sq.size == 0:
        return 0.0
    p = sq / float(4 ** n)
    return float(np.sum(p * (2 * n - np.log2(sq))))


def spectral_entropy(f: BooleanFunction) -> float:
    """H[f] = sum_S fhat(S)^2 log2(1/fhat(S)^2), in bits."""
    return plogp_bits(spectrum(f).coeffs.astype(np.int64) ** 2, f.n)


def entropy_bits(ps) -> float:
    return math.fsum(float(p) * math.log2(1 / float(p)) for p in ps if p > 0)
