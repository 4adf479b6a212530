"""Low-degree learning under the uniform distribution.

Every Fourier coefficient of degree at most d is estimated by the empirical
mean of f(x) chi_S(x) over the sample. Means are kept exactly: with labels
aggregated per point into a histogram h, the estimate for S is
WHT(h)[S] / m, an integer over m. The hypothesis is the sign of the
truncated polynomial, with value 0 mapped to +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import BooleanFunction, popcounts
from .fourier import fwht


@dataclass(frozen=True, eq=False)
class LabeledSample:
    n: int
    points: np.ndarray
    labels: np.ndarray
    seed: int

    @property
    def m(self) -> int:
        return int(self.points.size)


def draw_samples(f: BooleanFunction, m: int, seed: int) -> LabeledSample:
    if m < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, f.size, size=m, dtype=np.int64)
    return LabeledSample(f.n, pts, f.values[pts], seed)


@dataclass(frozen=True, eq=False)
class Hypothesis:
    n: int
    d: int
    m: int
    numerators: np.ndarray  # estimate for S is numerators[S] / m; zero above degree d
    signs: np.ndarray       # +-1 prediction at every point

    def coefficient(self, subset_mask: int) -> Fraction:
        return Fraction(int(self.numerators[subset_mask]), self.m)

    def coefficients(self) -> dict[int, Fraction]:
        """Estimates for every S with |S| <= d."""
        idx = np.flatnonzero(popcounts(self.n) <= self.d)
        return {int(s): Fraction(int(self.numerators[s]), self.m) for s in idx}

    def __call__(self, x: int) -> int:
        return int(self.signs[x])


def low_degree_learn(sample: LabeledSample, n: int, d: int) -> Hypothesis:
    if sample.n != n:
        raise ValueError("sample arity does not match n")
    if not 0 <= d <= n:
        raise ValueError(f"degree bound must lie in 0..{n}")
    hist = np.zeros(1 << n, dtype=np.int64)
    np.add.at(hist, sample.points, sample.labels)
    num = fwht(hist)
    num[popcounts(n) > d] = 0
    poly = fwht(num)  # 2^n * m times the truncated polynomial at each point
    signs = np.where(poly >= 0, 1, -1).astype(np.int64)
    for arr in (num, signs):
        arr.flags.writeable = False
    return Hypothesis(n, d, sample.m, num, signs)


def hypothesis_error(h: Hypothesis, f: BooleanFunction) -> Fraction:
    """Exact fraction of points where h and f disagree."""
    if h.n != f.n:
        raise ValueError("hypothesis arity does not match the function")
    return Fraction(int(np.count_nonzero(h.signs != f.values)), f.size)


def coefficient_count(n: int, d: int) -> int:
    return sum(math.comb(n, j) for j in range(d + 1))


def sample_size_hint(n: int, d: int, eps: float, c: float = 4.0) -> int:
    """c * N log N / eps samples for N = number of coefficients of degree <= d."""
    N = coefficient_count(n, d)
    return math.ceil(c * N * max(math.log(N), 1.0) / eps)
