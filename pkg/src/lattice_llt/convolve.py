"""Exact laws of partial sums S_n = X_1 + ... + X_n by dense direct convolution.

Two strategies are provided. ``direct`` folds in one copy of X at a time with
Neumaier-compensated accumulation and serves as the reference; ``binary``
squares and multiplies whole distributions (``np.convolve``, which sums
directly rather than through a transform, so tail masses stay non-negative).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import BadOrder, SupportTooLarge
from .lattice import LatticePmf

DEFAULT_CAP = 10**8
LATTICE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SumDistribution:
    """``probs[j]`` is ``P{S_n = n*v0 + D*(k_lo + j)}`` with ``k_lo = n*k_min``."""

    n: int
    base: LatticePmf
    probs: np.ndarray

    @property
    def k_lo(self) -> int:
        return self.n * self.base.k_min

    @property
    def k_hi(self) -> int:
        return self.k_lo + len(self.probs) - 1

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(self.k_lo, self.k_hi + 1)

    @property
    def values(self) -> np.ndarray:
        return self.n * self.base.v0 + self.base.D * self.offsets

    def at_offset(self, k: int) -> float:
        """P{S_n = n*v0 + D*k} for an integer lattice offset k."""
        j = k - self.k_lo
        if 0 <= j < len(self.probs):
            return float(self.probs[j])
        return 0.0

    def as_dict(self) -> dict[int, float]:
        return {int(k): float(p) for k, p in zip(self.offsets, self.probs)}


def lattice_offset(target: float, n: int, v0: float, D: float) -> int | None:
    """Integer k with target = n*v0 + D*k, or None when target is off the lattice."""
    x = (target - n * v0) / D
    k = round(x)
    if abs(x - k) < LATTICE_TOL:
        return int(k)
    return None


def support_size(pmf: LatticePmf, n: int) -> int:
    return n * pmf.width + 1


def _check_cap(pmf: LatticePmf, n: int, cap: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    size = support_size(pmf, n)
    if size > cap:
        raise SupportTooLarge(f"S_{n} spans {size} lattice points, cap is {cap}")


def _fold(prev: np.ndarray, f: np.ndarray) -> np.ndarray:
    # out[j] = sum_i f[i] * prev[j - i], Neumaier compensation over the i terms
    L = len(prev)
    s = np.zeros(L + len(f) - 1)
    c = np.zeros_like(s)
    for i, fi in enumerate(f):
        if fi == 0.0:
            continue
        y = fi * prev
        seg = s[i : i + L]
        t = seg + y
        c[i : i + L] += np.where(np.abs(seg) >= np.abs(y), (seg - t) + y, (y - t) + seg)
        s[i : i + L] = t
    return s + c


def iter_sums(pmf: LatticePmf, n_max: int, cap: int = DEFAULT_CAP) -> Iterator[SumDistribution]:
    """Yield the laws of S_1, ..., S_{n_max} using the reference strategy."""
    _check_cap(pmf, n_max, cap)
    f = pmf.dense
    cur = f.copy()
    for n in range(1, n_max + 1):
        if n > 1:
            cur = _fold(cur, f)
        yield SumDistribution(n, pmf, cur)


def _convolve_direct(pmf: LatticePmf, n: int) -> np.ndarray:
    f = pmf.dense
    cur = f.copy()
    for _ in range(n - 1):
        cur = _fold(cur, f)
    return cur


def _convolve_binary(pmf: LatticePmf, n: int) -> np.ndarray:
    result = None
    power = pmf.dense
    while True:
        if n & 1:
            result = power if result is None else np.convolve(result, power)
        n >>= 1
        if not n:
            return result
        power = np.convolve(power, power)


def convolve_n(
    pmf: LatticePmf, n: int, strategy: str = "binary", cap: int = DEFAULT_CAP
) -> SumDistribution:
    """Exact law of S_n; ``strategy`` is ``"binary"`` (fast) or ``"direct"`` (reference)."""
    _check_cap(pmf, n, cap)
    if strategy == "binary":
        probs = _convolve_binary(pmf, n)
    elif strategy == "direct":
        probs = _convolve_direct(pmf, n)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    probs = np.ascontiguousarray(probs)
    probs.setflags(write=False)
    return SumDistribution(n, pmf, probs)


def prob_at(dist: SumDistribution, target: float) -> float:
    """P{S_n = target}; exactly 0 for off-lattice or out-of-range targets."""
    k = lattice_offset(target, dist.n, dist.base.v0, dist.base.D)
    if k is None:
        return 0.0
    return dist.at_offset(k)


class SumCache:
    """Memoized ``convolve_n`` results for one law.

    Reads are lock-free dict lookups; a miss takes the lock, re-checks, and a
    single writer computes and publishes the entry.
    """

    def __init__(self, pmf: LatticePmf, cap: int = DEFAULT_CAP):
        self.pmf = pmf
        self.cap = cap
        self._dists: dict[int, SumDistribution] = {}
        self._lock = threading.Lock()

    def __call__(self, n: int) -> SumDistribution:
        dist = self._dists.get(n)
        if dist is not None:
            return dist
        with self._lock:
            dist = self._dists.get(n)
            if dist is None:
                dist = convolve_n(self.pmf, n, cap=self.cap)
                self._dists[n] = dist
        return dist

    def prob(self, n: int, target: float) -> float:
        if lattice_offset(target, n, self.pmf.v0, self.pmf.D) is None:
            return 0.0
        return prob_at(self(n), target)

    def __len__(self):
        return len(self._dists)


def joint_prob(
    pmf: LatticePmf, n: int, m: int, kn: float, km: float, cache: SumCache | None = None
) -> float:
    """P{S_n = kn, S_m = km} = P{S_m = km} * P{S_{n-m} = kn - km} for 1 <= m < n."""
    if not 1 <= m < n:
        raise BadOrder(f"need 1 <= m < n, got m={m}, n={n}")
    cache = cache or SumCache(pmf)
    first = cache.prob(m, km)
    if first == 0.0:
        return 0.0
    return first * cache.prob(n - m, kn - km)


def total_mass(dist: SumDistribution) -> float:
    return math.fsum(dist.probs)
