"""Targets kappa_n, exact covariances E[Y_n Y_m] and empirical constants of the
correlation bounds, with Y_n = sqrt(n) (1{S_n = kappa_n} - P{S_n = kappa_n}).

For m < n the increment S_n - S_m is an independent copy of S_{n-m}, so

    E[Y_n Y_m] = sqrt(m) P{S_m = kappa_m} * sqrt(n) (P{S_{n-m} = kappa_n - kappa_m} - P{S_n = kappa_n})

and E[Y_n^2] = n p (1 - p) with p = P{S_n = kappa_n}.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .convolve import DEFAULT_CAP, SumCache, iter_sums
from .errors import BadOrder, EmptyGrid
from .lattice import DistStats, LatticePmf, validate


@dataclass(frozen=True)
class KappaSequence:
    """kappa_n = n*v0 + D*(offset(n) + shift).

    ``offset(n)`` is the lattice point nearest to n*mu + kappa*sqrt(n), ties
    broken toward -inf. A non-zero ``shift`` (fraction of D) moves every target
    off the lattice, the degenerate case where all hit probabilities vanish.
    """

    kappa: float
    mu: float
    v0: float
    D: float
    shift: float = 0.0

    @property
    def on_lattice(self) -> bool:
        return self.shift == 0.0

    def offsets(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=float)
        x = (ns * self.mu + self.kappa * np.sqrt(ns) - ns * self.v0) / self.D
        return np.ceil(x - 0.5).astype(np.int64)

    def offset(self, n: int) -> int:
        return int(self.offsets([n])[0])

    def value(self, n: int) -> float:
        return n * self.v0 + self.D * (self.offset(n) + self.shift)


def kappa_sequence(stats: DistStats, pmf: LatticePmf, kappa: float, shift: float = 0.0) -> KappaSequence:
    if not stats.sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    if not 0 <= shift < 1:
        raise ValueError(f"shift must lie in [0, 1), got {shift!r}")
    return KappaSequence(kappa=kappa, mu=stats.mu, v0=pmf.v0, D=pmf.D, shift=shift)


def _cov(n: int, m: int, p_m: float, p_inc: float, p_n: float) -> float:
    if m == n:
        return n * p_n * (1 - p_n)
    return math.sqrt(m) * p_m * math.sqrt(n) * (p_inc - p_n)


def exact_cov(
    pmf: LatticePmf, seq: KappaSequence, n: int, m: int, cache: SumCache | None = None
) -> float:
    if not 1 <= m <= n:
        raise BadOrder(f"need 1 <= m <= n, got m={m}, n={n}")
    cache = cache or SumCache(pmf)
    p_n = cache.prob(n, seq.value(n))
    if m == n:
        return _cov(n, n, p_n, p_n, p_n)
    p_m = cache.prob(m, seq.value(m))
    if p_m == 0.0:
        return 0.0
    return _cov(n, m, p_m, cache.prob(n - m, seq.value(n) - seq.value(m)), p_n)


def thm1_shape(n: int, m: int) -> float:
    return 1 / (math.sqrt(n / m) - 1) + math.sqrt(n) / (n - m) ** 1.5


def cor1_shape(n: int, m: int) -> float:
    return math.sqrt(m / n)


def gw_shape(n: int, m: int, alpha: float) -> float:
    return 1 / (math.sqrt(n / m) - 1) + math.sqrt(n / (n - m)) / (n - m) ** alpha


@dataclass(frozen=True)
class CorrelationRecord:
    n: int
    m: int
    exact_cov: float
    thm1_bound_shape: float
    cor1_shape: float
    gw_shape: float

    @property
    def ratio(self) -> float:
        return abs(self.exact_cov) / self.thm1_bound_shape

    @property
    def cor1_ratio(self) -> float:
        return abs(self.exact_cov) / self.cor1_shape

    @property
    def gw_ratio(self) -> float:
        return abs(self.exact_cov) / self.gw_shape


@dataclass(frozen=True)
class ScanResult:
    records: tuple[CorrelationRecord, ...]
    c: float
    alpha: float

    def restrict(self, n_max: int) -> ScanResult:
        return ScanResult(tuple(r for r in self.records if r.n <= n_max), self.c, self.alpha)

    @property
    def C_hat(self) -> float:
        return max(r.ratio for r in self.records)

    @property
    def C_c_hat(self) -> float:
        vals = [r.cor1_ratio for r in self.records if r.m <= self.c * r.n]
        return max(vals) if vals else math.nan

    @property
    def C_gw_hat(self) -> float:
        return max(r.gw_ratio for r in self.records)


def point_table(
    pmf: LatticePmf, queries: dict[int, set[int]], cap: int = DEFAULT_CAP
) -> dict[tuple[int, int], float]:
    """P{S_j = j*v0 + D*k} for every requested (j, k), from a single pass over S_1..S_max."""
    out: dict[tuple[int, int], float] = {}
    if not queries:
        return out
    n_max = max(queries)
    for dist in iter_sums(pmf, n_max, cap):
        for k in queries.get(dist.n, ()):
            out[(dist.n, k)] = dist.at_offset(k)
    return out


def bound_scan(
    pmf: LatticePmf,
    seq: KappaSequence,
    grid: Iterable[tuple[int, int]],
    c: float = 0.5,
    alpha: float = 0.5,
    cap: int = DEFAULT_CAP,
) -> ScanResult:
    """Exact E[Y_n Y_m] over ``grid`` with ratios to each bound shape."""
    grid = sorted(set((int(n), int(m)) for n, m in grid))
    if not grid:
        raise EmptyGrid("no (n, m) pairs to scan")
    for n, m in grid:
        if not 1 <= m < n:
            raise BadOrder(f"grid pair (n={n}, m={m}) violates 1 <= m < n")
    if not 0 < c < 1:
        raise ValueError(f"c must lie in (0, 1), got {c!r}")

    ns = sorted({n for n, _ in grid} | {m for _, m in grid})
    off = dict(zip(ns, (int(k) for k in seq.offsets(ns))))
    queries: dict[int, set[int]] = defaultdict(set)
    if seq.on_lattice:
        for n, m in grid:
            queries[n].add(off[n])
            queries[m].add(off[m])
            queries[n - m].add(off[n] - off[m])
    table = point_table(pmf, queries, cap)

    records = []
    for n, m in grid:
        if seq.on_lattice:
            cov = _cov(n, m, table[(m, off[m])], table[(n - m, off[n] - off[m])], table[(n, off[n])])
        else:
            cov = 0.0
        records.append(CorrelationRecord(n, m, cov, thm1_shape(n, m), cor1_shape(n, m), gw_shape(n, m, alpha)))
    return ScanResult(tuple(records), c, alpha)


def pow2_grid(n_lo: int = 64, n_hi: int = 4096) -> list[tuple[int, int]]:
    """Powers of two n in [n_lo, n_hi], every m < n."""
    out = []
    n = 1
    while n <= n_hi:
        if n >= n_lo:
            out += [(n, m) for m in range(1, n)]
        n *= 2
    return out


def decade_grid(n_hi: int = 1000) -> list[tuple[int, int]]:
    """Decades n = 10, 100, ... up to n_hi; m on a 1-2-5 ladder plus n-1."""
    out = []
    n = 10
    while n <= n_hi:
        ms = {n - 1}
        scale = 1
        while scale < n:
            ms |= {v for v in (scale, 2 * scale, 5 * scale) if v < n}
            scale *= 10
        out += [(n, m) for m in sorted(ms)]
        n *= 10
    return out


def stats_and_sequence(pmf: LatticePmf, kappa: float, shift: float = 0.0) -> tuple[DistStats, KappaSequence]:
    stats = validate(pmf)
    return stats, kappa_sequence(stats, pmf, kappa, shift)
