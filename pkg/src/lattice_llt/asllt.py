"""Monte Carlo check of the almost sure local limit theorem.

Along one simulated path the statistic

    A_N = (1 / log N) * sum_{n <= N} n^{-1/2} 1{S_n = kappa_n}

should approach D/(sqrt(2 pi) sigma) exp(-kappa^2 / (2 sigma^2)). Convergence
is at log speed, so checkpoints are spaced by decades.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .convolve import DEFAULT_CAP, iter_sums
from .correlation import KappaSequence
from .lattice import LatticePmf, validate
from .llt import llt_limit
from .rng import make_rng

CHUNK = 1 << 16


def default_checkpoints(N_max: int) -> list[int]:
    cps = []
    N = 100
    while N <= N_max:
        cps.append(N)
        N *= 10
    if not cps or cps[-1] != N_max:
        cps.append(N_max)
    return cps


def _check_checkpoints(N_max: int, checkpoints) -> list[int]:
    if N_max < 10:
        raise ValueError(f"N_max must be >= 10, got {N_max}")
    cps = default_checkpoints(N_max) if checkpoints is None else sorted(set(int(c) for c in checkpoints))
    if not cps or cps[0] < 10 or cps[-1] > N_max:
        raise ValueError(f"checkpoints must lie in [10, {N_max}]")
    return cps


@dataclass(frozen=True)
class AslltRun:
    seed: int
    stream: int | None
    N_max: int
    checkpoints: tuple[int, ...]
    values: tuple[float, ...]
    limit: float
    increments: np.ndarray | None = None

    def at(self, N: int) -> float:
        return self.values[self.checkpoints.index(N)]

    def windowed(self, N1: int, N2: int) -> float:
        """(1/log(N2/N1)) sum_{N1 < n <= N2} n^{-1/2} 1{S_n = kappa_n}.

        Same limit as A_N but free of the O(1/log N) bias from the first N1 terms.
        """
        return (math.log(N2) * self.at(N2) - math.log(N1) * self.at(N1)) / math.log(N2 / N1)


def run_path(
    pmf: LatticePmf,
    seq: KappaSequence,
    N_max: int,
    checkpoints: Sequence[int] | None = None,
    seed: int = 0,
    stream: int | None = None,
    keep_increments: bool = False,
) -> AslltRun:
    """Simulate one path of S_1..S_{N_max} and record A_N at each checkpoint.

    Steps are drawn by inverse CDF in chunks; the hit sum is carried across
    chunks so memory stays O(CHUNK). ``keep_increments`` stores the drawn
    lattice offsets for later cross-checking.
    """
    cps = _check_checkpoints(N_max, checkpoints)
    stats = validate(pmf)
    ks = np.fromiter(pmf.probs.keys(), dtype=np.int64)
    cdf = np.cumsum(list(pmf.probs.values()))
    cdf[-1] = 1.0
    rng = make_rng(seed, stream)

    values = []
    kept = []
    s_off = 0
    acc = 0.0
    cp_iter = iter(cps)
    next_cp = next(cp_iter)
    for start in range(1, N_max + 1, CHUNK):
        stop = min(start + CHUNK, N_max + 1)
        steps = ks[np.searchsorted(cdf, rng.random(stop - start), side="right")]
        if keep_increments:
            kept.append(steps)
        path = s_off + np.cumsum(steps)
        s_off = int(path[-1])
        ns = np.arange(start, stop)
        if seq.on_lattice:
            weights = np.where(path == seq.offsets(ns), 1 / np.sqrt(ns), 0.0)
        else:
            weights = np.zeros(len(ns))
        running = acc + np.cumsum(weights)
        while next_cp is not None and next_cp < stop:
            values.append(float(running[next_cp - start]) / math.log(next_cp))
            next_cp = next(cp_iter, None)
        acc = float(running[-1])

    return AslltRun(
        seed=seed,
        stream=stream,
        N_max=N_max,
        checkpoints=tuple(cps),
        values=tuple(values),
        limit=llt_limit(pmf.D, stats.sigma2, seq.kappa),
        increments=np.concatenate(kept) if keep_increments else None,
    )


@dataclass(frozen=True)
class EnsembleSummary:
    checkpoints: tuple[int, ...]
    mean: tuple[float, ...]
    std: tuple[float, ...]
    min: tuple[float, ...]
    max: tuple[float, ...]
    limit: float
    runs: tuple[AslltRun, ...]

    @property
    def paths(self) -> int:
        return len(self.runs)

    @property
    def stderr(self) -> tuple[float, ...]:
        return tuple(s / math.sqrt(self.paths) for s in self.std)

    @property
    def spread(self) -> tuple[float, ...]:
        return tuple(hi - lo for lo, hi in zip(self.min, self.max))

    def column(self, name: str, N: int) -> float:
        return getattr(self, name)[self.checkpoints.index(N)]


def run_ensemble(
    pmf: LatticePmf,
    seq: KappaSequence,
    N_max: int,
    checkpoints: Sequence[int] | None = None,
    paths: int = 20,
    master_seed: int = 0,
    threads: int = 1,
    streams: Sequence[int] | None = None,
) -> EnsembleSummary:
    """Independent paths keyed by (master_seed, stream); path i uses stream i unless ``streams`` overrides."""
    if paths < 2:
        raise ValueError(f"need at least 2 paths, got {paths}")
    streams = list(range(paths)) if streams is None else list(streams)
    if len(streams) != paths:
        raise ValueError("streams must have one entry per path")

    def one(stream):
        return run_path(pmf, seq, N_max, checkpoints, seed=master_seed, stream=stream)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(one, streams))
    else:
        runs = [one(s) for s in streams]

    table = np.array([r.values for r in runs])
    return EnsembleSummary(
        checkpoints=runs[0].checkpoints,
        mean=tuple(table.mean(axis=0).tolist()),
        std=tuple(table.std(axis=0, ddof=1).tolist()),
        min=tuple(table.min(axis=0).tolist()),
        max=tuple(table.max(axis=0).tolist()),
        limit=runs[0].limit,
        runs=tuple(runs),
    )


def expected_average_curve(
    pmf: LatticePmf, seq: KappaSequence, checkpoints: Sequence[int], cap: int = DEFAULT_CAP
) -> list[float]:
    """E[A_N] = (1/log N) sum_{n<=N} n^{-1/2} P{S_n = kappa_n} at each checkpoint, exactly."""
    cps = sorted(set(int(c) for c in checkpoints))
    if not cps or cps[0] < 2:
        raise ValueError("checkpoints must be >= 2")
    if not seq.on_lattice:
        return [0.0] * len(cps)
    N_max = cps[-1]
    offsets = seq.offsets(np.arange(1, N_max + 1))
    terms = np.empty(N_max)
    for dist in iter_sums(pmf, N_max, cap):
        terms[dist.n - 1] = dist.at_offset(int(offsets[dist.n - 1])) / math.sqrt(dist.n)
    return [math.fsum(terms[:N]) / math.log(N) for N in cps]


def expected_average(pmf: LatticePmf, seq: KappaSequence, N: int, cap: int = DEFAULT_CAP) -> float:
    return expected_average_curve(pmf, seq, [N], cap)[0]
