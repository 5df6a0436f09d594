"""Gaussian local approximation of P{S_n = N} and its sup-norm error."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convolve import DEFAULT_CAP, convolve_n
from .lattice import LatticePmf, validate

SQRT_2PI = math.sqrt(2 * math.pi)


def gauss_local(n: int, N, mu: float, sigma2: float, D: float):
    """D/(sqrt(2 pi) sigma) * exp(-(N - n mu)^2 / (2 n sigma^2)); compare with sqrt(n) P{S_n = N}.

    ``N`` may be a scalar or an array.
    """
    if n < 1 or not sigma2 > 0:
        raise ValueError("need n >= 1 and sigma2 > 0")
    z = np.asarray(N, dtype=float) - n * mu
    out = D / (SQRT_2PI * math.sqrt(sigma2)) * np.exp(-(z * z) / (2 * n * sigma2))
    return float(out) if out.ndim == 0 else out


def llt_limit(D: float, sigma2: float, kappa: float = 0.0) -> float:
    """lim sqrt(n) P{S_n = kappa_n} when (kappa_n - n mu)/sqrt(n) -> kappa."""
    return D / (SQRT_2PI * math.sqrt(sigma2)) * math.exp(-(kappa**2) / (2 * sigma2))


@dataclass(frozen=True)
class LltErrorCurve:
    ns: tuple[int, ...]
    deltas: tuple[float, ...]
    alpha_hat: float
    alpha_se: float

    def rows(self):
        return list(zip(self.ns, self.deltas))


def sup_error(pmf: LatticePmf, n: int, cap: int = DEFAULT_CAP) -> float:
    """max over the reachable support of |sqrt(n) P{S_n = N} - gaussian term|."""
    stats = validate(pmf)
    dist = convolve_n(pmf, n, cap=cap)
    g = gauss_local(n, dist.values, stats.mu, stats.sigma2, pmf.D)
    return float(np.max(np.abs(math.sqrt(n) * dist.probs - g)))


def fit_rate(ns, deltas) -> tuple[float, float]:
    """Slope of -log(delta) against log(n) over the largest half of the points.

    Returns ``(slope, standard error)``; nan where too few points remain.
    """
    pts = sorted(zip(ns, deltas))
    pts = [(n, d) for n, d in pts[len(pts) // 2 :] if d > 0]
    if len(pts) < 2:
        return math.nan, math.nan
    x = np.log([p[0] for p in pts])
    y = -np.log([p[1] for p in pts])
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ (y - y.mean())) / sxx
    if len(pts) < 3:
        return slope, math.nan
    resid = y - y.mean() - slope * xc
    return slope, math.sqrt(float(resid @ resid) / (len(pts) - 2) / sxx)


def llt_error(pmf: LatticePmf, ns, cap: int = DEFAULT_CAP) -> LltErrorCurve:
    ns = sorted(set(int(n) for n in ns))
    if not ns:
        raise ValueError("no n values given")
    deltas = [sup_error(pmf, n, cap) for n in ns]
    alpha, se = fit_rate(ns, deltas)
    return LltErrorCurve(tuple(ns), tuple(deltas), alpha, se)


def fair_coin_pmf(n: int) -> np.ndarray:
    """C(n, z) / 2^n for z = 0..n, each correctly rounded from exact integers."""
    denom = 1 << n
    out = np.empty(n + 1)
    c = 1
    for z in range(n + 1):
        out[z] = c / denom
        c = c * (n - z) // (z + 1)
    return out


def bernoulli_llt_error(n: int) -> tuple[float, float]:
    """Sup-norm discrepancy of the fair-coin LLT at n and the product n*sup.

    Compares sqrt(n) P{L_1+..+L_n = z} with 2/sqrt(2 pi) exp(-(z - n/2)^2 / (n/2)).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    z = np.arange(n + 1)
    g = 2 / SQRT_2PI * np.exp(-((z - n / 2) ** 2) / (n / 2))
    sup = float(np.max(np.abs(math.sqrt(n) * fair_coin_pmf(n) - g)))
    return sup, n * sup
