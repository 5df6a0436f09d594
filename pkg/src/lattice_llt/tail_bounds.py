"""Chernoff bound for the lower tail of B_n ~ Binomial(n, vartheta).

    P{B_n <= theta*n} <= psi(theta)^n,
    psi(theta) = ((1 - vartheta)/(1 - theta))^(1 - theta) * (vartheta/theta)^theta

psi is nondecreasing on (0, vartheta], tends to 1 - vartheta at 0+ and equals
1 at vartheta, so every rate rho in (1 - vartheta, 1) is attained by a unique
theta(rho, vartheta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import DomainError

SOLVE_TOL = 1e-12


def log_psi(theta: float, vartheta: float) -> float:
    if not 0 < vartheta < 1:
        raise DomainError(f"vartheta must lie in (0, 1), got {vartheta!r}")
    if not 0 < theta <= vartheta:
        raise DomainError(f"theta must lie in (0, vartheta={vartheta!r}], got {theta!r}")
    if theta == vartheta:
        return 0.0
    return (1 - theta) * (math.log1p(-vartheta) - math.log1p(-theta)) + theta * (
        math.log(vartheta) - math.log(theta)
    )


def psi(theta: float, vartheta: float) -> float:
    return math.exp(log_psi(theta, vartheta))


def solve_theta(rho: float, vartheta: float, tol: float = SOLVE_TOL) -> float:
    """The theta in (0, vartheta) with psi(theta) = rho, by bisection."""
    if not 0 < vartheta < 1:
        raise DomainError(f"vartheta must lie in (0, 1), got {vartheta!r}")
    if not 1 - vartheta < rho < 1:
        raise DomainError(f"rho must lie in (1 - vartheta, 1) = ({1 - vartheta!r}, 1), got {rho!r}")
    lo, hi = 0.0, vartheta
    best, best_res = vartheta / 2, math.inf
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        res = psi(mid, vartheta) - rho
        if abs(res) < best_res:
            best, best_res = mid, abs(res)
        if abs(res) <= tol / 4:
            break
        if res < 0:
            lo = mid
        else:
            hi = mid
    if best_res > tol:
        raise DomainError(f"bisection stalled at residual {best_res!r}")
    return best


@dataclass(frozen=True)
class ChernoffParams:
    vartheta: float
    rho: float
    theta: float


def chernoff_params(vartheta: float, rho: float | None = None) -> ChernoffParams:
    """Rate and threshold pair; rho defaults to 1 - vartheta/2."""
    if rho is None:
        rho = 1 - vartheta / 2
    return ChernoffParams(vartheta, rho, solve_theta(rho, vartheta))


def binom_log_cdf(n: int, p: float, k: int) -> float:
    """log P{Binomial(n, p) <= k}, summing log-space terms exactly from their coefficients."""
    if k < 0:
        return -math.inf
    if k >= n:
        return 0.0
    j = np.arange(k + 1)
    terms = (
        gammaln(n + 1)
        - gammaln(j + 1)
        - gammaln(n - j + 1)
        + j * math.log(p)
        + (n - j) * math.log1p(-p)
    )
    return min(float(logsumexp(terms)), 0.0)


class ChernoffCheck(NamedTuple):
    exact: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.exact <= self.bound


def tail_cutoff(theta: float, n: int) -> int:
    """floor(theta * n), exact for the binary value of theta."""
    return math.floor(Fraction(theta) * n)


def verify_chernoff(vartheta: float, theta: float, n: int) -> ChernoffCheck:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    lp = log_psi(theta, vartheta)
    exact = math.exp(binom_log_cdf(n, vartheta, tail_cutoff(theta, n)))
    return ChernoffCheck(exact, math.exp(n * lp))
