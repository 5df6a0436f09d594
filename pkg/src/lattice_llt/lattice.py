"""Finitely supported laws on a lattice v0 + D*Z and their scalar characteristics."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import DegenerateLaw, NonMaximalSpan, SumNotOne

MASS_TOL = 1e-12
# totals this close to 1 are rounding noise; rescaling them would only drift the masses
EXACT_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class LatticePmf:
    """Law of X: ``probs[k] = P{X = v0 + D*k}``.

    Zero-mass offsets are dropped. Total mass within ``MASS_TOL`` of one is
    renormalized (unless already within rounding noise); anything further off
    raises :class:`SumNotOne`.
    """

    v0: float
    D: float
    probs: Mapping[int, float] = field(repr=True)

    def __post_init__(self):
        if not (math.isfinite(self.v0) and math.isfinite(self.D)) or self.D <= 0:
            raise ValueError(f"need finite v0 and D > 0, got v0={self.v0}, D={self.D}")
        if not self.probs:
            raise ValueError("empty probability map")
        clean = {}
        for k, p in self.probs.items():
            if int(k) != k:
                raise ValueError(f"offset {k!r} is not an integer")
            p = float(p)
            if not math.isfinite(p) or p < 0 or p > 1:
                raise ValueError(f"probability {p!r} at offset {k} outside [0, 1]")
            if p > 0:
                clean[int(k)] = p
        total = math.fsum(clean.values())
        if abs(total - 1.0) > MASS_TOL:
            raise SumNotOne(f"masses sum to {total!r}, not 1")
        if abs(total - 1.0) > EXACT_TOL:
            clean = {k: p / total for k, p in clean.items()}
        object.__setattr__(self, "probs", MappingProxyType(dict(sorted(clean.items()))))

    @property
    def k_min(self) -> int:
        return next(iter(self.probs))

    @property
    def k_max(self) -> int:
        return next(reversed(self.probs))

    @property
    def width(self) -> int:
        return self.k_max - self.k_min

    def f(self, k: int) -> float:
        return self.probs.get(k, 0.0)

    @cached_property
    def dense(self) -> np.ndarray:
        """Masses on offsets ``k_min .. k_max`` (zeros included)."""
        arr = np.zeros(self.width + 1)
        for k, p in self.probs.items():
            arr[k - self.k_min] = p
        return arr

    def value(self, k: int) -> float:
        return self.v0 + self.D * k

    def as_values(self) -> dict[float, float]:
        """Pushforward law on the real line."""
        return {self.value(k): p for k, p in self.probs.items()}

    def to_json(self) -> dict:
        return {"v0": self.v0, "D": self.D, "probs": {str(k): p for k, p in self.probs.items()}}

    def __eq__(self, other):
        if not isinstance(other, LatticePmf):
            return NotImplemented
        return (self.v0, self.D, dict(self.probs)) == (other.v0, other.D, dict(other.probs))

    def __hash__(self):
        return hash((self.v0, self.D, tuple(self.probs.items())))


@dataclass(frozen=True)
class DistStats:
    mu: float
    sigma2: float
    vartheta: float
    basber: bool

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)


def _gap_gcd(pmf: LatticePmf) -> int:
    return reduce(math.gcd, (k - pmf.k_min for k in pmf.probs), 0)


def bernoulli_mass(pmf: LatticePmf) -> float:
    """Sum over k of min(f(k), f(k+1))."""
    return math.fsum(min(p, pmf.f(k + 1)) for k, p in pmf.probs.items())


def validate(pmf: LatticePmf) -> DistStats:
    """Check the law is usable and return mean, variance, Bernoulli mass and (basber)."""
    total = math.fsum(pmf.probs.values())
    if abs(total - 1.0) > MASS_TOL:
        raise SumNotOne(f"masses sum to {total!r}, not 1")
    if len(pmf.probs) < 2:
        raise DegenerateLaw("single support point: variance is zero")
    g = _gap_gcd(pmf)
    if g != 1:
        raise NonMaximalSpan(f"support gaps share the factor {g}; true span is {g * pmf.D!r}")
    mu = math.fsum(p * pmf.value(k) for k, p in pmf.probs.items())
    sigma2 = math.fsum(p * (pmf.value(k) - mu) ** 2 for k, p in pmf.probs.items())
    if not sigma2 > 0:
        raise DegenerateLaw("variance is zero")
    vartheta = bernoulli_mass(pmf)
    return DistStats(mu=mu, sigma2=sigma2, vartheta=vartheta, basber=vartheta > 0)


def normalize_span(pmf: LatticePmf) -> LatticePmf:
    """Re-index so the origin sits on the smallest atom and the offset gaps have gcd 1."""
    if len(pmf.probs) < 2:
        raise DegenerateLaw("single support point")
    g = _gap_gcd(pmf)
    k0 = pmf.k_min
    if g == 1 and k0 == 0:
        return pmf
    return LatticePmf(
        v0=pmf.value(k0),
        D=pmf.D * g,
        probs={(k - k0) // g: p for k, p in pmf.probs.items()},
    )


def pmf_from_json(obj: Mapping) -> LatticePmf:
    try:
        probs = {int(k): float(v) for k, v in obj["probs"].items()}
        return LatticePmf(v0=float(obj["v0"]), D=float(obj["D"]), probs=probs)
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed pmf object: {exc}") from exc


def load_pmf(path: str | Path) -> LatticePmf:
    with open(path) as fh:
        return pmf_from_json(json.load(fh))


def bernoulli(p: float = 0.5) -> LatticePmf:
    return LatticePmf(v0=0.0, D=1.0, probs={0: 1 - p, 1: p})
