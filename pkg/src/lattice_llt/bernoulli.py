"""Bernoulli-part decomposition X = V + eps*D*L with a fair bit L independent of (V, eps).

Given non-negative weights tau_k with tau_{k-1} + tau_k <= 2 f(k) and total
mass vartheta, the pair (V, eps) has

    P{(V, eps) = (v_k, 1)} = tau_k
    P{(V, eps) = (v_k, 0)} = f(k) - (tau_{k-1} + tau_k) / 2

and summing n copies gives S_n = W_n + D*M_n with W_n = sum V_j,
B_n = sum eps_j ~ Binomial(n, vartheta) and M_n = sum eps_j L_j.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import InadmissibleTau, NoBernoulliPart
from .lattice import LatticePmf, bernoulli_mass
from .rng import make_rng

TAU_TOL = 1e-12


@dataclass(frozen=True)
class TauSequence:
    tau: Mapping[int, float]
    vartheta: float

    def __post_init__(self):
        clean = {int(k): float(t) for k, t in self.tau.items() if t != 0}
        if any(t < 0 or not math.isfinite(t) for t in clean.values()):
            raise InadmissibleTau("tau entries must be finite and non-negative")
        object.__setattr__(self, "tau", MappingProxyType(dict(sorted(clean.items()))))

    def at(self, k: int) -> float:
        return self.tau.get(k, 0.0)


@dataclass(frozen=True, eq=False)
class BernoulliPart:
    """Joint law of (V, eps): ``joint[(k, e)] = P{V = v_k, eps = e}``."""

    joint: Mapping[tuple[int, int], float]
    vartheta: float
    base: LatticePmf

    def v_marginal(self) -> dict[int, float]:
        out: dict[int, float] = defaultdict(float)
        for (k, _), p in self.joint.items():
            out[k] += p
        return dict(out)

    def eps_one(self) -> float:
        return math.fsum(p for (_, e), p in self.joint.items() if e == 1)

    def ordered_atoms(self) -> list[tuple[int, int, float]]:
        """Atoms in sampling order: ascending k, then eps=1 before eps=0."""
        return sorted(((k, e, p) for (k, e), p in self.joint.items()), key=lambda a: (a[0], -a[1]))


@dataclass(frozen=True)
class DecompositionSample:
    """One path of (V_j, eps_j, L_j), j = 1..n; V_j stored as lattice offsets."""

    v_offsets: np.ndarray
    eps: np.ndarray
    bits: np.ndarray
    v0: float
    D: float

    @property
    def n(self) -> int:
        return len(self.eps)

    @property
    def B(self) -> int:
        return int(self.eps.sum())

    @property
    def M(self) -> int:
        return int((self.eps * self.bits).sum())

    @property
    def W(self) -> float:
        return self.n * self.v0 + self.D * int(self.v_offsets.sum())

    @property
    def S(self) -> float:
        return self.W + self.D * self.M

    @property
    def s_offset(self) -> int:
        """Lattice offset of S_n relative to n*v0."""
        return int(self.v_offsets.sum()) + self.M


def canonical_tau(pmf: LatticePmf) -> TauSequence:
    """tau_k = min(f(k), f(k+1)), total mass vartheta_X."""
    tau = {k: min(p, pmf.f(k + 1)) for k, p in pmf.probs.items()}
    vartheta = bernoulli_mass(pmf)
    if vartheta <= 0:
        raise NoBernoulliPart("no two adjacent lattice atoms carry mass")
    return TauSequence(tau, vartheta)


def build_part(pmf: LatticePmf, tau: TauSequence, allow_empty: bool = False) -> BernoulliPart:
    """Joint law of (V, eps) for an admissible tau.

    ``allow_empty`` admits tau == 0 (eps identically 0), which is outside the
    decomposition's useful range but keeps the reconstruction identity testable.
    """
    total = math.fsum(tau.tau.values())
    if abs(total - tau.vartheta) > TAU_TOL:
        raise InadmissibleTau(f"tau sums to {total!r}, declared vartheta is {tau.vartheta!r}")
    if not (0 < tau.vartheta < 1 or (allow_empty and tau.vartheta == 0)):
        raise InadmissibleTau(f"vartheta must lie in (0, 1), got {tau.vartheta!r}")
    for k in tau.tau:
        if pmf.f(k) == 0 or pmf.f(k + 1) == 0:
            # tau_k > 0 forces mass at both v_k and v_{k+1}
            raise InadmissibleTau(f"tau_{k} > 0 but f({k}) or f({k + 1}) is zero")

    joint: dict[tuple[int, int], float] = {}
    for k, t in tau.tau.items():
        joint[(k, 1)] = t
    for k, fk in pmf.probs.items():
        q = fk - (tau.at(k - 1) + tau.at(k)) / 2
        if q < -TAU_TOL:
            raise InadmissibleTau(f"P{{V=v_{k}, eps=0}} = {q!r} < 0")
        if q > 0:
            joint[(k, 0)] = q

    part = BernoulliPart(MappingProxyType(joint), tau.vartheta, pmf)
    marg = part.v_marginal()
    for k in set(marg) | set(pmf.probs):
        expected = pmf.f(k) + (tau.at(k) - tau.at(k - 1)) / 2
        if abs(marg.get(k, 0.0) - expected) > TAU_TOL:
            raise InadmissibleTau(f"V-marginal mismatch at offset {k}")
    if abs(part.eps_one() - tau.vartheta) > TAU_TOL:
        raise InadmissibleTau("P{eps=1} differs from vartheta")
    return part


def reconstructed_law(part: BernoulliPart) -> LatticePmf:
    """Law of V + eps*D*L, mixing over the fair bit L."""
    out: dict[int, list[float]] = defaultdict(list)
    for (k, e), p in part.joint.items():
        if e == 1:
            out[k].append(p / 2)
            out[k + 1].append(p / 2)
        else:
            out[k].append(p)
    base = part.base
    return LatticePmf(base.v0, base.D, {k: math.fsum(ps) for k, ps in out.items()})


def _atom_table(part: BernoulliPart) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    atoms = part.ordered_atoms()
    ks = np.array([a[0] for a in atoms], dtype=np.int64)
    es = np.array([a[1] for a in atoms], dtype=np.int8)
    cdf = np.cumsum([a[2] for a in atoms])
    cdf[-1] = 1.0
    return ks, es, cdf


def sample_decomposition(part: BernoulliPart, n: int, seed: int) -> DecompositionSample:
    """Draw (V_j, eps_j) by inverse CDF and independent fair bits L_j."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ks, es, cdf = _atom_table(part)
    rng = make_rng(seed)
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    bits = rng.integers(0, 2, size=n, dtype=np.int8)
    return DecompositionSample(ks[idx], es[idx], bits, part.base.v0, part.base.D)


def sample_sums(part: BernoulliPart, n: int, reps: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """``reps`` independent draws of (offset of S_n, B_n) through the decomposition."""
    ks, es, cdf = _atom_table(part)
    rng = make_rng(seed)
    idx = np.searchsorted(cdf, rng.random((reps, n)), side="right")
    bits = rng.integers(0, 2, size=(reps, n), dtype=np.int64)
    eps = es[idx].astype(np.int64)
    return ks[idx].sum(axis=1) + (eps * bits).sum(axis=1), eps.sum(axis=1)


def exact_decomposition_law(part: BernoulliPart, n: int) -> dict[int, float]:
    """Law of the offset of W_n + D*M_n by enumerating every (V, eps, L) path.

    Cost grows like (2 * #atoms)^n; intended as a small-n test oracle only.
    """
    triples = []
    for (k, e), p in part.joint.items():
        if e == 1:
            triples += [(k + 0, p / 2), (k + 1, p / 2)]
        else:
            # L is still drawn but eps*L = 0
            triples += [(k, p / 2), (k, p / 2)]
    acc: dict[int, list[float]] = defaultdict(list)
    for path in itertools.product(triples, repeat=n):
        acc[sum(t[0] for t in path)].append(math.prod(t[1] for t in path))
    return {k: math.fsum(v) for k, v in sorted(acc.items())}


def exact_b_law(part: BernoulliPart, n: int) -> np.ndarray:
    """Law of B_n built by folding the eps marginal n times (no binomial formula)."""
    one = part.eps_one()
    law = np.array([1.0])
    for _ in range(n):
        law = np.convolve(law, [1 - one, one])
    return law
