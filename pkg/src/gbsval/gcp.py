"""Grouped count probabilities (GCPs) over disjoint mode subsets.

Two routes produce the same observable: a Fourier-observable average over
phase-space trajectories (simulate_gcp), and direct binning of discrete click
patterns (bin_patterns). A d-dimensional GCP lives on the grid
(M_1+1) x ... x (M_d+1) of grouped counts m_j = sum of clicks in subset S_j.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import numpy as np
from numba import njit

from .errors import DataError, DimensionError, NumericalGuardError
from .sampler import ClickMoments

if TYPE_CHECKING:  # pragma: no cover
    from .faker import PatternSet

MAX_DIMENSION = 4
_EXP_GUARD = 700.0


class Source(enum.Enum):
    PHASE_SPACE = "phase_space"
    PATTERNS = "patterns"
    EXACT = "exact"


@dataclass(frozen=True)
class GcpSpec:
    """d disjoint ordered mode subsets within an M-mode network."""

    total_modes: int
    subsets: tuple[tuple[int, ...], ...]
    permutation_seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "subsets",
                           tuple(tuple(int(i) for i in s) for s in self.subsets))
        if not 1 <= len(self.subsets) <= MAX_DIMENSION:
            raise DimensionError(
                f"GCP dimension must be in [1, {MAX_DIMENSION}], got {len(self.subsets)}")
        flat = [i for s in self.subsets for i in s]
        if len(set(flat)) != len(flat):
            raise DataError("subsets must be pairwise disjoint")
        if flat and (min(flat) < 0 or max(flat) >= self.total_modes):
            raise DataError("subset indices out of range")
        if any(len(s) == 0 for s in self.subsets):
            raise DataError("subsets must be non-empty")

    @property
    def dimension(self) -> int:
        return len(self.subsets)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.subsets)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(s) + 1 for s in self.subsets)

    def to_dict(self) -> dict:
        return {"total_modes": self.total_modes,
                "subsets": [list(s) for s in self.subsets],
                "permutation_seed": self.permutation_seed}

    @classmethod
    def from_dict(cls, d: dict) -> "GcpSpec":
        return cls(total_modes=int(d["total_modes"]),
                   subsets=tuple(tuple(s) for s in d["subsets"]),
                   permutation_seed=d.get("permutation_seed"))


@dataclass(frozen=True)
class GcpDistribution:
    """Probabilities over the grouped-count grid, with per-bin sampling errors."""

    spec: GcpSpec
    probabilities: np.ndarray
    sigma: np.ndarray
    source: Source
    ensembles_or_patterns: int
    raw_counts: np.ndarray | None = None

    def __post_init__(self):
        if self.probabilities.shape != self.spec.shape:
            raise DimensionError("probability grid does not match the grouping shape")
        if self.sigma.shape != self.spec.shape:
            raise DimensionError("sigma grid does not match the grouping shape")
        if np.any(self.sigma < 0):
            raise DataError("sigma must be non-negative")

    def to_json(self, path: str | Path, extra: dict | None = None) -> None:
        payload = {
            "spec": self.spec.to_dict(),
            "shape": list(self.spec.shape),
            "source": self.source.value,
            "ensembles_or_patterns": self.ensembles_or_patterns,
            "probabilities": [float(v) for v in self.probabilities.ravel()],
            "sigma": [float(v) for v in self.sigma.ravel()],
            "raw_counts": None if self.raw_counts is None
            else [int(v) for v in self.raw_counts.ravel()],
        }
        if extra:
            payload.update(extra)
        with open(path, "w") as fh:
            json.dump(payload, fh)

    @classmethod
    def from_json(cls, path: str | Path) -> "GcpDistribution":
        with open(path) as fh:
            payload = json.load(fh)
        spec = GcpSpec.from_dict(payload["spec"])
        shape = tuple(payload["shape"])
        counts = payload.get("raw_counts")
        return cls(
            spec=spec,
            probabilities=np.array(payload["probabilities"], dtype=float).reshape(shape),
            sigma=np.array(payload["sigma"], dtype=float).reshape(shape),
            source=Source(payload["source"]),
            ensembles_or_patterns=int(payload["ensembles_or_patterns"]),
            raw_counts=None if counts is None
            else np.array(counts, dtype=np.int64).reshape(shape),
        )

    def to_csv(self, path: str | Path, header_comment: str | None = None) -> None:
        """One row per bin: m-indices, probability, sigma, counts."""
        with open(path, "w") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            cols = [f"m{j + 1}" for j in range(self.spec.dimension)]
            fh.write(",".join(cols + ["probability", "sigma", "counts"]) + "\n")
            counts = self.raw_counts
            for idx in np.ndindex(*self.spec.shape):
                c = "" if counts is None else str(int(counts[idx]))
                fh.write(",".join([str(i) for i in idx]
                                  + [repr(float(self.probabilities[idx])),
                                     repr(float(self.sigma[idx])), c]) + "\n")


def partition_modes(total_modes: int, dimension: int,
                    permutation_seed: int | None = None) -> GcpSpec:
    """Split modes into d equal subsets: contiguous blocks, or a uniformly
    random disjoint partition when a permutation seed is given."""
    if dimension < 1 or dimension > total_modes:
        raise DimensionError("dimension must satisfy 1 <= d <= M")
    if total_modes % dimension != 0:
        raise DataError("equal split requires d to divide M; pass explicit subsets otherwise")
    size = total_modes // dimension
    if permutation_seed is None:
        order = np.arange(total_modes)
    else:
        gen = np.random.Generator(np.random.Philox(key=permutation_seed & (2**128 - 1)))
        order = gen.permutation(total_modes)
    subsets = tuple(tuple(int(i) for i in order[j * size:(j + 1) * size])
                    for j in range(dimension))
    return GcpSpec(total_modes=total_modes, subsets=subsets,
                   permutation_seed=permutation_seed)


def permutation_count(total_modes: int, dimension: int) -> int:
    """Exact number of distinct permutation tests, C(M, M/d) / d."""
    if dimension < 1 or total_modes % dimension != 0:
        raise DataError("d must divide M")
    num = math.comb(total_modes, total_modes // dimension)
    q, rem = divmod(num, dimension)
    if rem:
        raise DataError("C(M, M/d) is not divisible by d")  # not expected
    return q


@njit(cache=True, nogil=True)
def _subset_fourier(p0, p1, z):  # pragma: no cover - compiled
    """f[e, k] = prod_i (p0[e, i] + p1[e, i] * z[k]) for one subset."""
    n_traj, n_modes = p0.shape
    n_k = z.shape[0]
    f = np.ones((n_traj, n_k), np.complex128)
    for e in range(n_traj):
        row = f[e]
        for i in range(n_modes):
            a = p0[e, i]
            b = p1[e, i]
            for k in range(n_k):
                row[k] *= a + b * z[k]
    return f


_EINSUM = {1: "ek->k", 2: "ek,el->kl", 3: "ek,el,em->klm", 4: "ek,el,em,en->klmn"}


def fourier_block_sum(p0: np.ndarray, p1: np.ndarray, spec: GcpSpec) -> np.ndarray:
    """Sum over trajectories of the outer product of per-subset Fourier factors.

    p0, p1 are the (E, M) no-click and click weights exp(-n') and 1 - exp(-n').
    Returns the unnormalized Fourier-space GCP contribution of this block.
    """
    factors = []
    for subset, n_k in zip(spec.subsets, spec.shape):
        z = np.exp(-2j * np.pi * np.arange(n_k) / n_k)
        idx = np.array(subset, dtype=np.intp)
        factors.append(_subset_fourier(
            np.ascontiguousarray(p0[:, idx]), np.ascontiguousarray(p1[:, idx]), z))
    return np.einsum(_EINSUM[spec.dimension], *factors)


def pairwise_sum(arrays: Sequence[np.ndarray]) -> np.ndarray:
    """Deterministic tree reduction; result depends only on the input order."""
    items = list(arrays)
    if not items:
        raise DataError("nothing to reduce")
    while len(items) > 1:
        items = [items[i] + items[i + 1] if i + 1 < len(items) else items[i]
                 for i in range(0, len(items), 2)]
    return items[0]


def inverse_dft(g_tilde: np.ndarray) -> np.ndarray:
    """Multi-dimensional inverse DFT, direct per-axis matrix form, real part."""
    out = g_tilde.astype(complex)
    for axis, n_k in enumerate(g_tilde.shape):
        k = np.arange(n_k)
        w = np.exp(2j * np.pi * np.outer(k, k) / n_k) / n_k
        out = np.moveaxis(np.tensordot(w, out, axes=([1], [axis])), 0, axis)
    return out.real


def block_bounds(total: int, blocks: int) -> list[tuple[int, int]]:
    """Contiguous near-equal [start, stop) block windows over trajectories."""
    if blocks < 2:
        raise DataError("at least 2 blocks are required for error estimation")
    if blocks > total:
        raise DataError("more blocks than trajectories")
    edges = np.linspace(0, total, blocks + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]


def check_exponent_guard(n_prime: np.ndarray) -> None:
    if np.max(np.abs(n_prime)) > _EXP_GUARD:
        raise NumericalGuardError(
            "output photon number exceeds the exp guard (|n'| > 700): "
            "divergent sampling, aborting")


def distribution_from_block_sums(spec: GcpSpec, block_sums: Sequence[np.ndarray],
                                 block_sizes: Sequence[int]) -> GcpDistribution:
    """Assemble probabilities and block-standard-error sigma from per-block sums."""
    total = int(sum(block_sizes))
    g_tilde = pairwise_sum(list(block_sums)) / total
    probs = inverse_dft(g_tilde)
    n_blocks = len(block_sums)
    block_means = np.stack([inverse_dft(s / n) for s, n in zip(block_sums, block_sizes)])
    sigma = np.std(block_means, axis=0, ddof=1) / np.sqrt(n_blocks)
    return GcpDistribution(spec=spec, probabilities=probs, sigma=sigma,
                           source=Source.PHASE_SPACE, ensembles_or_patterns=total)


def simulate_gcp(cm: ClickMoments, spec: GcpSpec, blocks: int = 100) -> GcpDistribution:
    """Fourier-observable GCP of a propagated ensemble.

    Per trajectory and subset j, f_j(k) = prod_{i in S_j}(pi(0) + pi(1) e^{-ik theta_j});
    the trajectory average of the outer product over subsets is inverse-DFT'd
    and the real part taken. Sampling error is the standard error of `blocks`
    contiguous sub-ensemble means.
    """
    n_traj, n_modes = cm.n_prime.shape
    if spec.total_modes != n_modes:
        raise DimensionError("spec mode count does not match the ensemble")
    check_exponent_guard(cm.n_prime)
    p1 = cm.pi1
    p0 = 1.0 - p1
    sums, sizes = [], []
    for a, b in block_bounds(n_traj, blocks):
        sums.append(fourier_block_sum(p0[a:b], p1[a:b], spec))
        sizes.append(b - a)
    return distribution_from_block_sums(spec, sums, sizes)


def bin_patterns(patterns: "PatternSet", spec: GcpSpec) -> GcpDistribution:
    """Histogram a discrete pattern set on the grouped-count grid."""
    if patterns.mode_count != spec.total_modes:
        raise DimensionError("pattern length does not match spec mode count")
    bits = patterns.patterns
    total = bits.shape[0]
    grouped = [bits[:, np.array(s, dtype=np.intp)].sum(axis=1) for s in spec.subsets]
    flat = np.ravel_multi_index(grouped, spec.shape)
    counts = np.bincount(flat, minlength=int(np.prod(spec.shape))).reshape(spec.shape)
    probs = counts / total
    sigma = np.sqrt(probs * (1.0 - probs) / total)
    return GcpDistribution(spec=spec, probabilities=probs, sigma=sigma,
                           source=Source.PATTERNS, ensembles_or_patterns=total,
                           raw_counts=counts.astype(np.int64))
