"""Exact desk-scale reference for threshold-detected Gaussian networks.

Propagates the symmetric-units (vacuum = identity) quadrature covariance
through the network and obtains click-pattern probabilities by
inclusion-exclusion over vacuum overlaps, independent of any Monte Carlo.
Intended for M <= 16 cross-checks of the phase-space sampler.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DataError, DimensionError, NumericalGuardError
from .gcp import GcpDistribution, GcpSpec, Source
from .network import TransmissionMatrix
from .states import GaussianModeMoments

_SYM_TOL = 1e-12
_LOSS_EIG_TOL = -1e-10
MAX_CLICKED_MODES = 20
MAX_ENUM_MODES = 16


@dataclass(frozen=True)
class QuadratureCovariance:
    """2M x 2M real symmetric covariance, order (x_1..x_M, y_1..y_M), zero mean."""

    mode_count: int
    matrix: np.ndarray

    def __post_init__(self):
        v = self.matrix
        if v.shape != (2 * self.mode_count, 2 * self.mode_count):
            raise DimensionError("covariance must be 2M x 2M")
        if np.max(np.abs(v - v.T)) > _SYM_TOL:
            raise DataError("covariance matrix is not symmetric")
        if np.min(np.linalg.eigvalsh(v)) < _LOSS_EIG_TOL:
            raise DataError("covariance matrix has negative eigenvalues")


def output_covariance(moments: GaussianModeMoments,
                      tm: TransmissionMatrix) -> QuadratureCovariance:
    """Symmetric-units output covariance: V = S V_in S^T + (I - S S^T).

    V_in is diagonal with symmetric variances var + 1 per quadrature; S is the
    real 2M x 2N quadrature form of T; the loss complement is filled with
    vacuum.
    """
    n_in = moments.mode_count
    if tm.dim_in != n_in:
        raise DimensionError("moments and transmission matrix mode counts differ")
    m_out = tm.dim_out
    v_in = np.diag(np.concatenate([moments.var_x + 1.0, moments.var_y + 1.0]))
    t_re, t_im = tm.entries.real, tm.entries.imag
    s = np.block([[t_re, -t_im], [t_im, t_re]])
    loss = np.eye(2 * m_out) - s @ s.T
    if np.min(np.linalg.eigvalsh(loss)) < _LOSS_EIG_TOL:
        raise DataError("transmission matrix is unphysical: I - S S^T is indefinite")
    v = s @ v_in @ s.T + loss
    return QuadratureCovariance(mode_count=m_out, matrix=0.5 * (v + v.T))


def _quad_indices(modes: Iterable[int], m: int) -> np.ndarray:
    idx = np.fromiter(modes, dtype=np.intp)
    return np.concatenate([idx, idx + m])


def vacuum_probability(cov: QuadratureCovariance, subset: Iterable[int]) -> float:
    """Probability that every detector in `subset` reports no click."""
    subset = list(subset)
    if not subset:
        return 1.0
    if min(subset) < 0 or max(subset) >= cov.mode_count:
        raise DimensionError("subset indices out of range")
    if len(set(subset)) != len(subset):
        raise DataError("subset contains repeated modes")
    q = _quad_indices(subset, cov.mode_count)
    sigma_q = (cov.matrix[np.ix_(q, q)] + np.eye(2 * len(subset))) / 2.0
    det = np.linalg.det(sigma_q)
    if det <= 0:
        raise DataError("singular vacuum-overlap matrix")  # cannot occur for valid V
    return float(1.0 / np.sqrt(det))


def pattern_probability(cov: QuadratureCovariance, pattern: Iterable[int]) -> float:
    """Exact probability of one binary click pattern, by inclusion-exclusion
    over subsets of the clicked modes."""
    bits = np.asarray(list(pattern), dtype=int)
    if len(bits) != cov.mode_count:
        raise DimensionError("pattern length does not match mode count")
    clicked = [int(j) for j in np.flatnonzero(bits == 1)]
    silent = [int(j) for j in np.flatnonzero(bits == 0)]
    if len(clicked) > MAX_CLICKED_MODES:
        raise NumericalGuardError(
            f"inclusion-exclusion over {len(clicked)} clicked modes exceeds "
            f"the 2^{MAX_CLICKED_MODES} cost guard")
    total = 0.0
    for mask in range(1 << len(clicked)):
        sub = [clicked[i] for i in range(len(clicked)) if mask >> i & 1]
        total += (-1.0) ** len(sub) * vacuum_probability(cov, silent + sub)
    if total < -1e-10 or total > 1.0 + 1e-10:
        raise DataError(f"pattern probability {total} outside [0, 1]")
    return float(min(max(total, 0.0), 1.0))


def _all_pattern_probabilities(cov: QuadratureCovariance) -> np.ndarray:
    """P(c) for every bitmask c, via a superset Moebius transform of the
    vacuum-overlap table (equivalent to per-pattern inclusion-exclusion)."""
    m = cov.mode_count
    sigma_q = (cov.matrix + np.eye(2 * m)) / 2.0
    table = np.empty(1 << m)
    for mask in range(1 << m):  # mask = modes forced to vacuum
        sub = [j for j in range(m) if mask >> j & 1]
        if not sub:
            table[mask] = 1.0
            continue
        q = _quad_indices(sub, m)
        table[mask] = 1.0 / np.sqrt(np.linalg.det(sigma_q[np.ix_(q, q)]))
    # F(S) = sum_{A >= S} (-1)^{|A - S|} v(A), computed bit by bit
    f = table.copy()
    codes = np.arange(1 << m)
    for j in range(m):
        bit = 1 << j
        low = codes[(codes & bit) == 0]
        f[low] -= f[low | bit]
    # pattern c clicks exactly the complement of the vacuum-forced set
    probs = np.empty(1 << m)
    full = (1 << m) - 1
    for c in range(1 << m):
        probs[c] = f[full ^ c]
    return probs


def exact_gcp(cov: QuadratureCovariance, spec: GcpSpec) -> GcpDistribution:
    """Exhaustive grouped-count distribution from exact pattern probabilities."""
    m = cov.mode_count
    if m > MAX_ENUM_MODES:
        raise NumericalGuardError(
            f"exhaustive enumeration limited to M <= {MAX_ENUM_MODES}")
    if spec.total_modes != m:
        raise DimensionError("spec mode count does not match covariance")
    probs = _all_pattern_probabilities(cov)
    codes = np.arange(1 << m)
    bits = (codes[:, None] >> np.arange(m)) & 1
    grouped = [bits[:, np.array(s, dtype=np.intp)].sum(axis=1) for s in spec.subsets]
    flat = np.ravel_multi_index(grouped, spec.shape)
    grid = np.bincount(flat, weights=probs,
                       minlength=int(np.prod(spec.shape))).reshape(spec.shape)
    return GcpDistribution(spec=spec, probabilities=grid,
                           sigma=np.zeros(spec.shape), source=Source.EXACT,
                           ensembles_or_patterns=1 << m)
