"""Chi-square and Wilson-Hilferty Z-score comparison of GCP distributions.

chi^2 = sum over valid bins of (G_a - G_b)^2 / (sigma_a^2 + sigma_b^2), where
a valid bin is one whose count-bearing side holds strictly more than 10
counts. When neither side carries counts (analytic vs analytic, e.g. Monte
Carlo vs exact oracle), bins with positive reference probability are valid.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .gcp import GcpDistribution

VALID_BIN_MIN_COUNTS = 10  # strictly greater than


@dataclass(frozen=True)
class TestReport:
    chi_square: float
    k: int
    z_score: float
    per_bin: list[tuple[tuple[int, ...], float]]  # (m-indices, dG / sigma)
    labels: tuple[str, str]

    def to_json(self, path: str | Path, extra: dict | None = None) -> None:
        payload = {
            "labels": list(self.labels),
            "chi_square": self.chi_square,
            "k": self.k,
            "z_score": self.z_score,
            "per_bin": [{"m": list(m), "normalized_difference": d}
                        for m, d in self.per_bin],
        }
        if extra:
            payload.update(extra)
        with open(path, "w") as fh:
            json.dump(payload, fh)

    def format_table(self) -> str:
        a, b = self.labels
        tag = f"Z_{a}{b}"
        lines = [
            f"comparison {a} vs {b}",
            f"  chi^2      = {self.chi_square:.6g}",
            f"  k (valid)  = {self.k}",
            f"  chi^2 / k  = {self.chi_square / self.k:.6g}",
            f"  {tag:<9} = {self.z_score:.4g}",
            "  bin: normalized difference",
        ]
        for m, d in self.per_bin:
            lines.append(f"  {','.join(str(i) for i in m):>12}: {d:+.3f}")
        return "\n".join(lines)


def _validity_mask(a: GcpDistribution, b: GcpDistribution) -> np.ndarray:
    if a.raw_counts is not None:
        return a.raw_counts > VALID_BIN_MIN_COUNTS
    if b.raw_counts is not None:
        return b.raw_counts > VALID_BIN_MIN_COUNTS
    return b.probabilities > 0


def chi_square_test(a: GcpDistribution, b: GcpDistribution):
    """Returns (chi_square, k, per_bin normalized differences)."""
    if a.spec.shape != b.spec.shape or a.spec.subsets != b.spec.subsets:
        raise DataError("distributions live on different grouped-count grids")
    var = a.sigma ** 2 + b.sigma ** 2
    mask = _validity_mask(a, b) & (var > 0)
    k = int(np.count_nonzero(mask))
    if k == 0:
        raise DataError("no valid bins to compare")
    diff = a.probabilities - b.probabilities
    norm = np.zeros_like(diff)
    norm[mask] = diff[mask] / np.sqrt(var[mask])
    chi2 = float(np.sum(norm[mask] ** 2))
    per_bin = [(idx, float(norm[idx])) for idx in np.ndindex(*a.spec.shape) if mask[idx]]
    return chi2, k, per_bin


def z_score(chi_square: float, k: int) -> float:
    """Wilson-Hilferty transform: ((chi2/k)^(1/3) - (1 - 2/(9k))) / sqrt(2/(9k))."""
    if k < 1:
        raise DataError("k must be >= 1")
    if k < 10:
        warnings.warn("Wilson-Hilferty normal approximation needs k >= 10",
                      stacklevel=2)
    var = 2.0 / (9.0 * k)
    return float(((chi_square / k) ** (1.0 / 3.0) - (1.0 - var)) / np.sqrt(var))


def compare_report(a: GcpDistribution, b: GcpDistribution,
                   labels: tuple[str, str]) -> TestReport:
    """Bundle chi-square, valid-bin count, Z-score and per-bin diagnostics."""
    chi2, k, per_bin = chi_square_test(a, b)
    return TestReport(chi_square=chi2, k=k, z_score=z_score(chi2, k),
                      per_bin=per_bin, labels=tuple(labels))
