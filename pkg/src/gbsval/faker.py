"""Classical click-pattern generation from diagonal-P output ensembles.

Each trajectory yields exactly one binary pattern: bit j is Bernoulli with
success probability 1 - exp(-|alpha'_j|^2). Non-classical (positive-P)
ensembles are rejected; there is no known efficient way to generate discrete
counts from them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import rng
from .errors import DataError, RepresentationError
from .sampler import PhaseSpaceEnsemble, Representation, Stage


class PatternSource(enum.Enum):
    EXPERIMENT = "experiment"
    CLASSICAL_FAKE = "classical_fake"


@dataclass(frozen=True)
class PatternSet:
    """A collection of length-M binary click patterns."""

    mode_count: int
    patterns: np.ndarray  # (P, M) uint8 of 0/1
    source: PatternSource
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.patterns.ndim != 2 or self.patterns.shape[1] != self.mode_count:
            raise DataError("patterns must be a (P, mode_count) array")
        if self.patterns.size and not np.all((self.patterns == 0) | (self.patterns == 1)):
            raise DataError("patterns must contain only 0/1 entries")

    @property
    def count(self) -> int:
        return self.patterns.shape[0]


def classical_click_probabilities(ensemble: PhaseSpaceEnsemble) -> np.ndarray:
    """Per-trajectory, per-mode click probabilities 1 - exp(-|alpha|^2)."""
    if ensemble.representation is not Representation.DIAGONAL_P:
        raise RepresentationError(
            "pattern generation requires a diagonal-P (classical) ensemble")
    if ensemble.stage is not Stage.OUTPUT:
        raise RepresentationError("pattern generation requires an output-stage ensemble")
    n_prime = np.abs(ensemble.alpha) ** 2
    return 1.0 - np.exp(-n_prime)


def generate_classical_patterns(ensemble: PhaseSpaceEnsemble, seed: int,
                                first_trajectory: int = 0,
                                metadata: dict | None = None) -> PatternSet:
    """One Bernoulli-sampled pattern per trajectory, deterministic in (ensemble, seed).

    Draws are keyed by (seed, trajectory, mode), so any partition of
    trajectories reproduces the same bits; `first_trajectory` aligns a window
    of a larger ensemble with its global trajectory indices.
    """
    p_click = classical_click_probabilities(ensemble)
    u = rng.uniforms(seed, first_trajectory, ensemble.size, ensemble.mode_count)
    bits = (u < p_click).astype(np.uint8)
    md = {"seed": seed}
    if metadata:
        md.update(metadata)
    return PatternSet(mode_count=ensemble.mode_count, patterns=bits,
                      source=PatternSource.CLASSICAL_FAKE, metadata=md)


def write_patterns(path: str | Path, patterns: PatternSet,
                   header: dict | None = None) -> None:
    """Write one pattern per line as M contiguous '0'/'1' characters (LF)."""
    lookup = np.array([ord("0"), ord("1")], dtype=np.uint8)
    with open(path, "wb") as fh:
        if header:
            for k, v in header.items():
                fh.write(f"# {k}={v}\n".encode())
        rows = lookup[patterns.patterns]
        nl = np.full((rows.shape[0], 1), ord("\n"), dtype=np.uint8)
        fh.write(np.hstack([rows, nl]).tobytes())


def read_patterns(path: str | Path,
                  source: PatternSource = PatternSource.EXPERIMENT) -> PatternSet:
    """Read a pattern file; '#' lines are headers; errors carry line numbers."""
    path = Path(path)
    rows: list[bytes] = []
    numbers: list[int] = []
    width = None
    with open(path, "rb") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(b"#"):
                continue
            if width is None:
                width = len(line)
            elif len(line) != width:
                raise DataError(
                    f"{path}:{ln}: pattern length {len(line)} != expected {width}")
            rows.append(line)
            numbers.append(ln)
    if not rows:
        raise DataError(f"{path}: no patterns found")
    bits = np.frombuffer(b"".join(rows), dtype=np.uint8).reshape(len(rows), width)
    bad = (bits != ord("0")) & (bits != ord("1"))
    if bad.any():
        ln = numbers[int(np.argwhere(bad.any(axis=1))[0][0])]
        raise DataError(f"{path}:{ln}: pattern contains characters other than 0/1")
    return PatternSet(mode_count=width, patterns=bits - ord("0"),
                      source=source, metadata={"path": str(path)})
