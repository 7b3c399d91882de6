"""Linear-network maps: Haar-random unitaries and lossy transmission matrices."""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DataError, DimensionError

_UNITARITY_TOL = 1e-12
_SV_TOL = 1e-12
_PHYSICAL_EIG_TOL = -1e-10


@dataclass(frozen=True)
class UnitaryMatrix:
    """An M x M unitary with the seed it was generated from."""

    dim: int
    entries: np.ndarray
    seed: int

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("unitary dimension must be >= 1")
        if self.entries.shape != (self.dim, self.dim):
            raise DimensionError("entries shape does not match dim")
        defect = np.max(np.abs(self.entries @ self.entries.conj().T - np.eye(self.dim)))
        if defect > _UNITARITY_TOL:
            raise DataError(f"matrix is not unitary (defect {defect:.3e})")


@dataclass(frozen=True)
class TransmissionMatrix:
    """A possibly non-unitary M x N network map with loss provenance."""

    entries: np.ndarray
    intensity_transmission: float = 1.0
    haar_seed: int | None = None
    note: str = ""
    check_physical: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.entries.ndim != 2:
            raise DimensionError("transmission matrix must be 2-dimensional")
        if self.dim_in > self.dim_out:
            raise DimensionError("more input modes than output modes")
        smax = np.linalg.svd(self.entries, compute_uv=False)[0] if self.entries.size else 0.0
        if smax > 1.0 + _SV_TOL:
            if self.check_physical:
                raise DataError(
                    f"largest singular value {smax:.6f} > 1: loss complement not PSD")
            warnings.warn(
                f"transmission matrix has singular value {smax:.6f} > 1 "
                "(unphysical; accepted as a fit correction)", stacklevel=2)

    @property
    def dim_out(self) -> int:
        return self.entries.shape[0]

    @property
    def dim_in(self) -> int:
        return self.entries.shape[1]


class UnitarityReport(NamedTuple):
    defect: float                # max |T T† - I|
    min_loss_eigenvalue: float   # min eigenvalue of I - T T†
    physical: bool


def generate_haar_unitary(dim: int, seed: int) -> UnitaryMatrix:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    The R-diagonal phase correction is applied; without it the QR output is
    not Haar-distributed. Deterministic in (dim, seed).
    """
    if dim < 1:
        raise DimensionError("dim must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=seed & (2**128 - 1)))
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return UnitaryMatrix(dim=dim, entries=q, seed=seed)


def make_transmission(network: UnitaryMatrix | TransmissionMatrix,
                      t: float) -> TransmissionMatrix:
    """Scale a network map by sqrt(t), so intensities scale by t.

    t is the intensity transmission. t > 1 is accepted as a fit correction
    but downgrades the physicality check to a warning.
    """
    if t < 0:
        raise DataError("intensity transmission must be non-negative")
    if isinstance(network, UnitaryMatrix):
        entries = network.entries
        seed = network.seed
        base_t = 1.0
    else:
        entries = network.entries
        seed = network.haar_seed
        base_t = network.intensity_transmission
    return TransmissionMatrix(
        entries=np.sqrt(t) * entries,
        intensity_transmission=base_t * t,
        haar_seed=seed,
        check_physical=t <= 1.0,
    )


def unitarity_defect(tm: TransmissionMatrix) -> UnitarityReport:
    """How far T is from unitary, and whether its loss complement is physical."""
    gram = tm.entries @ tm.entries.conj().T
    eye = np.eye(tm.dim_out)
    defect = float(np.max(np.abs(gram - eye)))
    min_eig = float(np.min(np.linalg.eigvalsh(eye - gram)))
    return UnitarityReport(defect, min_eig, min_eig >= _PHYSICAL_EIG_TOL)


def save_matrix(path: str | Path, matrix: np.ndarray) -> None:
    """Write a complex matrix as JSON {m, n, re, im} or CSV (by extension).

    Both formats round-trip doubles bit-exactly (shortest-repr float text).
    """
    path = Path(path)
    matrix = np.asarray(matrix, dtype=complex)
    if path.suffix.lower() == ".csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            for row in matrix:
                out = []
                for v in row:
                    out.append(repr(float(v.real)))
                    out.append(repr(float(v.imag)))
                w.writerow(out)
    else:
        payload = {
            "m": matrix.shape[0],
            "n": matrix.shape[1],
            "re": [float(v) for v in matrix.real.ravel()],
            "im": [float(v) for v in matrix.imag.ravel()],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh)


def load_matrix(path: str | Path) -> np.ndarray:
    """Read a complex matrix written by save_matrix (JSON or CSV)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        rows = []
        with open(path, newline="") as fh:
            for ln, row in enumerate(csv.reader(fh), start=1):
                if not row:
                    continue
                if len(row) % 2 != 0:
                    raise DataError(f"{path}:{ln}: expected alternating re,im columns")
                vals = [float(x) for x in row]
                rows.append([complex(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)])
        if not rows:
            raise DataError(f"{path}: empty matrix file")
        if len({len(r) for r in rows}) != 1:
            raise DataError(f"{path}: ragged rows")
        return np.array(rows, dtype=complex)
    with open(path) as fh:
        payload = json.load(fh)
    try:
        m, n = int(payload["m"]), int(payload["n"])
        re = np.array(payload["re"], dtype=float).reshape(m, n)
        im = np.array(payload["im"], dtype=float).reshape(m, n)
    except (KeyError, ValueError) as exc:
        raise DataError(f"{path}: malformed matrix JSON ({exc})") from exc
    return re + 1j * im
