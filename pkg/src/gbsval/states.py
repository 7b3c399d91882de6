"""Gaussian input states reduced to per-mode moments.

Conventions: quadrature variances are normally ordered (vacuum = 0), with
var_x = 2(n + m~) and var_y = 2(n - m~). Symmetric units (vacuum = 1) are a
+1 shift applied only in reports.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DimensionError

_PHYSICALITY_TOL = 1e-12
_CLASSICAL_TOL = -1e-12


class StateKind(enum.Enum):
    PURE_SQUEEZED = "pure_squeezed"
    THERMALIZED = "thermalized"
    THERMAL = "thermal"
    SQUASHED = "squashed"
    SQUISHED = "squished"
    VACUUM = "vacuum"


@dataclass(frozen=True)
class GaussianInputSpec:
    """Declarative description of a product Gaussian input state.

    r is broadcast to the first N <= modes inputs; remaining modes are vacuum.
    epsilon is the thermalized fraction (kind=THERMALIZED only). n_override
    replaces sinh^2(r) as the photon number for kind=SQUASHED.
    """

    kind: StateKind
    r: np.ndarray = field(default_factory=lambda: np.zeros(0))
    epsilon: float = 0.0
    modes: int | None = None
    n_override: np.ndarray | None = None

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.r, dtype=float))
        object.__setattr__(self, "r", r)
        if not np.all(np.isfinite(r)):
            raise DataError("squeezing parameters must be finite")
        if not 0.0 <= self.epsilon <= 1.0:
            raise DataError("epsilon must lie in [0, 1]")
        modes = self.modes if self.modes is not None else len(r)
        if modes < 1:
            raise DimensionError("mode count must be >= 1")
        if len(r) > modes:
            raise DimensionError("more squeezing parameters than modes")
        object.__setattr__(self, "modes", modes)
        if self.n_override is not None:
            n = np.atleast_1d(np.asarray(self.n_override, dtype=float))
            if len(n) != len(r):
                raise DimensionError("n_override length must match r")
            if np.any(n < 0):
                raise DataError("photon numbers must be non-negative")
            object.__setattr__(self, "n_override", n)


@dataclass(frozen=True)
class GaussianModeMoments:
    """Per-mode photon number n, coherence m~, and normally ordered variances."""

    n: np.ndarray
    m_tilde: np.ndarray
    var_x: np.ndarray
    var_y: np.ndarray

    def __post_init__(self):
        if np.any(self.n < 0):
            raise DataError("photon numbers must be non-negative")
        if np.any(self.m_tilde < 0):
            raise DataError("coherences must be non-negative")
        limit = np.sqrt(self.n * (self.n + 1.0)) + _PHYSICALITY_TOL
        if np.any(self.m_tilde > limit):
            raise DataError("coherence exceeds sqrt(n(n+1)): unphysical Gaussian state")

    @classmethod
    def from_n_m(cls, n: np.ndarray, m_tilde: np.ndarray) -> "GaussianModeMoments":
        n = np.asarray(n, dtype=float)
        m_tilde = np.asarray(m_tilde, dtype=float)
        return cls(n=n, m_tilde=m_tilde,
                   var_x=2.0 * (n + m_tilde), var_y=2.0 * (n - m_tilde))

    @property
    def mode_count(self) -> int:
        return len(self.n)


def derive_moments(spec: GaussianInputSpec) -> GaussianModeMoments:
    """Reduce a state spec to per-mode (n, m~) and quadrature variances.

    pure_squeezed: n = sinh^2 r, m~ = sqrt(n(n+1))
    thermalized:   same n, coherence weakened to m~ = (1 - eps) sqrt(n(n+1))
    thermal:       same n, m~ = 0
    squashed/squished: m~ = n (squeezed quadrature exactly at vacuum level);
                   squashed may override n, squished keeps n = sinh^2 r
    vacuum:        all zeros
    """
    m_modes = spec.modes
    n_in = len(spec.r)
    n = np.zeros(m_modes)
    m_tilde = np.zeros(m_modes)
    if spec.kind is not StateKind.VACUUM and n_in:
        ns = np.sinh(spec.r) ** 2
        if spec.kind is StateKind.PURE_SQUEEZED:
            ms = np.sqrt(ns * (ns + 1.0))
        elif spec.kind is StateKind.THERMALIZED:
            ms = (1.0 - spec.epsilon) * np.sqrt(ns * (ns + 1.0))
        elif spec.kind is StateKind.THERMAL:
            ms = np.zeros_like(ns)
        elif spec.kind in (StateKind.SQUASHED, StateKind.SQUISHED):
            if spec.kind is StateKind.SQUASHED and spec.n_override is not None:
                ns = spec.n_override.copy()
            ms = ns.copy()
        else:  # pragma: no cover
            raise DataError(f"unknown state kind {spec.kind}")
        n[:n_in] = ns
        m_tilde[:n_in] = ms
    return GaussianModeMoments.from_n_m(n, m_tilde)


def is_classical(moments: GaussianModeMoments) -> np.ndarray:
    """Per-mode classicality: no normally ordered variance below zero."""
    return (moments.var_x >= _CLASSICAL_TOL) & (moments.var_y >= _CLASSICAL_TOL)
