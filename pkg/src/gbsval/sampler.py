"""Phase-space ensembles: input sampling and propagation through a network.

Input amplitudes follow the doubled-phase-space construction
    alpha_j = (dx_j w_j + i dy_j w_{j+M}) / 2
    beta_j  = (dx_j w_j - i dy_j w_{j+M}) / 2
with independent real unit normals w and dx = sqrt(var_x), dy = sqrt(var_y)
(principal complex root when var_y < 0, which makes alpha and beta real and
independent for pure squeezed inputs). Normally ordered moments of the state
equal ensemble averages of the corresponding (beta, alpha) products.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import DimensionError, RepresentationError
from .network import TransmissionMatrix
from .states import GaussianModeMoments, is_classical

_PI1_TOL = 1e-14


class Representation(enum.Enum):
    POSITIVE_P = "positive_P"
    DIAGONAL_P = "diagonal_P"


class Stage(enum.Enum):
    INPUT = "input"
    OUTPUT = "output"


@dataclass(frozen=True)
class PhaseSpaceEnsemble:
    representation: Representation
    alpha: np.ndarray  # (E, M) complex
    beta: np.ndarray   # (E, M) complex
    seed: int
    stage: Stage

    def __post_init__(self):
        if self.alpha.shape != self.beta.shape or self.alpha.ndim != 2:
            raise DimensionError("alpha and beta must be equal-shaped 2-d arrays")
        if self.alpha.shape[0] < 1:
            raise DimensionError("ensemble must contain at least one trajectory")
        if self.representation is Representation.DIAGONAL_P and not np.array_equal(
                self.beta, np.conj(self.alpha)):
            raise RepresentationError("diagonal-P requires beta == conj(alpha) exactly")

    @property
    def size(self) -> int:
        return self.alpha.shape[0]

    @property
    def mode_count(self) -> int:
        return self.alpha.shape[1]


@dataclass(frozen=True)
class ClickMoments:
    """Per-trajectory output photon numbers n' and single-mode click weights."""

    n_prime: np.ndarray  # (E, M) complex, n'_j = alpha'_j beta'_j
    pi1: np.ndarray      # 1 - exp(-n')
    representation: Representation


def draw_input_ensemble(moments: GaussianModeMoments,
                        representation: Representation,
                        ensemble_size: int,
                        seed: int,
                        first_trajectory: int = 0) -> PhaseSpaceEnsemble:
    """Draw an input-stage ensemble matching the given Gaussian moments.

    Deterministic in (moments, representation, seed) and independent of how
    trajectories are partitioned: trajectory i always receives the same noise
    for a given seed, so [first_trajectory, first_trajectory + ensemble_size)
    windows tile a larger ensemble bit-identically.
    """
    if ensemble_size < 1:
        raise DimensionError("ensemble_size must be >= 1")
    m_modes = moments.mode_count
    if representation is Representation.DIAGONAL_P and not np.all(is_classical(moments)):
        raise RepresentationError(
            "diagonal-P sampling requires a classical state on every mode "
            "(the distribution would be negative)")
    dx = np.sqrt(moments.var_x.astype(complex))
    dy = np.sqrt(moments.var_y.astype(complex))
    w = rng.standard_normals(seed, first_trajectory, ensemble_size, 2 * m_modes)
    alpha = 0.5 * (dx * w[:, :m_modes] + 1j * dy * w[:, m_modes:])
    if representation is Representation.DIAGONAL_P:
        beta = np.conj(alpha)
    else:
        beta = 0.5 * (dx * w[:, :m_modes] - 1j * dy * w[:, m_modes:])
    return PhaseSpaceEnsemble(representation=representation, alpha=alpha,
                              beta=beta, seed=seed, stage=Stage.INPUT)


def propagate(ensemble: PhaseSpaceEnsemble,
              tm: TransmissionMatrix) -> PhaseSpaceEnsemble:
    """Map an input ensemble through the network: alpha' = T alpha, beta' = T* beta.

    Vacuum entering through the loss channels contributes no noise in a
    normally ordered representation, so only T is applied.
    """
    if ensemble.stage is not Stage.INPUT:
        raise RepresentationError("ensemble has already been propagated")
    if ensemble.mode_count != tm.dim_in:
        raise DimensionError(
            f"ensemble has {ensemble.mode_count} modes, network expects {tm.dim_in}")
    alpha = ensemble.alpha @ tm.entries.T
    if ensemble.representation is Representation.DIAGONAL_P:
        beta = np.conj(alpha)
    else:
        beta = ensemble.beta @ tm.entries.conj().T
    return PhaseSpaceEnsemble(representation=ensemble.representation,
                              alpha=alpha, beta=beta,
                              seed=ensemble.seed, stage=Stage.OUTPUT)


def click_moments(ensemble: PhaseSpaceEnsemble) -> ClickMoments:
    """Elementwise n' = alpha beta and click weight 1 - exp(-n'); no averaging."""
    if ensemble.stage is not Stage.OUTPUT:
        raise RepresentationError("click moments are defined at the network output")
    n_prime = ensemble.alpha * ensemble.beta
    pi1 = 1.0 - np.exp(-n_prime)
    return ClickMoments(n_prime=n_prime, pi1=pi1,
                        representation=ensemble.representation)
