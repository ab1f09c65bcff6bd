"""Gaussian states of one or two bosonic modes in the covariance-matrix picture.

Conventions used throughout the library:

* quadrature ordering ``(q_S, p_S, q_I, p_I)`` with the signal mode first,
* ``hbar = 1`` so the vacuum has variance 1/2 in each quadrature,
* covariance ``Sigma_ij = <R_i R_j + R_j R_i>/2 - <R_i><R_j>``,
* symplectic form ``Omega`` block-diagonal with per-mode blocks
  ``[[0, 1], [-1, 0]]``.

A state is physical iff ``Sigma + i*Omega/2 >= 0``; purity is
``mu = [4^modes * det(Sigma)]**(-1/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonPhysical

SYM_TOL = 1e-12
HEISENBERG_TOL = -1e-10
DET_TOL = 1e-12


def symplectic_form(modes: int) -> np.ndarray:
    """Symplectic form Omega for `modes` modes, one [[0,1],[-1,0]] block per mode."""
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * modes, 2 * modes))
    for k in range(modes):
        out[2 * k:2 * k + 2, 2 * k:2 * k + 2] = block
    return out


@dataclass(frozen=True)
class GaussianState:
    """First moments `d` and covariance `sigma` of a 1- or 2-mode Gaussian state.

    Instances are produced by :func:`make_state`, which validates symmetry and
    physicality; the stored arrays are read-only.
    """

    modes: int
    d: np.ndarray
    sigma: np.ndarray

    def mode_photons(self, mode: int) -> float:
        """Mean photon number of one mode: (tr Sigma_mode - 1)/2 + |d_mode|^2/2."""
        i = 2 * mode
        var = self.sigma[i, i] + self.sigma[i + 1, i + 1]
        return 0.5 * (var - 1.0) + 0.5 * (self.d[i] ** 2 + self.d[i + 1] ** 2)

    def photons(self) -> float:
        """Total mean photon number over all modes."""
        return sum(self.mode_photons(m) for m in range(self.modes))


def make_state(d, sigma) -> GaussianState:
    """Validate moments and return an immutable :class:`GaussianState`.

    Raises
    ------
    DimensionMismatch
        If shapes are inconsistent or the mode count is not 1 or 2.
    NonPhysical
        If `sigma` is not symmetric, violates the Heisenberg relation
        ``Sigma + i*Omega/2 >= 0`` (margin below -1e-10), or has
        ``det Sigma < (1/4)**modes - 1e-12`` (purity above 1).
    """
    d = np.asarray(d, dtype=float).reshape(-1).copy()
    sigma = np.asarray(sigma, dtype=float).copy()
    if d.size % 2 != 0 or d.size // 2 not in (1, 2):
        raise DimensionMismatch(f"first moments must have length 2 or 4, got {d.size}")
    modes = d.size // 2
    if sigma.shape != (2 * modes, 2 * modes):
        raise DimensionMismatch(
            f"covariance shape {sigma.shape} inconsistent with {modes} mode(s)")
    if np.max(np.abs(sigma - sigma.T)) > SYM_TOL:
        raise NonPhysical("covariance matrix is not symmetric")
    sigma = 0.5 * (sigma + sigma.T)
    margin = heisenberg_margin(sigma)
    # eigenvalue roundoff scales with |Sigma|; bright states get matching slack
    scale = max(1.0, float(np.linalg.norm(sigma)))
    if margin < HEISENBERG_TOL * scale:
        raise NonPhysical(f"Heisenberg relation violated (margin {margin:.3e})")
    # determinant roundoff grows like |Sigma|^(2 modes); keep the purity check
    # meaningful for bright states
    det_slack = DET_TOL * max(1.0, float(np.linalg.norm(sigma)) ** (2 * modes))
    if np.linalg.det(sigma) < 0.25 ** modes - det_slack:
        raise NonPhysical("det(Sigma) below the pure-state minimum")
    d.setflags(write=False)
    sigma.setflags(write=False)
    return GaussianState(modes=modes, d=d, sigma=sigma)


def heisenberg_margin(sigma) -> float:
    """Smallest eigenvalue of Sigma + i*Omega/2; negative means non-physical.

    The Hermitian matrix is diagonalized through its real embedding
    ``[[Sigma, -Omega/2], [Omega/2, Sigma]]``, whose spectrum doubles that of
    ``Sigma + i*Omega/2``.
    """
    sigma = np.asarray(sigma, dtype=float)
    modes = sigma.shape[0] // 2
    half_omega = 0.5 * symplectic_form(modes)
    embed = np.block([[sigma, -half_omega], [half_omega, sigma]])
    return float(np.linalg.eigvalsh(embed)[0])


def purity(state: GaussianState) -> float:
    """Purity mu = [2**(2*modes) * det(Sigma)]**(-1/2); equals 1 for pure states."""
    det = np.linalg.det(state.sigma)
    return float((4.0 ** state.modes * det) ** -0.5)


def vacuum(modes: int = 1) -> GaussianState:
    """Vacuum state of `modes` modes."""
    return make_state(np.zeros(2 * modes), 0.5 * np.eye(2 * modes))


def thermal(n_bar: float) -> GaussianState:
    """Single-mode thermal state with mean photon number `n_bar`."""
    if n_bar < 0:
        raise NonPhysical("thermal photon number must be non-negative")
    return make_state(np.zeros(2), (n_bar + 0.5) * np.eye(2))
