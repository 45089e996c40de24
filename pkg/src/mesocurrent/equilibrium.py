"""Global Fermi-Dirac one-particle density matrix of the coupled system.

The initial state is the equilibrium state of the *already coupled*, unbiased
junction: f(H) evaluated by exact diagonalization.  Its trace is the mean
particle number, not 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ThermalSpec, TruncatedSystem

DECOMP_RTOL = 1e-10


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigendecomposition H = Q diag(eigenvalues) Q^dagger, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def apply(self, fn) -> np.ndarray:
        """Dense matrix fn(H) through the functional calculus."""
        q = self.eigenvectors
        return (q * fn(self.eigenvalues)) @ q.conj().T


def spectral_decomposition(h: np.ndarray, validate: bool = True) -> SpectralDecomposition:
    """Diagonalize a Hermitian matrix, checking the reconstruction residual."""
    w, q = np.linalg.eigh(h)
    if validate:
        scale = max(1.0, float(np.abs(w).max()) if w.size else 1.0)
        resid = np.linalg.norm((q * w) @ q.conj().T - h)
        if resid > DECOMP_RTOL * scale * np.sqrt(h.shape[0]):
            raise np.linalg.LinAlgError(
                f"eigendecomposition residual {resid:.3e} exceeds tolerance"
            )
    return SpectralDecomposition(eigenvalues=w, eigenvectors=q)


@dataclass(frozen=True)
class DensityMatrix:
    """One-particle density matrix (Hermitian, eigenvalues in [0, 1])."""

    rho: np.ndarray

    @property
    def particle_number(self) -> float:
        return float(np.trace(self.rho).real)


def fermi_weight(lam, thermal: ThermalSpec):
    """Fermi-Dirac occupation 1/(exp(beta*(lam-mu)) + 1).

    Evaluated branch-wise so that beta up to 1e4 and beyond cannot overflow:
    for positive arguments exp(-x)/(1+exp(-x)) is used instead.
    """
    x = thermal.beta * (np.asarray(lam, dtype=float) - thermal.mu)
    out = np.empty_like(x)
    pos = x > 0
    with np.errstate(over="ignore"):
        ex = np.exp(-x[pos])
        out[pos] = ex / (1.0 + ex)
        out[~pos] = 1.0 / (1.0 + np.exp(x[~pos]))
    if np.isscalar(lam) or np.ndim(lam) == 0:
        return float(out)
    return out


def equilibrium_density(sys: TruncatedSystem, thermal: ThermalSpec | None = None) -> DensityMatrix:
    """f(H) for the truncated junction, via spectral decomposition.

    ``thermal`` defaults to the thermal block of the system's own spec.
    """
    if thermal is None:
        thermal = sys.spec.thermal
    decomp = spectral_decomposition(sys.h_total)
    q = decomp.eigenvectors
    occ = fermi_weight(decomp.eigenvalues, thermal)
    rho = (q * occ) @ q.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho=rho)
