"""Stationary scattering theory for the two-lead junction.

Everything here works with the semi-infinite leads directly (no truncation):
lead generalized eigenfunctions, the retarded surface Green's function of a
half-infinite chain, the sample resolvent dressed by the two embedding
self-energies, T-matrix entries, the transmittance spectrum and bound-state
detection.

Conventions.  The surface Green's function g(lambda) is the retarded boundary
value: it solves t_hop^2 g^2 - (lambda - shift) g + 1 = 0 with Im g <= 0
inside the propagating band and is the decaying (smaller-magnitude) real root
outside.  The dressed sample resolvent is

    G_S(lambda) = (lambda - H_S - Sigma_1 - Sigma_2)^{-1},
    Sigma_alpha  = tau^2 g(lambda; shift_alpha) |c_alpha><c_alpha|,

with shift_1 = v (biased lead) and shift_2 = 0.  T-matrix entries are

    t_ab(lambda) = tau^2 Psi_a(lambda;0) Psi_b(lambda;0) [G_S(lambda)^dagger]_ab,

the adjoint fixing the overall complex phase so that the optical theorem
Im t_22 = pi (|t_22|^2 + |t_12|^2) holds exactly; transmittances |t_ab|^2 are
unaffected by that choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemSpec, build_system, resized

EDGE_GUARD = 1e-9  # relative to t_hop

# Localization window used to classify truncated eigenvectors as bound states:
# sample sites plus this many first sites of each lead.
LOCALIZATION_SITES = 20
LOCALIZATION_WEIGHT = 0.99
BAND_MARGIN = 1e-6  # relative to t_hop


class BoundStatePoleError(ValueError):
    """Raised when the dressed sample resolvent is evaluated at a real pole."""


@dataclass(frozen=True)
class LeadMode:
    """Propagating lead mode: energy ``lam`` in the open band, momentum ``k``.

    The dispersion is lam - shift = 2 t_hop cos(k) with k in (0, pi); ``shift``
    is v for the biased lead 1 and 0 for lead 2.
    """

    lam: float
    k: float
    t_hop: float
    shift: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.k < np.pi:
            raise ValueError(f"momentum {self.k} outside (0, pi)")
        if abs(self.lam - self.shift - 2.0 * self.t_hop * np.cos(self.k)) > 1e-12 * self.t_hop:
            raise ValueError("mode violates the lead dispersion relation")


def lead_mode(lam: float, t_hop: float, shift: float = 0.0) -> LeadMode:
    """Mode at energy ``lam``; rejects energies at or outside the band edges."""
    eps = lam - shift
    if abs(abs(eps) - 2.0 * t_hop) <= EDGE_GUARD * t_hop or abs(eps) > 2.0 * t_hop:
        raise ValueError(
            f"energy {lam} is outside the open band ({shift - 2 * t_hop}, {shift + 2 * t_hop}) "
            "or within the band-edge guard"
        )
    k = float(np.arccos(eps / (2.0 * t_hop)))
    return LeadMode(lam=lam, k=k, t_hop=t_hop, shift=shift)


def lead_amplitude(mode: LeadMode, m: int) -> float:
    """Generalized-eigenfunction amplitude sin(k(m+1)) / sqrt(pi t_hop sin k)."""
    if m < 0:
        raise ValueError(f"site index must be >= 0 (got {m})")
    k = mode.k
    return float(np.sin(k * (m + 1)) / np.sqrt(np.pi * mode.t_hop * np.sin(k)))


def surface_green(lam, t_hop: float, shift: float = 0.0) -> complex:
    """Retarded surface Green's function of a semi-infinite chain.

    Root of t_hop^2 g^2 - (lam - shift) g + 1 = 0: inside the band the branch
    with Im g <= 0, outside the decaying real root (|t_hop * g| < 1).  Complex
    ``lam`` with Im lam != 0 is accepted and continues the same branch.
    """
    eps = complex(lam) - shift
    t2 = t_hop * t_hop
    if eps.imag == 0.0:
        e = eps.real
        if abs(abs(e) - 2.0 * t_hop) <= EDGE_GUARD * t_hop:
            raise ValueError(
                f"energy {lam} within the band-edge guard ({EDGE_GUARD} * t_hop) of "
                f"{shift - 2 * t_hop} or {shift + 2 * t_hop}"
            )
        if abs(e) < 2.0 * t_hop:
            return complex((e - 1j * np.sqrt(4.0 * t2 - e * e)) / (2.0 * t2))
        s = 1.0 if e > 0 else -1.0
        return complex((e - s * np.sqrt(e * e - 4.0 * t2)) / (2.0 * t2))
    # Off the real axis: the two roots split by magnitude; the decaying one
    # (|t g| < 1) is the analytic continuation of the retarded branch.
    root = np.sqrt(eps * eps - 4.0 * t2)
    g1 = (eps - root) / (2.0 * t2)
    g2 = (eps + root) / (2.0 * t2)
    return complex(g1 if abs(g1) < abs(g2) else g2)


def effective_resolvent(spec: SystemSpec, lam, v: float) -> np.ndarray:
    """Sample-block resolvent with both leads folded into self-energies.

    Returns the |sample| x |sample| matrix (lam - H_S - Sigma_1 - Sigma_2)^{-1}
    at bias ``v``.  When the contacts coincide both rank-one self-energies add
    on the same diagonal entry.  A singular solve at a real ``lam`` signals a
    pole (bound state) and raises :class:`BoundStatePoleError`.
    """
    t = spec.lead.t_hop
    tau2 = spec.coupling.tau ** 2
    hs = spec.sample.h_sample
    a = lam * np.eye(hs.shape[0], dtype=complex) - hs
    a[spec.sample.contact1, spec.sample.contact1] -= tau2 * surface_green(lam, t, shift=v)
    a[spec.sample.contact2, spec.sample.contact2] -= tau2 * surface_green(lam, t, shift=0.0)
    try:
        g = np.linalg.inv(a)
    except np.linalg.LinAlgError:
        g = None
    if g is None or not np.all(np.isfinite(g)) or np.linalg.norm(a @ g - np.eye(a.shape[0])) > 1e-6:
        raise BoundStatePoleError(
            f"resolvent pole at lambda = {lam}: energy coincides with a discrete "
            "eigenvalue of the coupled system"
        )
    return g


@dataclass(frozen=True)
class TMatrix:
    """On-shell 2x2 T-matrix at one energy; entries[a-1, b-1] = t_ab."""

    lam: float
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.shape != (2, 2):
            raise ValueError("T-matrix must be 2x2")
        if not np.all(np.isfinite(e)):
            raise ValueError("T-matrix entries must be finite")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def transmittance_12(self) -> float:
        return float(abs(self.entries[0, 1]) ** 2)

    @property
    def transmittance_21(self) -> float:
        return float(abs(self.entries[1, 0]) ** 2)


def _in_band(lam: float, t_hop: float, shift: float) -> bool:
    return abs(lam - shift) < 2.0 * t_hop - EDGE_GUARD * t_hop


def t_matrix(spec: SystemSpec, lam: float, v: float) -> TMatrix:
    """T-matrix entries at energy ``lam`` and bias ``v``.

    The amplitude of lead 1 lives on the shifted band [-2t+v, 2t+v] and is set
    to zero outside it, so rows/columns involving a closed lead vanish.
    """
    t = spec.lead.t_hop
    in1 = _in_band(lam, t, v)
    in2 = _in_band(lam, t, 0.0)
    if not (in1 or in2):
        raise ValueError(
            f"energy {lam} is outside both lead bands at bias {v}; no open channel"
        )
    psi = np.array(
        [
            lead_amplitude(lead_mode(lam, t, shift=v), 0) if in1 else 0.0,
            lead_amplitude(lead_mode(lam, t, shift=0.0), 0) if in2 else 0.0,
        ]
    )
    g_adj = effective_resolvent(spec, lam, v).conj().T
    contacts = (spec.sample.contact1, spec.sample.contact2)
    tau2 = spec.coupling.tau ** 2
    entries = np.empty((2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            entries[a, b] = tau2 * psi[a] * psi[b] * g_adj[contacts[a], contacts[b]]
    return TMatrix(lam=lam, entries=entries)


def optical_residual(tm: TMatrix) -> float:
    """Unitarity defect Im t_22 - pi (|t_22|^2 + |t_12|^2); ~1e-15 when exact."""
    t22 = tm.entries[1, 1]
    t12 = tm.entries[0, 1]
    return float(t22.imag - np.pi * (abs(t22) ** 2 + abs(t12) ** 2))


@dataclass(frozen=True)
class TransmissionSpectrum:
    """Transmittance and optical-theorem residual sampled over a grid."""

    grid: np.ndarray
    transmittance: np.ndarray
    optical_residual: np.ndarray

    @property
    def empty(self) -> bool:
        return self.grid.size == 0


def energy_grid(t_hop: float, v: float, count: int, inset: float = 1e-6) -> np.ndarray:
    """Uniform grid over the band intersection, inset from both edges.

    Returns an empty array when the bands do not overlap.  ``inset`` is
    relative to the intersection width.
    """
    lo = max(-2.0 * t_hop + v, -2.0 * t_hop)
    hi = min(2.0 * t_hop + v, 2.0 * t_hop)
    if hi - lo <= 0.0:
        return np.empty(0)
    delta = inset * (hi - lo)
    return np.linspace(lo + delta, hi - delta, count)


def transmittance_spectrum(spec: SystemSpec, v: float, grid, threads: int = 1) -> TransmissionSpectrum:
    """Transmittance |t_12|^2 over ``grid``.

    ``grid`` is either an array of energies inside the band intersection or an
    integer sample count (a uniform inset grid is then generated).  An empty
    intersection yields an empty spectrum.
    """
    if np.isscalar(grid):
        grid = energy_grid(spec.lead.t_hop, v, int(grid))
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        return TransmissionSpectrum(
            grid=grid, transmittance=np.empty(0), optical_residual=np.empty(0)
        )

    def _one(lam):
        tm = t_matrix(spec, float(lam), v)
        return tm.transmittance_12, optical_residual(tm)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_one, grid))
    else:
        rows = [_one(lam) for lam in grid]
    trans = np.array([r[0] for r in rows])
    resid = np.array([r[1] for r in rows])
    return TransmissionSpectrum(grid=grid, transmittance=trans, optical_residual=resid)


@dataclass(frozen=True)
class BoundStateReport:
    """Discrete spectrum of H + v P1 outside both lead bands.

    ``eigenvalues`` are the localized out-of-band levels, ``localization_lengths``
    their lead decay lengths in sites.  ``embedded`` lists localized levels that
    sit inside a band; they are reported without further interpretation.
    """

    eigenvalues: np.ndarray
    localization_lengths: np.ndarray
    embedded: np.ndarray

    @property
    def count(self) -> int:
        return int(self.eigenvalues.size)


def bound_states(spec: SystemSpec, v: float, trunc_len: int = 500) -> BoundStateReport:
    """Locate bound states by truncated diagonalization plus a localization filter.

    Eigenvalues of the truncated H + v P1 lying outside both closed bands by
    more than 1e-6 * t_hop qualify, provided at least 99% of the eigenvector
    weight sits on the sample and the first 20 sites of each lead.
    """
    if trunc_len < 500:
        raise ValueError(f"bound-state search needs trunc_len >= 500 (got {trunc_len})")
    sys = build_system(resized(spec, trunc_len))
    h = np.array(sys.h_total)
    h[sys.lead1_indices, sys.lead1_indices] += v
    w, q = np.linalg.eigh(h)

    t = spec.lead.t_hop
    margin = BAND_MARGIN * t
    in_band1 = np.abs(w - v) <= 2.0 * t + margin
    in_band2 = np.abs(w) <= 2.0 * t + margin
    near = np.concatenate(
        (
            sys.sample_indices,
            sys.lead1_indices[:LOCALIZATION_SITES],
            sys.lead2_indices[:LOCALIZATION_SITES],
        )
    )
    weight = np.sum(np.abs(q[near, :]) ** 2, axis=0)
    localized = weight >= LOCALIZATION_WEIGHT

    outside = ~(in_band1 | in_band2) & localized
    vals = w[outside]
    lengths = np.array([_localization_length(e, t, v) for e in vals])
    embedded = w[(in_band1 | in_band2) & localized]
    return BoundStateReport(
        eigenvalues=vals, localization_lengths=lengths, embedded=embedded
    )


def _localization_length(energy: float, t_hop: float, v: float) -> float:
    """Lead decay length (sites) of an out-of-band level, from the slower lead."""
    decay = []
    for shift in (v, 0.0):
        g = surface_green(energy, t_hop, shift=shift)
        decay.append(abs(t_hop * g))
    x = max(decay)
    return float(-1.0 / np.log(x)) if x > 0 else 0.0
