"""System specification and assembly of the truncated one-particle Hamiltonian.

The junction consists of a finite sample (an arbitrary Hermitian block), two
one-dimensional hopping chains standing in for semi-infinite leads, and a
single tunneling bond of strength ``tau`` from the first site of each lead to
a contact site on the sample.  Each lead is truncated to ``trunc_len`` sites
with a hard (Dirichlet) far end; dynamical results are only meaningful inside
the reflection-safe horizon (see :func:`mesocurrent.dynamics.safe_horizon`).

Units: hbar = 1, carrier charge = 1, energies in units where the lead hopping
is O(1), times in inverse energy.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

HERMITICITY_RTOL = 1e-12


@dataclass(frozen=True)
class SampleSpec:
    """Finite sample block: on-site/hopping matrix and the two contact sites.

    ``h_sample`` may be any Hermitian matrix (real or complex); the contact
    indices select the sites bonded to lead 1 and lead 2.  ``contact1 ==
    contact2`` is allowed.
    """

    site_count: int
    h_sample: np.ndarray
    contact1: int
    contact2: int

    def __post_init__(self):
        h = np.asarray(self.h_sample, dtype=complex if np.iscomplexobj(self.h_sample) else float)
        if self.site_count < 1:
            raise ValueError(f"sample.site_count must be >= 1 (got {self.site_count})")
        if h.shape != (self.site_count, self.site_count):
            raise ValueError(
                f"sample.h_sample must be {self.site_count}x{self.site_count}, got {h.shape}"
            )
        scale = max(1.0, float(np.linalg.norm(h)))
        if np.linalg.norm(h - h.conj().T) > HERMITICITY_RTOL * scale:
            raise ValueError("sample.h_sample is not Hermitian within 1e-12 relative tolerance")
        for name, c in (("contact1", self.contact1), ("contact2", self.contact2)):
            if not 0 <= c < self.site_count:
                raise ValueError(
                    f"sample.{name} out of range: {c} not in [0, {self.site_count})"
                )
        h = h.copy()
        h.setflags(write=False)
        object.__setattr__(self, "h_sample", h)


@dataclass(frozen=True)
class LeadSpec:
    """One-dimensional lead: hopping ``t_hop`` and retained length ``trunc_len``."""

    t_hop: float
    trunc_len: int

    def __post_init__(self):
        if not (self.t_hop > 0 and np.isfinite(self.t_hop)):
            raise ValueError(f"lead.t_hop must be a positive finite energy (got {self.t_hop})")
        if self.trunc_len < 2:
            raise ValueError(f"lead.trunc_len must be >= 2 (got {self.trunc_len})")


@dataclass(frozen=True)
class CouplingSpec:
    """Sample-lead tunneling strength."""

    tau: float

    def __post_init__(self):
        if not (self.tau >= 0 and np.isfinite(self.tau)):
            raise ValueError(f"coupling.tau must be >= 0 (got {self.tau})")


@dataclass(frozen=True)
class ThermalSpec:
    """Inverse temperature and chemical potential of the initial Gibbs state."""

    beta: float
    mu: float

    def __post_init__(self):
        if not (self.beta >= 0 and np.isfinite(self.beta)):
            raise ValueError(f"thermal.beta must be >= 0 and finite (got {self.beta})")
        if not np.isfinite(self.mu):
            raise ValueError(f"thermal.mu must be finite (got {self.mu})")


@dataclass(frozen=True)
class SystemSpec:
    """Full parameterization of sample, leads, coupling and thermal state."""

    sample: SampleSpec
    lead: LeadSpec
    coupling: CouplingSpec
    thermal: ThermalSpec


def resized(spec: SystemSpec, trunc_len: int) -> SystemSpec:
    """Copy of ``spec`` with a different lead truncation length."""
    return replace(spec, lead=replace(spec.lead, trunc_len=trunc_len))


@dataclass(frozen=True)
class FiniteRankOperator:
    """Operator supported on a small set of site indices.

    ``block`` is the dense matrix of the operator restricted to ``support``;
    the operator is zero outside.  Projectors carry an identity block.
    """

    support: np.ndarray
    block: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.support, dtype=int)
        b = np.asarray(self.block)
        if b.shape != (s.size, s.size):
            raise ValueError(f"block shape {b.shape} does not match support size {s.size}")
        s = s.copy()
        b = b.copy()
        s.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "block", b)

    def to_dense(self, dim: int) -> np.ndarray:
        out = np.zeros((dim, dim), dtype=self.block.dtype)
        out[np.ix_(self.support, self.support)] = self.block
        return out

    def expectation(self, rho: np.ndarray) -> float:
        """Tr(rho . Op), using only the support block of ``rho``."""
        sub = rho[np.ix_(self.support, self.support)]
        val = np.trace(sub @ self.block)
        return complex(val).real

    def trace(self) -> complex:
        return complex(np.trace(self.block))


@dataclass
class TruncatedSystem:
    """Assembled finite Hamiltonian with the site-index bookkeeping.

    Index layout: sample sites first (0 .. |sample|-1), then lead-1 sites
    0 .. N-1, then lead-2 sites 0 .. N-1.
    """

    spec: SystemSpec
    dim: int
    h_total: np.ndarray
    sample_indices: np.ndarray = field(repr=False)
    lead1_indices: np.ndarray = field(repr=False)
    lead2_indices: np.ndarray = field(repr=False)

    @property
    def t_hop(self) -> float:
        return self.spec.lead.t_hop

    @property
    def tau(self) -> float:
        return self.spec.coupling.tau

    @property
    def trunc_len(self) -> int:
        return self.spec.lead.trunc_len

    def sample_index(self, i: int) -> int:
        if not 0 <= i < self.spec.sample.site_count:
            raise ValueError(f"sample site {i} out of range")
        return int(self.sample_indices[i])

    def lead_index(self, alpha: int, j: int) -> int:
        if alpha not in (1, 2):
            raise ValueError(f"lead number must be 1 or 2 (got {alpha})")
        idx = self.lead1_indices if alpha == 1 else self.lead2_indices
        if not 0 <= j < self.trunc_len:
            raise ValueError(f"lead site {j} out of range [0, {self.trunc_len})")
        return int(idx[j])

    def contact_index(self, alpha: int) -> int:
        """Global index of the sample contact site bonded to lead ``alpha``."""
        c = self.spec.sample.contact1 if alpha == 1 else self.spec.sample.contact2
        return int(self.sample_indices[c])

    @property
    def index_map(self) -> dict:
        """Explicit bijection {site label -> global index}."""
        out = {}
        for i, k in enumerate(self.sample_indices):
            out[("sample", i)] = int(k)
        for alpha, idx in ((1, self.lead1_indices), (2, self.lead2_indices)):
            for j, k in enumerate(idx):
                out[("lead", alpha, j)] = int(k)
        return out


def build_system(spec: SystemSpec) -> TruncatedSystem:
    """Assemble the truncated junction Hamiltonian.

    The sample block is mirrored from its lower triangle so the result is
    Hermitian exactly, not merely to rounding.  Lead chains carry hopping
    ``t_hop`` between consecutive sites and zero on-site energy; the only
    sample-lead entries are ``tau`` between each contact and the first lead
    site.
    """
    ns = spec.sample.site_count
    n = spec.lead.trunc_len
    dim = ns + 2 * n
    hs = spec.sample.h_sample
    dtype = complex if np.iscomplexobj(hs) else float

    h = np.zeros((dim, dim), dtype=dtype)
    lower = np.tril(hs, -1)
    h[:ns, :ns] = lower + lower.conj().T + np.diag(np.real(np.diag(hs)))

    sample_idx = np.arange(ns)
    lead1_idx = ns + np.arange(n)
    lead2_idx = ns + n + np.arange(n)

    t = spec.lead.t_hop
    for idx in (lead1_idx, lead2_idx):
        h[idx[:-1], idx[1:]] = t
        h[idx[1:], idx[:-1]] = t

    tau = spec.coupling.tau
    c1 = sample_idx[spec.sample.contact1]
    c2 = sample_idx[spec.sample.contact2]
    h[lead1_idx[0], c1] = tau
    h[c1, lead1_idx[0]] = tau
    h[lead2_idx[0], c2] = tau
    h[c2, lead2_idx[0]] = tau

    h.setflags(write=False)
    return TruncatedSystem(
        spec=spec,
        dim=dim,
        h_total=h,
        sample_indices=sample_idx,
        lead1_indices=lead1_idx,
        lead2_indices=lead2_idx,
    )


def projector_lead1(sys: TruncatedSystem) -> FiniteRankOperator:
    """Orthogonal projector onto the lead-1 sites."""
    n = sys.lead1_indices.size
    return FiniteRankOperator(support=sys.lead1_indices, block=np.eye(n))


def projector_lead2_tail(sys: TruncatedSystem, n: int) -> FiniteRankOperator:
    """Projector onto lead-2 sites {n, ..., N-1} (the tail past site n-1)."""
    if not 0 <= n < sys.trunc_len:
        raise ValueError(f"tail start {n} out of range [0, {sys.trunc_len})")
    support = sys.lead2_indices[n:]
    return FiniteRankOperator(support=support, block=np.eye(support.size))


def current_operator(sys: TruncatedSystem, n: int) -> FiniteRankOperator:
    """Charge-flow operator at lead-2 site ``n``: i[H, P2tail(n)].

    Only the single Hamiltonian bond crossing the tail boundary survives the
    commutator, so the operator has rank <= 2 and zero trace.  For n >= 1 the
    support is lead-2 sites {n-1, n} with entries +-i*t_hop; for n = 0 it is
    {contact2, lead-2 site 0} with entries +-i*tau.
    """
    if not 0 <= n < sys.trunc_len - 1:
        raise ValueError(
            f"measurement site {n} out of range [0, {sys.trunc_len - 1}) "
            f"for trunc_len {sys.trunc_len}"
        )
    outside, inside, w = measurement_bond(sys, n)
    block = np.array([[0.0, 1j * w], [-1j * np.conj(w), 0.0]], dtype=complex)
    return FiniteRankOperator(support=np.array([outside, inside]), block=block)


def measurement_bond(sys: TruncatedSystem, n: int):
    """Global indices (outside, inside) of the bond cut by the tail projector
    at lead-2 site ``n``, and the Hamiltonian entry across it."""
    inside = sys.lead_index(2, n)
    outside = sys.lead_index(2, n - 1) if n >= 1 else sys.contact_index(2)
    w = sys.h_total[outside, inside]
    return outside, inside, w


def bias_operator(sys: TruncatedSystem, protocol, t: float) -> FiniteRankOperator:
    """Time-dependent bias v * phi(t) * P1 on the lead-1 sites."""
    from .dynamics import switching_value

    scale = protocol.v * switching_value(protocol, t)
    n = sys.lead1_indices.size
    return FiniteRankOperator(support=sys.lead1_indices, block=scale * np.eye(n))
