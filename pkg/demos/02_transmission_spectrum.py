"""Transmittance spectra of the resonant-level junction.

The stationary scattering stack works directly with semi-infinite leads:
surface Green's functions dress the sample resolvent with one self-energy per
lead, and the off-diagonal T-matrix entry gives the transmittance.

The unbiased spectrum peaks at the site energy with the unitarity ceiling
1/(4 pi^2) (perfect transmission).  A bias v shifts the lead-1 band: the
spectrum lives only on the shrinking band intersection and the resonance
moves off its peak.  The optical-theorem residual stays at machine precision
across the grid; it is the primary correctness oracle of the whole stack.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mesocurrent import (
    CouplingSpec,
    LeadSpec,
    SampleSpec,
    SystemSpec,
    ThermalSpec,
    transmittance_spectrum,
)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

spec = SystemSpec(
    sample=SampleSpec(site_count=1, h_sample=np.array([[0.3]]), contact1=0, contact2=0),
    lead=LeadSpec(t_hop=1.0, trunc_len=400),
    coupling=CouplingSpec(tau=0.5),
    thermal=ThermalSpec(beta=10.0, mu=0.0),
)

fig, ax = plt.subplots(figsize=(7, 4))
for v in (0.0, 0.5, 1.5, 3.0):
    spectrum = transmittance_spectrum(spec, v, 600)
    if spectrum.empty:
        print(f"v = {v}: bands no longer overlap, empty spectrum")
        continue
    print(f"v = {v}: grid of {spectrum.grid.size}, "
          f"max T12 = {spectrum.transmittance.max():.6f}, "
          f"max |optical residual| = {np.abs(spectrum.optical_residual).max():.2e}")
    ax.plot(spectrum.grid, spectrum.transmittance, label=f"v = {v}")

ax.axhline(1 / (4 * np.pi**2), color="k", ls=":", lw=1, label="unitarity bound")
ax.set_xlabel("energy  $\\lambda$  [$t_L$]")
ax.set_ylabel("transmittance  $\\mathcal{T}_{12}(\\lambda)$")
ax.set_title("Resonant level, site energy 0.3, at several biases")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "transmission_spectrum.png", dpi=150)
print(f"figure written to {OUT / 'transmission_spectrum.png'}")
