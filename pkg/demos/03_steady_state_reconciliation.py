"""Two independent routes to the steady current, reconciled.

Route one integrates the occupation imbalance against the transmittance over
the band intersection (energy space, no time evolution).  Route two evolves
the full density matrix and takes the running ergodic mean (1/T) int_0^T I dt
(time domain, no scattering theory).  They share no code beyond the
Hamiltonian, so their agreement pins down both.

The running mean converges like 1/T: the deficit is the integrated switch-on
transient.  The three switching families (sudden, linear ramp, smooth cosine
ramp over t1 = 5) differ at finite T only through the mean switching delay,
and collapse onto the same limit.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mesocurrent import (
    BiasProtocol,
    build_system,
    equilibrium_density,
    ergodic_average,
    simulate_current,
    steady_current,
)
from mesocurrent.config import BENCHMARK_DOCUMENT, parse_config

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

cfg = parse_config(BENCHMARK_DOCUMENT)
spec = cfg.system
system = build_system(spec)
density = equilibrium_density(system)

steady = steady_current(spec, cfg.protocol.v)
print(f"quadrature steady current: {steady.value:.10f}")

protocols = [
    BiasProtocol(v=0.5, t1=0.0, shape="sudden"),
    BiasProtocol(v=0.5, t1=5.0, shape="linear"),
    BiasProtocol(v=0.5, t1=5.0, shape="smooth_cos"),
]

fig, ax = plt.subplots(figsize=(7, 4))
horizons = np.arange(10.0, 150.1, 5.0)
for proto in protocols:
    trace = simulate_current(system, density, proto, [0], t_max=150.0)[0]
    means = [ergodic_average(trace, t) for t in horizons]
    ax.plot(horizons, means, label=proto.shape)
    print(f"{proto.shape:>10}: ergodic average at T=150 is {means[-1]:.8f} "
          f"({abs(means[-1] - steady.value) / steady.value:.2%} from steady)")

ax.axhline(steady.value, color="k", ls="--", lw=1, label="Landauer $I_\\infty$")
ax.set_xlabel("averaging horizon  $T$")
ax.set_ylabel("running ergodic mean of $I(t, 0)$")
ax.set_title("Ergodic means converge to the Landauer value, whatever the switch")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "steady_state_reconciliation.png", dpi=150)
print(f"figure written to {OUT / 'steady_state_reconciliation.png'}")
