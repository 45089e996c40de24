"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Benchmark throughout (unless a criterion says otherwise): single-site sample
eps0=0, t_hop=1, tau=0.5, beta=10, mu=0, v=0.5, sudden switch, trunc_len=400,
dt=0.02, T=150.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.

Two criteria measure quantities whose finite-horizon systematics exceed their
stated tolerances on this benchmark (see the assertions for the numbers):

* criterion 3's site clause: the current front needs n/(2 t_hop) to reach
  site n, so ergodic averages at T=150 carry an irreducible ~n/(2T) offset
  (~6.7% between n=0 and n=20), above the 2% tolerance;
* criterion 12: late-window fluctuations at all sites are at numerical-dust
  level (< 1e-5 of the steady current) but grow with n because band-edge
  transients arrive retarded, so the non-increasing probe inverts.

They are implemented as stated and left to fail rather than loosened.
"""

import numpy as np
import pytest
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from mesocurrent import (
    BiasProtocol,
    QuadratureSpec,
    band_support,
    build_system,
    current_operator,
    current_profile,
    effective_resolvent,
    energy_grid,
    equilibrium_density,
    ergodic_average,
    light_cone_norm,
    optical_residual,
    resized,
    safe_horizon,
    simulate_current,
    steady_current,
    t_matrix,
    transmittance_spectrum,
)

from conftest import single_site_spec
from oracles import sparse_truncated_hamiltonian, wave_packet_transmission

# Steady-state benchmark current, frozen from a panels=48 / nodes=40 quadrature
# after it agreed with the transient ergodic average to 1.2% (criterion 2).
I_STAR = 0.061362835282

T_HORIZON = 150.0
TOL_REL = 0.02


def report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.fixture(scope="module")
def steady_ref(benchmark_spec):
    return steady_current(benchmark_spec, 0.5)


@pytest.fixture(scope="module")
def sudden_traces(benchmark_system, benchmark_density, benchmark_protocol):
    traces = simulate_current(
        benchmark_system,
        benchmark_density,
        benchmark_protocol,
        [0, 5, 10, 20, 30],
        T_HORIZON,
        dt=0.02,
        dt_sample=0.1,
    )
    return {tr.site: tr for tr in traces}


@pytest.fixture(scope="module")
def ramped_traces(benchmark_system, benchmark_density):
    out = {}
    for shape in ("linear", "smooth_cos"):
        traces = simulate_current(
            benchmark_system,
            benchmark_density,
            BiasProtocol(v=0.5, t1=5.0, shape=shape),
            [0, 5, 20],
            T_HORIZON,
            dt=0.02,
            dt_sample=0.1,
        )
        out[shape] = {tr.site: tr for tr in traces}
    return out


def test_criterion_01_equilibrium_null_current(benchmark_system, benchmark_density):
    worst = max(
        abs(current_operator(benchmark_system, n).expectation(benchmark_density.rho))
        for n in (0, 1, 5, 20)
    )
    ok = worst <= 1e-10
    report(1, ok, f"max |Tr(f(H) j_n)| = {worst:.3e} (bound 1e-10)")
    assert ok


def test_criterion_02_ergodic_matches_steady(sudden_traces, steady_ref):
    erg = ergodic_average(sudden_traces[0], T_HORIZON)
    dev = abs(erg - steady_ref.value) / abs(steady_ref.value)
    ok = dev <= TOL_REL
    report(2, ok, f"ergodic = {erg:.8f}, steady = {steady_ref.value:.8f}, "
                  f"deviation = {dev:.3%} (bound 2%)")
    assert ok
    # regression pin for the frozen reference value
    assert steady_ref.value == pytest.approx(I_STAR, abs=1e-9)


def test_criterion_03_protocol_and_site_independence(sudden_traces, ramped_traces):
    ergs = {("sudden", n): ergodic_average(sudden_traces[n], T_HORIZON) for n in (0, 5, 20)}
    for shape, traces in ramped_traces.items():
        for n in (0, 5, 20):
            ergs[(shape, n)] = ergodic_average(traces[n], T_HORIZON)

    def rel(a, b):
        return abs(a - b) / max(abs(a), abs(b))

    shape_dev = max(
        rel(ergs[(s1, n)], ergs[(s2, n)])
        for n in (0, 5, 20)
        for s1 in ("sudden", "linear", "smooth_cos")
        for s2 in ("sudden", "linear", "smooth_cos")
    )
    site_dev = max(
        rel(ergs[(s, n1)], ergs[(s, n2)])
        for s in ("sudden", "linear", "smooth_cos")
        for n1 in (0, 5, 20)
        for n2 in (0, 5, 20)
    )
    ok = shape_dev <= TOL_REL and site_dev <= TOL_REL
    report(3, ok, f"max shape-pairwise = {shape_dev:.3%}, "
                  f"max site-pairwise = {site_dev:.3%} (bound 2% each); "
                  f"site spread reflects the n/(2T) arrival delay at T={T_HORIZON:g}")
    assert shape_dev <= TOL_REL, f"switching-shape independence violated: {shape_dev:.3%}"
    assert site_dev <= TOL_REL, (
        f"site independence violated: {site_dev:.3%}; the ergodic average at site n "
        f"is biased by the front arrival time n/(2 t_hop) ~ {20 / 2:.0f} time units, "
        f"i.e. ~{20 / 2 / T_HORIZON:.1%} at T={T_HORIZON:g}, which exceeds the stated 2%"
    )


def test_criterion_04_current_vanishes_at_fixed_time_large_n(
    benchmark_system, benchmark_density, benchmark_protocol
):
    sites = np.arange(40, benchmark_system.trunc_len - 1)
    prof = current_profile(
        benchmark_system, benchmark_density, benchmark_protocol, 10.0, sites
    )
    worst = float(np.max(np.abs(prof)))
    ok = worst <= 1e-6
    report(4, ok, f"max |I(10, n)| over n in [40, {sites[-1]}] = {worst:.3e} (bound 1e-6)")
    assert ok


def test_criterion_05_light_cone_norm(benchmark_system):
    # nesting of the tail projectors makes the norm non-increasing in n, so
    # n = 40 is the binding case; two larger sites are spot checks.
    norms = {n: light_cone_norm(benchmark_system, 10.0, n) for n in (40, 60, 100)}
    ok = norms[40] <= 1e-6 and norms[60] <= norms[40] and norms[100] <= norms[60]
    report(5, ok, "||P1 e^(i 10 H) P2tail(n-1)|| = " +
           ", ".join(f"{v:.2e} (n={k})" for k, v in norms.items()) + " (bound 1e-6)")
    assert ok


def test_criterion_06_optical_theorem(benchmark_spec):
    grid = energy_grid(1.0, 0.5, 200)
    worst = max(abs(optical_residual(t_matrix(benchmark_spec, lam, 0.5))) for lam in grid)
    ok = worst <= 1e-10
    report(6, ok, f"max |Im t22 - pi(|t22|^2 + |t12|^2)| = {worst:.3e} (bound 1e-10)")
    assert ok


def test_criterion_07_transmittance_symmetry(benchmark_spec):
    grid = energy_grid(1.0, 0.5, 200)
    worst = max(
        abs(t_matrix(benchmark_spec, lam, 0.5).transmittance_12
            - t_matrix(benchmark_spec, lam, 0.5).transmittance_21)
        for lam in grid
    )
    ok = worst <= 1e-12
    report(7, ok, f"max |T12 - T21| = {worst:.3e} (bound 1e-12)")
    assert ok


def test_criterion_08_resolvent_oracle(benchmark_spec):
    # Truncated-lead oracle: sample block of (z - H_N - vP1)^(-1) by sparse LU.
    # The lead length and the imaginary offset are chosen together so that the
    # boundary echo is damped below the tolerance: the reflection travels 2N
    # sites at group velocity 2 t_hop sin k while exp(-eta t) suppresses it by
    # exp(-N eta / (t_hop sin k)) ~ 4e-6 << 1e-4.  (A shorter lead with a
    # smaller eta leaves the echo undamped and the comparison meaningless.)
    eta = 5e-5
    trunc = 250_000
    rng = np.random.default_rng(20250810)
    lams = rng.uniform(-1.45, 1.95, 20)

    h = sparse_truncated_hamiltonian(benchmark_spec, 0.5, trunc)
    identity = sp.identity(h.shape[0], dtype=complex, format="csc")
    worst = 0.0
    for lam in lams:
        z = lam + 1j * eta
        lu = spla.splu((identity * z - h).tocsc())
        e = np.zeros(h.shape[0], dtype=complex)
        e[0] = 1.0
        oracle = lu.solve(e)[0]
        analytic = effective_resolvent(benchmark_spec, z, 0.5)[0, 0]
        worst = max(worst, abs(oracle - analytic))
    ok = worst <= 1e-4
    report(8, ok, f"max |G_oracle - G_S| = {worst:.3e} over 20 random in-band "
                  f"energies (bound 1e-4; lead length {trunc}, eta {eta:g})")
    assert ok


def test_criterion_09_resonant_transmission(benchmark_spec):
    analytic = t_matrix(benchmark_spec, 0.0, 0.0).transmittance_12
    exact = 1.0 / (4 * np.pi**2)
    wp = wave_packet_transmission(0.5, 1.0, 0.0, 0.0) / (4 * np.pi**2)
    rel_wp = abs(wp - analytic) / analytic
    ok = abs(analytic - exact) <= 1e-8 and rel_wp <= 2e-3
    report(9, ok, f"T12(0) = {analytic:.12f} vs 1/(4 pi^2) = {exact:.12f} "
                  f"(bound 1e-8); wave-packet oracle = {wp:.8f}, "
                  f"rel. diff = {rel_wp:.2e} (bound 2e-3)")
    assert ok


def test_criterion_10_degenerate_closures(
    benchmark_spec, benchmark_system, benchmark_density
):
    worst = {}
    # zero bias: the equilibrium stays stationary
    traces = simulate_current(
        benchmark_system, benchmark_density, BiasProtocol(0.0, 0.0, "sudden"),
        [0, 5, 20], T_HORIZON,
    )
    worst["v=0"] = max(float(np.max(np.abs(tr.values))) for tr in traces)
    steady_v0 = steady_current(benchmark_spec, 0.0).value

    # decoupled sample: nothing can flow
    from dataclasses import replace
    from mesocurrent import CouplingSpec

    spec_tau0 = replace(benchmark_spec, coupling=CouplingSpec(tau=0.0))
    sys_tau0 = build_system(spec_tau0)
    traces = simulate_current(
        sys_tau0, equilibrium_density(sys_tau0), BiasProtocol(0.5, 0.0, "sudden"),
        [0, 5, 20], T_HORIZON,
    )
    worst["tau=0"] = max(float(np.max(np.abs(tr.values))) for tr in traces)
    steady_tau0 = steady_current(spec_tau0, 0.5).value

    # disjoint bands: empty spectrum and zero integral
    spectrum = transmittance_spectrum(benchmark_spec, 4.5, 200)
    steady_disjoint = steady_current(benchmark_spec, 4.5).value

    ok = (
        worst["v=0"] <= 1e-8
        and worst["tau=0"] <= 1e-8
        and steady_v0 == 0.0
        and steady_tau0 == 0.0
        and spectrum.empty
        and steady_disjoint == 0.0
    )
    report(10, ok, f"max|I| v=0: {worst['v=0']:.2e}, tau=0: {worst['tau=0']:.2e} "
                   f"(bound 1e-8); I_inf = {steady_v0}, {steady_tau0}, "
                   f"{steady_disjoint}; v=4.5 spectrum empty: {spectrum.empty}")
    assert ok


def test_criterion_11_propagator_order(benchmark_spec, benchmark_density):
    spec = resized(benchmark_spec, 100)
    sys = build_system(spec)
    density = equilibrium_density(sys)
    proto = BiasProtocol(0.5, 5.0, "smooth_cos")
    sols = {}
    for dt in (0.08, 0.04, 0.02, 0.01):
        tr = simulate_current(sys, density, proto, [0], 6.0, dt=dt, dt_sample=0.4)[0]
        sols[dt] = tr.values
    diffs = [
        float(np.max(np.abs(sols[a] - sols[b])))
        for a, b in ((0.08, 0.04), (0.04, 0.02), (0.02, 0.01))
    ]
    ratios = [diffs[0] / diffs[1], diffs[1] / diffs[2]]
    ok = all(r >= 3.5 for r in ratios)
    report(11, ok, f"successive-halving error ratios = "
                   f"{ratios[0]:.2f}, {ratios[1]:.2f} (bound >= 3.5 each)")
    assert ok


def test_criterion_12_fluctuation_decay_with_site(
    benchmark_spec, sudden_traces, steady_ref
):
    amps = {}
    for n in (0, 10, 30):
        tr = sudden_traces[n]
        t_safe = safe_horizon(benchmark_spec.lead, n)
        mask = (tr.times >= 0.6 * t_safe) & (tr.times <= 0.9 * t_safe)
        amps[n] = float(np.max(np.abs(tr.values[mask] - steady_ref.value)))
    ok = amps[10] <= 1.1 * amps[0] and amps[30] <= 1.1 * amps[10]
    report(12, ok, "late-window fluctuation amplitudes: " +
           ", ".join(f"{v:.2e} (n={k})" for k, v in amps.items()) +
           " (required non-increasing within 10%)")
    assert ok, (
        f"fluctuation amplitudes {amps} grow with n: band-edge transients reach "
        f"larger n later, so the fixed late window sees younger oscillations; all "
        f"amplitudes are below {max(amps.values()) / steady_ref.value:.1e} of the "
        f"steady current, i.e. the current has stabilized at every probed site"
    )
