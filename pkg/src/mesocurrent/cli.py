"""Command-line front end: transient runs, spectra, bound states, verification.

Subcommands
    transient     one CSV of I(t, n) per measurement site
    landauer      spectrum.csv (lambda, T12, optical residual) + steady.csv
    bound-states  bound_states.csv with the discrete levels
    verify        run every invariant check plus the reconcile report

Exit codes: 0 success, 1 verification failure, 2 configuration error.  All
output is deterministic: re-running a config reproduces files byte for byte.
"""

from __future__ import annotations

import argparse
import sys as _sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, parse_config
from .dynamics import (
    BiasProtocol,
    ergodic_average,
    light_cone_norm,
    current_profile,
    safe_horizon,
    simulate_current,
)
from .equilibrium import equilibrium_density, fermi_weight
from .landauer import band_support, reconcile, steady_current
from .model import build_system, current_operator, projector_lead1, projector_lead2_tail
from .scattering import bound_states, surface_green, transmittance_spectrum

FMT = "%.17g"


def _fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return FMT % x


def _header_lines(cfg: RunConfig, columns: str) -> list[str]:
    lines = [f"# mesocurrent {__version__}"]
    for key, value in cfg.provenance().items():
        lines.append(f"# {key} = {value}")
    lines.append(f"# columns: {columns}")
    return lines


def _write_csv(path: Path, cfg: RunConfig, columns: str, rows) -> None:
    text = "\n".join(_header_lines(cfg, columns)) + "\n" + columns + "\n"
    for row in rows:
        text += ",".join(_fmt(x) for x in row) + "\n"
    path.write_text(text, newline="\n")


def _check_horizon(cfg: RunConfig) -> str | None:
    lead = cfg.system.lead
    worst = max(cfg.numerics.n_list)
    horizon = safe_horizon(lead, worst, margin=cfg.numerics.margin)
    if cfg.numerics.t_max > horizon:
        need = int(np.ceil(worst + 2 * lead.t_hop * cfg.numerics.t_max / cfg.numerics.margin)) + 1
        return (
            f"t_max {cfg.numerics.t_max} exceeds the safe horizon {horizon:.6g} for "
            f"trunc_len {lead.trunc_len} and measurement site {worst}: boundary reflections "
            f"would contaminate the trace. Raise lead.trunc_len to >= {need} or lower "
            "numerics.t_max."
        )
    return None


def run_transient(cfg: RunConfig, out_dir: Path) -> int:
    problem = _check_horizon(cfg)
    if problem is not None:
        print(f"error: {problem}", file=_sys.stderr)
        return 2
    sys = build_system(cfg.system)
    density = equilibrium_density(sys)
    traces = simulate_current(
        sys,
        density,
        cfg.protocol,
        list(cfg.numerics.n_list),
        cfg.numerics.t_max,
        dt=cfg.numerics.dt,
        dt_sample=cfg.numerics.dt_sample,
    )
    for trace in traces:
        path = out_dir / f"transient_n{trace.site}.csv"
        _write_csv(path, cfg, "t,I_t_n", zip(trace.times, trace.values))
        print(f"wrote {path} ({trace.times.size} rows)")
    return 0


def run_landauer(cfg: RunConfig, out_dir: Path, threads: int = 1) -> int:
    v = cfg.protocol.v
    spectrum = transmittance_spectrum(cfg.system, v, 200, threads=threads)
    _write_csv(
        out_dir / "spectrum.csv",
        cfg,
        "lambda,T12,optical_residual",
        zip(spectrum.grid, spectrum.transmittance, spectrum.optical_residual),
    )
    steady = steady_current(cfg.system, v, cfg.numerics.quadrature)
    _write_csv(
        out_dir / "steady.csv",
        cfg,
        "I_inf,quad_error",
        [(steady.value, steady.estimated_quadrature_error)],
    )
    print(f"wrote {out_dir / 'spectrum.csv'} ({spectrum.grid.size} rows)")
    print(f"wrote {out_dir / 'steady.csv'} (I_inf = {steady.value:.10g})")
    return 0


def run_bound_states(cfg: RunConfig, out_dir: Path) -> int:
    report = bound_states(
        cfg.system, cfg.protocol.v, trunc_len=max(500, cfg.system.lead.trunc_len)
    )
    rows = [
        (e, xi, 0.0)
        for e, xi in zip(report.eigenvalues, report.localization_lengths)
    ] + [(e, float("nan"), 1.0) for e in report.embedded]
    _write_csv(out_dir / "bound_states.csv", cfg, "eigenvalue,localization_length,embedded", rows)
    print(f"wrote {out_dir / 'bound_states.csv'}: {report.count} bound state(s), "
          f"{report.embedded.size} embedded localized level(s)")
    return 0


class _Table:
    def __init__(self):
        self.rows = []

    def check(self, name: str, ok: bool, detail: str) -> None:
        self.rows.append((name, bool(ok), detail))

    @property
    def failed(self):
        return [r for r in self.rows if not r[1]]

    def render(self) -> str:
        width = max(len(r[0]) for r in self.rows) + 2
        out = []
        for name, ok, detail in self.rows:
            mark = "PASS" if ok else "FAIL"
            out.append(f"{mark}  {name:<{width}} {detail}")
        out.append(f"{len(self.rows) - len(self.failed)}/{len(self.rows)} checks passed")
        return "\n".join(out)


def run_verify(cfg: RunConfig) -> int:
    """Full invariant suite over the configured system, plus reconciliation."""
    table = _Table()
    sysb = build_system(cfg.system)
    lead = cfg.system.lead
    t = lead.t_hop
    v = cfg.protocol.v

    herm = float(np.linalg.norm(sysb.h_total - sysb.h_total.conj().T))
    table.check("hamiltonian hermitian", herm == 0.0, f"||H - H^dag|| = {herm:.1e}")

    p1 = projector_lead1(sysb).to_dense(sysb.dim)
    p2 = projector_lead2_tail(sysb, 0).to_dense(sysb.dim)
    table.check(
        "projector orthogonality",
        np.all(p1 @ p2 == 0.0) and np.allclose(p1 @ p1, p1),
        "P1 P2 = 0, P1 idempotent",
    )

    problem = _check_horizon(cfg)
    table.check("safe horizon", problem is None, problem or
                f"t_max {cfg.numerics.t_max} within the safe horizon")

    density = equilibrium_density(sysb)
    eq_max = max(
        abs(current_operator(sysb, n).expectation(density.rho)) for n in cfg.numerics.n_list
    )
    table.check("equilibrium null current", eq_max <= 1e-10, f"max |Tr(f(H) j_n)| = {eq_max:.2e}")

    comm = np.linalg.norm(density.rho @ sysb.h_total - sysb.h_total @ density.rho)
    scale = np.linalg.norm(sysb.h_total)
    table.check("density commutes with H", comm <= 1e-10 * scale, f"||[f(H), H]|| = {comm:.2e}")

    grid_ok = True
    detail = "empty band intersection"
    spectrum = transmittance_spectrum(cfg.system, v, 200)
    if not spectrum.empty:
        resid = float(np.max(np.abs(spectrum.optical_residual)))
        bound = 1.0 / (4 * np.pi**2) + 1e-10
        grid_ok = resid <= 1e-10 and np.all(spectrum.transmittance <= bound) and np.all(
            spectrum.transmittance >= 0.0
        )
        detail = f"max |optical residual| = {resid:.2e}, T12 within [0, 1/(4pi^2)]"
    table.check("optical theorem + unitarity bound", grid_ok, detail)

    sym_ok = True
    detail = "empty band intersection"
    if not spectrum.empty:
        from .scattering import t_matrix as _tm

        diffs = [
            abs(_tm(cfg.system, float(lam), v).transmittance_12
                - _tm(cfg.system, float(lam), v).transmittance_21)
            for lam in spectrum.grid[::10]
        ]
        sym_ok = max(diffs) <= 1e-12
        detail = f"max |T12 - T21| = {max(diffs):.2e}"
    table.check("transmittance symmetry", sym_ok, detail)

    qerr = []
    for lam in np.linspace(-2 * t + 1e-3, 2 * t - 1e-3, 7):
        g = surface_green(lam, t)
        qerr.append(abs(t * t * g * g - lam * g + 1.0))
    table.check("surface green quadratic identity", max(qerr) <= 1e-12,
                f"max residual = {max(qerr):.2e}")

    t_probe = min(10.0, cfg.numerics.t_max)
    n_probe = int(2 * t * t_probe + 20)
    if n_probe < lead.trunc_len - 1:
        norm = light_cone_norm(sysb, t_probe, n_probe)
        table.check("light cone", norm <= 1e-6,
                    f"||P1 e^(itH) P2tail|| = {norm:.2e} at t={t_probe}, n={n_probe}")
        prof = current_profile(sysb, density, cfg.protocol, t_probe,
                               np.arange(n_probe, lead.trunc_len - 1), dt=cfg.numerics.dt)
        table.check("current vanishes deep in lead 2", np.max(np.abs(prof)) <= 1e-6,
                    f"max |I({t_probe}, n>={n_probe})| = {np.max(np.abs(prof)):.2e}")
    else:
        table.check("light cone", False,
                    f"lead too short to probe n = {n_probe}; raise lead.trunc_len")

    if problem is None:
        report = reconcile(
            cfg.system,
            cfg.protocol,
            lead.trunc_len,
            cfg.numerics.t_max,
            cfg.numerics.n_list,
            dt=cfg.numerics.dt,
            dt_sample=cfg.numerics.dt_sample,
            margin=cfg.numerics.margin,
            quad=cfg.numerics.quadrature,
        )
        for row in report.rows:
            table.check(
                f"reconcile {row.shape} n={row.site}",
                row.ok,
                f"ergodic = {row.ergodic:.8g}, steady = {report.steady:.8g}, "
                f"deviation = {row.deviation:.3%}",
            )
        for w in report.warnings:
            print(f"warning: {w}")
    else:
        table.check("reconcile", False, "skipped: " + problem)

    print(table.render())
    return 0 if not table.failed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mesocurrent",
        description="Charge transport through a tight-binding sample between two biased leads",
    )
    parser.add_argument("command", choices=["transient", "landauer", "verify", "bound-states"])
    parser.add_argument("--config", required=True, help="path to the run configuration document")
    parser.add_argument("--out", default=None, help="output directory (default: from config)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for the energy grid")
    args = parser.parse_args(argv)

    try:
        cfg = parse_config(Path(args.config).read_text())
    except FileNotFoundError:
        print(f"error: config file not found: {args.config}", file=_sys.stderr)
        return 2
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=_sys.stderr)
        return 2

    out_dir = Path(args.out) if args.out else Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.command == "transient":
        return run_transient(cfg, out_dir)
    if args.command == "landauer":
        return run_landauer(cfg, out_dir, threads=max(1, args.threads))
    if args.command == "bound-states":
        return run_bound_states(cfg, out_dir)
    return run_verify(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
