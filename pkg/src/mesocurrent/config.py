"""Run configuration: a flat INI document mapped onto the library types.

Sections and keys (defaults in parentheses form the single-site benchmark):

    [sample]    site_count (1), matrix (0.0, row-major), contact1 (0), contact2 (0)
    [lead]      t_hop (1.0), trunc_len (400)
    [coupling]  tau (0.5)
    [thermal]   beta (10.0), mu (0.0)
    [protocol]  v (0.5), t1 (0.0), shape (sudden)
    [numerics]  dt (0.02), dt_sample (0.1), t_max (150.0), n_list (0),
                quad_panels (24), quad_nodes (32), margin (0.9)
    [output]    directory (.)

Unknown sections or keys are hard errors (with a nearest-key suggestion);
every constraint violation names the offending ``section.key``.  Matrix
entries may be complex, written like ``0.3+0.1j``.
"""

from __future__ import annotations

import configparser
import difflib
import io
from dataclasses import dataclass, field

import numpy as np

from .dynamics import SHAPES, BiasProtocol
from .landauer import QuadratureSpec
from .model import CouplingSpec, LeadSpec, SampleSpec, SystemSpec, ThermalSpec

_SCHEMA = {
    "sample": ("site_count", "matrix", "contact1", "contact2"),
    "lead": ("t_hop", "trunc_len"),
    "coupling": ("tau",),
    "thermal": ("beta", "mu"),
    "protocol": ("v", "t1", "shape"),
    "numerics": ("dt", "dt_sample", "t_max", "n_list", "quad_panels", "quad_nodes", "margin"),
    "output": ("directory",),
}

_DEFAULTS = {
    "sample": {"site_count": "1", "matrix": "0.0", "contact1": "0", "contact2": "0"},
    "lead": {"t_hop": "1.0", "trunc_len": "400"},
    "coupling": {"tau": "0.5"},
    "thermal": {"beta": "10.0", "mu": "0.0"},
    "protocol": {"v": "0.5", "t1": "0.0", "shape": "sudden"},
    "numerics": {
        "dt": "0.02",
        "dt_sample": "0.1",
        "t_max": "150.0",
        "n_list": "0",
        "quad_panels": "24",
        "quad_nodes": "32",
        "margin": "0.9",
    },
    "output": {"directory": "."},
}


class ConfigError(ValueError):
    """One or more configuration problems; ``errors`` lists them all."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class NumericsConfig:
    dt: float
    dt_sample: float
    t_max: float
    n_list: tuple
    quadrature: QuadratureSpec
    margin: float


@dataclass(frozen=True)
class RunConfig:
    system: SystemSpec
    protocol: BiasProtocol
    numerics: NumericsConfig
    output_dir: str
    raw: dict = field(repr=False, default_factory=dict)

    def provenance(self) -> dict:
        """Flat, sorted section.key -> value map for output headers."""
        out = {}
        for section in sorted(self.raw):
            for key in sorted(self.raw[section]):
                out[f"{section}.{key}"] = self.raw[section][key]
        return out


def _suggest(name: str, candidates) -> str:
    close = difflib.get_close_matches(name, list(candidates), n=1)
    return f" (did you mean {close[0]!r}?)" if close else ""


def _parse_scalar(text, kind, where, errors, default=None):
    try:
        if kind is int:
            v = int(text)
        elif kind is float:
            v = float(text)
        else:
            v = text.strip()
        return v
    except ValueError:
        errors.append(f"{where}: expected {kind.__name__}, got {text!r}")
        return default


def parse_config(text: str) -> RunConfig:
    """Validate a configuration document; raises :class:`ConfigError` listing
    every offending field rather than stopping at the first."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    errors: list[str] = []
    try:
        parser.read_file(io.StringIO(text))
    except configparser.Error as exc:
        raise ConfigError([f"malformed document: {exc}"]) from exc

    for section in parser.sections():
        if section not in _SCHEMA:
            errors.append(f"unknown section [{section}]{_suggest(section, _SCHEMA)}")
            continue
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                errors.append(
                    f"unknown key {section}.{key}{_suggest(key, _SCHEMA[section])}"
                )
    if errors:
        raise ConfigError(errors)

    raw = {s: dict(_DEFAULTS[s]) for s in _SCHEMA}
    for section in parser.sections():
        for key, value in parser[section].items():
            raw[section][key] = value.strip()

    get = lambda s, k: raw[s][k]

    site_count = _parse_scalar(get("sample", "site_count"), int, "sample.site_count", errors, 1)
    contact1 = _parse_scalar(get("sample", "contact1"), int, "sample.contact1", errors, 0)
    contact2 = _parse_scalar(get("sample", "contact2"), int, "sample.contact2", errors, 0)
    matrix = _parse_matrix(get("sample", "matrix"), site_count, errors)

    t_hop = _parse_scalar(get("lead", "t_hop"), float, "lead.t_hop", errors, 1.0)
    trunc_len = _parse_scalar(get("lead", "trunc_len"), int, "lead.trunc_len", errors, 400)
    tau = _parse_scalar(get("coupling", "tau"), float, "coupling.tau", errors, 0.5)
    beta = _parse_scalar(get("thermal", "beta"), float, "thermal.beta", errors, 10.0)
    mu = _parse_scalar(get("thermal", "mu"), float, "thermal.mu", errors, 0.0)

    v = _parse_scalar(get("protocol", "v"), float, "protocol.v", errors, 0.5)
    t1 = _parse_scalar(get("protocol", "t1"), float, "protocol.t1", errors, 0.0)
    shape = _parse_scalar(get("protocol", "shape"), str, "protocol.shape", errors, "sudden")

    dt = _parse_scalar(get("numerics", "dt"), float, "numerics.dt", errors, 0.02)
    dt_sample = _parse_scalar(get("numerics", "dt_sample"), float, "numerics.dt_sample", errors, 0.1)
    t_max = _parse_scalar(get("numerics", "t_max"), float, "numerics.t_max", errors, 150.0)
    quad_panels = _parse_scalar(get("numerics", "quad_panels"), int, "numerics.quad_panels", errors, 24)
    quad_nodes = _parse_scalar(get("numerics", "quad_nodes"), int, "numerics.quad_nodes", errors, 32)
    margin = _parse_scalar(get("numerics", "margin"), float, "numerics.margin", errors, 0.9)
    n_list = _parse_n_list(get("numerics", "n_list"), errors)
    directory = get("output", "directory")

    if errors:
        raise ConfigError(errors)

    def _try(where, ctor, *args, **kwargs):
        try:
            return ctor(*args, **kwargs)
        except ValueError as exc:
            errors.append(f"{where}: {exc}")
            return None

    sample = _try("sample", SampleSpec, site_count=site_count, h_sample=matrix,
                  contact1=contact1, contact2=contact2)
    lead = _try("lead", LeadSpec, t_hop=t_hop, trunc_len=trunc_len)
    coupling = _try("coupling.tau", CouplingSpec, tau=tau)
    thermal = _try("thermal", ThermalSpec, beta=beta, mu=mu)
    protocol = _try("protocol", BiasProtocol, v=v, t1=t1, shape=shape)
    quad = _try("numerics", QuadratureSpec, panels=quad_panels, nodes_per_panel=quad_nodes)

    if dt is not None and dt <= 0:
        errors.append(f"numerics.dt: must be > 0 (got {dt})")
    if dt_sample is not None and dt_sample <= 0:
        errors.append(f"numerics.dt_sample: must be > 0 (got {dt_sample})")
    if t_max is not None and t_max <= 0:
        errors.append(f"numerics.t_max: must be > 0 (got {t_max})")
    if margin is not None and not 0 < margin < 1:
        errors.append(f"numerics.margin: must lie in (0, 1) (got {margin})")
    if n_list is not None and lead is not None:
        for n in n_list:
            if not 0 <= n < lead.trunc_len - 1:
                errors.append(
                    f"numerics.n_list: site {n} out of range [0, {lead.trunc_len - 1})"
                )

    if errors:
        raise ConfigError(errors)

    return RunConfig(
        system=SystemSpec(sample=sample, lead=lead, coupling=coupling, thermal=thermal),
        protocol=protocol,
        numerics=NumericsConfig(
            dt=dt,
            dt_sample=dt_sample,
            t_max=t_max,
            n_list=tuple(n_list),
            quadrature=quad,
            margin=margin,
        ),
        output_dir=directory,
        raw=raw,
    )


def _parse_matrix(text: str, site_count: int, errors) -> np.ndarray:
    tokens = text.replace(",", " ").split()
    vals = []
    for tok in tokens:
        try:
            vals.append(complex(tok))
        except ValueError:
            errors.append(f"sample.matrix: entry {tok!r} is not a number")
            return np.zeros((max(site_count, 1), max(site_count, 1)))
    if len(vals) != site_count * site_count:
        errors.append(
            f"sample.matrix: expected {site_count * site_count} row-major entries "
            f"for site_count {site_count}, got {len(vals)}"
        )
        return np.zeros((max(site_count, 1), max(site_count, 1)))
    m = np.array(vals).reshape(site_count, site_count)
    if np.all(np.abs(m.imag) == 0.0):
        m = m.real
    return m


def _parse_n_list(text: str, errors):
    tokens = text.replace(",", " ").split()
    if not tokens:
        errors.append("numerics.n_list: must contain at least one site")
        return None
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            errors.append(f"numerics.n_list: entry {tok!r} is not an integer")
            return None
    return out


BENCHMARK_DOCUMENT = """\
[sample]
site_count = 1
matrix = 0.0
contact1 = 0
contact2 = 0

[lead]
t_hop = 1.0
trunc_len = 400

[coupling]
tau = 0.5

[thermal]
beta = 10.0
mu = 0.0

[protocol]
v = 0.5
t1 = 0.0
shape = sudden

[numerics]
dt = 0.02
dt_sample = 0.1
t_max = 150.0
n_list = 0
quad_panels = 24
quad_nodes = 32
margin = 0.9

[output]
directory = .
"""
