import numpy as np
import pytest

from mesocurrent import (
    BiasProtocol,
    CouplingSpec,
    LeadSpec,
    SampleSpec,
    SystemSpec,
    ThermalSpec,
    build_system,
    equilibrium_density,
    resized,
)


def single_site_spec(eps0=0.0, t_hop=1.0, tau=0.5, beta=10.0, mu=0.0, trunc_len=400):
    return SystemSpec(
        sample=SampleSpec(site_count=1, h_sample=np.array([[eps0]]), contact1=0, contact2=0),
        lead=LeadSpec(t_hop=t_hop, trunc_len=trunc_len),
        coupling=CouplingSpec(tau=tau),
        thermal=ThermalSpec(beta=beta, mu=mu),
    )


def random_hermitian(n, rng, complex_entries=False):
    a = rng.standard_normal((n, n))
    if complex_entries:
        a = a + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


@pytest.fixture(scope="session")
def benchmark_spec():
    """Single-site benchmark: eps0=0, t_hop=1, tau=0.5, beta=10, mu=0, N=400."""
    return single_site_spec()


@pytest.fixture(scope="session")
def benchmark_system(benchmark_spec):
    return build_system(benchmark_spec)


@pytest.fixture(scope="session")
def benchmark_density(benchmark_system):
    return equilibrium_density(benchmark_system)


@pytest.fixture(scope="session")
def benchmark_protocol():
    return BiasProtocol(v=0.5, t1=0.0, shape="sudden")


@pytest.fixture(scope="session")
def small_spec(benchmark_spec):
    """Benchmark parameters on a short lead, for fast dynamical tests."""
    return resized(benchmark_spec, 60)


@pytest.fixture(scope="session")
def small_system(small_spec):
    return build_system(small_spec)


@pytest.fixture(scope="session")
def small_density(small_system):
    return equilibrium_density(small_system)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
