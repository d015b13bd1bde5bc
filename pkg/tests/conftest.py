import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qdeg.channels import channel_from_kraus
from qdeg.linalg import random_unitary

settings.register_profile("qdeg", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qdeg")


def random_channel(dim_in, dim_out, rank, rng):
    """Kraus family cut from a Haar isometry A → B ⊗ E."""
    rank = max(rank, -(-dim_in // dim_out))
    v = random_unitary(dim_out * rank, rng)[:, :dim_in]
    return channel_from_kraus(v.reshape(dim_out, rank, dim_in).transpose(1, 0, 2), dim_in, dim_out)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
