import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdeg.channels import identity_channel
from qdeg.entropy import (
    alicki_fannes_term,
    binary_entropy,
    coherent_information,
    conditional_entropy,
    fannes_audenaert_term,
    von_neumann_entropy,
)
from qdeg.errors import DomainError
from qdeg.linalg import random_density, trace_norm
from qdeg.zoo import completely_depolarizing, depolarizing

H_QUARTER = 0.811278


def test_entropy_examples():
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert abs(von_neumann_entropy(np.eye(2) / 2) - 1) < 1e-14
    assert abs(von_neumann_entropy(np.diag([0.75, 0.25])) - H_QUARTER) < 1e-6


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0) == 0.0 and binary_entropy(1) == 0.0
    assert abs(binary_entropy(0.25) - H_QUARTER) < 1e-6
    with pytest.raises(DomainError):
        binary_entropy(1.2)


def test_near_singular_state():
    rho = np.diag([1 - 1e-17, 1e-17])
    assert von_neumann_entropy(rho, validate=False) == 0.0


def test_coherent_information_examples():
    assert abs(coherent_information(np.eye(2) / 2, identity_channel(2)) - 1) < 1e-12
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert coherent_information(random_density(2, rng), completely_depolarizing(2)) <= 1e-12
    assert abs(coherent_information(np.eye(2) / 2, depolarizing(0.1)) - 0.372508) < 1e-6


def test_conditional_entropy_bell():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert abs(conditional_entropy(np.outer(psi, psi), (2, 2)) + 1) < 1e-12


def test_fannes_audenaert_examples():
    assert fannes_audenaert_term(0, 5) == 0
    assert abs(fannes_audenaert_term(1, 2) - 1) < 1e-14
    assert abs(fannes_audenaert_term(0.1, 4) - 0.3657) < 1e-4
    # the cap: past ε/2 = 1 − 1/d the value stays at log d
    assert abs(fannes_audenaert_term(2.0, 4) - 2.0) < 1e-14
    assert fannes_audenaert_term(1.9, 1) == 0.0


def test_alicki_fannes_examples():
    assert alicki_fannes_term(0, 3) == 0
    assert abs(alicki_fannes_term(2, 2) - 4) < 1e-14
    # 0.2 + 1.05·h(1/21) with h(1/21) = 0.276190
    assert abs(alicki_fannes_term(0.1, 4) - 0.490000) < 1e-5
    with pytest.raises(DomainError):
        alicki_fannes_term(2.5, 2)


@pytest.mark.parametrize("term", [fannes_audenaert_term, alicki_fannes_term])
@pytest.mark.parametrize("dim", [1, 2, 4, 16])
def test_terms_monotone(term, dim):
    vals = [term(e, dim) for e in np.linspace(0, 2, 401)]
    assert np.all(np.diff(vals) >= -1e-12)


def test_fannes_audenaert_inequality():
    rng = np.random.default_rng(11)
    bad = 0
    for k in range(500):
        d = 2 if k % 2 else 3
        rho, sigma = random_density(d, rng), random_density(d, rng)
        if k % 5 == 0:
            # nearby pairs probe the small-distance regime
            sigma = 0.97 * rho + 0.03 * sigma
        gap = abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma))
        bad += gap > fannes_audenaert_term(trace_norm(rho - sigma), d) + 1e-9
    assert bad == 0


def test_alicki_fannes_inequality():
    rng = np.random.default_rng(12)
    bad = 0
    for k in range(200):
        rho, sigma = random_density(4, rng), random_density(4, rng)
        if k % 4 == 0:
            sigma = 0.95 * rho + 0.05 * sigma
        gap = abs(conditional_entropy(rho, (2, 2)) - conditional_entropy(sigma, (2, 2)))
        bad += gap > alicki_fannes_term(min(trace_norm(rho - sigma), 2.0), 2) + 1e-9
    assert bad == 0


@given(st.floats(0, 1), st.floats(0, 1))
def test_entropy_concave_mixture(a, lam):
    rho, sigma = np.diag([a, 1 - a]), np.eye(2) / 2
    mix = lam * rho + (1 - lam) * sigma
    assert von_neumann_entropy(mix) >= lam * von_neumann_entropy(rho) + (1 - lam) + -1e-12
