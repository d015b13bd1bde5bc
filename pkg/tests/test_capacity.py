import numpy as np
import pytest

from qdeg.capacity import (
    EntropyDifference,
    anti_degradable_bound,
    capacity_bounds,
    channel_coherent_information,
    close_antidegradable_bounds,
    close_degradable_bounds,
    close_to_eps_degradable,
    u_xi,
)
from qdeg.channels import channel_from_kraus, compose, convex_combination, identity_channel
from qdeg.entropy import alicki_fannes_term, coherent_information, fannes_audenaert_term
from qdeg.errors import DimensionMetadataMissing, DomainError
from qdeg.linalg import random_density
from qdeg.sdp.programs import epsilon_antidegradable, epsilon_degradable
from qdeg.zoo import (
    amplitude_damping,
    bb84,
    bb84_q1,
    completely_depolarizing,
    depolarizing,
    depolarizing_q1,
)


def test_q1_identity():
    val, rho = channel_coherent_information(identity_channel(2), starts=3)
    assert abs(val - 1) < 1e-8
    assert np.allclose(rho, np.eye(2) / 2, atol=1e-4)


@pytest.mark.parametrize("p", [0.01, 0.05, 0.1])
def test_q1_depolarizing(p):
    val, _ = channel_coherent_information(depolarizing(p))
    assert abs(val - depolarizing_q1(p)) < 1e-6


def test_q1_bb84():
    val, _ = channel_coherent_information(bb84(0.01, 0.01))
    assert abs(val - 0.838414) < 1e-6
    assert abs(bb84_q1(0.01, 0.01) - 0.838414) < 1e-6


@pytest.mark.parametrize("ch,closed", [(depolarizing(0.2), depolarizing_q1(0.2)),
                                       (bb84(0.005, 0.5), bb84_q1(0.005, 0.5))])
def test_q1_zero_past_hashing_point(ch, closed):
    val, _ = channel_coherent_information(ch, starts=5)
    assert closed == 0.0
    assert abs(val) < 1e-8


def test_q1_dominates_random_inputs():
    rng = np.random.default_rng(2)
    for ch in (amplitude_damping(0.2), depolarizing(0.07), bb84(0.02, 0.05)):
        q1, _ = channel_coherent_information(ch, starts=5)
        for _ in range(100):
            assert coherent_information(random_density(2, rng), ch) <= q1 + 1e-9


def test_gradient_matches_finite_difference():
    rng = np.random.default_rng(3)
    ch = amplitude_damping(0.3)
    prob = EntropyDifference(ch, compose(amplitude_damping(0.5), ch))
    rho = random_density(2, rng)
    _, grad = prob.value_and_grad(rho)
    h = 1e-6
    for _ in range(5):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        d = a + a.conj().T
        d -= np.trace(d) / 2 * np.eye(2)  # stay on the trace-one slice
        fd = (prob.value(rho + h * d) - prob.value(rho - h * d)) / (2 * h)
        assert abs(fd - np.trace(grad @ d).real) < 1e-6


def test_u_xi_examples():
    g = 0.3
    ch = amplitude_damping(g)
    xi = amplitude_damping((1 - 2 * g) / (1 - g))
    q1, _ = channel_coherent_information(ch)
    assert abs(u_xi(ch, xi) - q1) < 1e-5
    trace_out = channel_from_kraus([np.eye(2)[[b]] for b in range(2)], 2, 1)
    assert abs(u_xi(identity_channel(2), trace_out) - 1) < 1e-8


def test_u_xi_concave_along_segments():
    rng = np.random.default_rng(4)
    ch = depolarizing(0.05)
    xi = epsilon_degradable(ch, verify=False).degrading_map
    prob = EntropyDifference(ch, compose(xi, ch))
    for _ in range(50):
        r0, r1 = random_density(2, rng), random_density(2, rng)
        mid = prob.value((r0 + r1) / 2)
        assert mid >= (prob.value(r0) + prob.value(r1)) / 2 - 1e-9


@pytest.mark.parametrize("ch", [depolarizing(p) for p in (0.01, 0.03, 0.05, 0.1, 0.15)]
                         + [bb84(p, p) for p in (0.005, 0.02, 0.05)])
def test_sandwich(ch):
    rep = epsilon_degradable(ch, verify=False)
    q1, _ = channel_coherent_information(ch, starts=5)
    uxi = u_xi(ch, rep.degrading_map)
    # full trace-norm distance in the Fannes-Audenaert modulus
    assert abs(q1 - uxi) <= fannes_audenaert_term(rep.diamond_distance, rep.dim_E) + 1e-5


def test_bounds_collapse_when_degradable():
    ch = amplitude_damping(0.3)
    rep = epsilon_degradable(ch)
    q1, _ = channel_coherent_information(ch)
    b = capacity_bounds(ch, rep, q1, u_xi(ch, rep.degrading_map))
    for v in b.upper_bounds().values():
        assert abs(v - q1) < 1e-5


def test_bounds_dominate_q1():
    ch = depolarizing(0.05)
    rep = epsilon_degradable(ch)
    q1 = depolarizing_q1(0.05)
    b = capacity_bounds(ch, rep, q1, u_xi(ch, rep.degrading_map), anti_report=epsilon_antidegradable(ch))
    assert all(v >= q1 - 1e-9 for k, v in b.upper_bounds().items() if k != "anti_upper")
    t = b.terms
    assert abs(b.q_upper_thm1_i - (q1 + t.fa + t.af)) < 1e-15
    assert abs(b.p_upper_thm1_iii - (q1 + t.fa + 3 * t.af)) < 1e-15
    assert t.xi1 == 2 * t.af
    assert set(b.to_dict()) >= {"q1", "u_xi", "terms", "anti_upper"}


def test_bounds_need_dimensions():
    class Bare:
        epsilon = 0.1

    with pytest.raises(DimensionMetadataMissing):
        capacity_bounds(depolarizing(0.1), Bare(), 0.3, 0.3)


def test_anti_bound_examples():
    rep = epsilon_antidegradable(amplitude_damping(0.7))
    assert anti_degradable_bound(rep, 2) <= 1e-5
    # 0.1 + h(0.05) + 1.05·h(1/21)
    assert abs(anti_degradable_bound(0.1, 2) - 0.676398) < 1e-5
    assert anti_degradable_bound(0.0, 2) == 0.0


def test_close_degradable_intervals():
    q, p = close_degradable_bounds(0.0, 2, 0.7)
    assert q == (0.7, 0.7) and p == (0.7, 0.7)
    q, _ = close_degradable_bounds(0.05, 2, 0.8)
    # 0.05 + 2.05·h(0.05/2.05), with h(0.05/2.05) = 0.165427
    assert abs(q[1] - 0.8 - 0.389125) < 1e-5
    assert close_antidegradable_bounds(0.0, 2) == (0.0, 0.0)
    q, _ = close_degradable_bounds(1.0, 2, 0.1)
    assert q[0] == 0.0


def test_close_to_eps_degradable_values():
    assert close_to_eps_degradable(0) == 0
    assert abs(close_to_eps_degradable(0.01) - 0.21) < 1e-12
    assert abs(close_to_eps_degradable(1) - 3) < 1e-12
    with pytest.raises(DomainError):
        close_to_eps_degradable(-0.1)


@pytest.mark.parametrize("eps", [0.01, 0.04, 0.1])
def test_close_degradable_mixture(eps):
    psi = amplitude_damping(0.3)
    mixed = convex_combination([psi, completely_depolarizing(2)], [1 - eps / 2, eps / 2])
    rep = epsilon_degradable(mixed, verify=False)
    assert rep.diamond_distance <= close_to_eps_degradable(eps) + 1e-5


def test_bound_terms_monotone():
    vals = [capacity_bounds(depolarizing(0.1), type("R", (), {"epsilon": e, "dim_E": 4, "dim_F": 8})(),
                            0.3, 0.3).upper_bounds() for e in np.linspace(0, 2, 81)]
    for key in vals[0]:
        seq = [v[key] for v in vals]
        assert np.all(np.diff(seq) >= -1e-12), key
