import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdeg.channels import (
    ChoiMatrix,
    apply,
    apply_choi,
    channel_from_choi,
    channel_from_kraus,
    choi_from_transfer,
    choi_matrix,
    complementary,
    compose,
    dilate,
    identity_channel,
    kraus_rank,
    stinespring,
    tensor,
    tensor_choi,
    transfer_from_choi,
    transfer_matrix,
)
from qdeg.entropy import von_neumann_entropy
from qdeg.errors import CompletenessViolation, NotCompletelyPositive, ShapeMismatch
from qdeg.linalg import max_entangled, partial_trace, random_density, random_unitary
from qdeg.zoo import PAULI_X, PAULI_Y, PAULI_Z, amplitude_damping, completely_depolarizing, depolarizing, depolarizing_q1

from conftest import random_channel

dims = st.integers(1, 3)
seeds = st.integers(0, 2**32 - 1)


def test_identity_kraus():
    ch = channel_from_kraus([np.eye(2)])
    assert ch.dim_env == 1
    rho = random_density(2, np.random.default_rng(0))
    assert np.allclose(apply(ch, rho), rho, atol=1e-14)


def test_depolarizing_from_paulis():
    p = 0.1
    ops = [np.sqrt(1 - p) * np.eye(2)] + [np.sqrt(p / 3) * s for s in (PAULI_X, PAULI_Y, PAULI_Z)]
    assert np.allclose(choi_matrix(channel_from_kraus(ops)), choi_matrix(depolarizing(p)), atol=1e-14)


def test_overcomplete_kraus_rejected():
    with pytest.raises(CompletenessViolation):
        channel_from_kraus([np.eye(2), np.eye(2)])


def test_mismatched_shapes_rejected():
    with pytest.raises(ShapeMismatch):
        channel_from_kraus([np.eye(2), np.eye(3)])


def test_choi_identity_and_replacer():
    j = choi_matrix(identity_channel(2))
    expect = np.zeros((4, 4))
    expect[np.ix_([0, 3], [0, 3])] = 1
    assert np.allclose(j, expect)
    assert np.allclose(choi_matrix(completely_depolarizing(2)), np.eye(4) / 2)


def test_choi_spectrum_depolarizing():
    p = 0.1
    w = np.linalg.eigvalsh(choi_matrix(depolarizing(p)))
    # 2(1−p) on the Bell state, 2p/3 on the other three
    assert np.allclose(np.sort(w), sorted([2 * (1 - p)] + [2 * p / 3] * 3), atol=1e-13)


def test_choi_round_trip_depolarizing():
    ch = channel_from_choi(ChoiMatrix(2, 2, choi_matrix(depolarizing(0.1))))
    assert ch.dim_env == 4
    out = apply(ch, np.diag([1.0, 0.0]))
    assert np.allclose(out, np.diag([1 - 0.2 / 3, 0.2 / 3]), atol=1e-12)


def test_identity_choi_round_trip_single_kraus():
    ch = channel_from_choi(ChoiMatrix(2, 2, choi_matrix(identity_channel(2))))
    assert ch.dim_env == 1
    k = ch.kraus[0]
    assert np.allclose(k / k[0, 0], np.eye(2))


def test_non_cp_choi_rejected():
    j = np.diag([1.0, 0.0, 0.0, -0.01])
    with pytest.raises(NotCompletelyPositive):
        channel_from_choi(j, 2, 2)


@given(dims, dims, st.integers(1, 4), seeds)
def test_choi_kraus_round_trip(din, dout, rank, seed):
    rng = np.random.default_rng(seed)
    ch = random_channel(din, dout, rank, rng)
    j = choi_matrix(ch)
    back = channel_from_choi(ChoiMatrix(din, dout, j))
    assert np.max(np.abs(choi_matrix(back) - j)) < 1e-10
    assert np.allclose(partial_trace(j, [dout, din], keep=1), np.eye(din), atol=1e-10)
    assert back.dim_env == kraus_rank(ch)


@given(dims, dims, st.integers(1, 4), seeds)
def test_apply_kraus_matches_choi(din, dout, rank, seed):
    rng = np.random.default_rng(seed)
    ch = random_channel(din, dout, rank, rng)
    rho = random_density(din, rng)
    assert np.allclose(apply(ch, rho), apply_choi(ChoiMatrix(din, dout, choi_matrix(ch)), rho), atol=1e-12)


@given(dims, dims, st.integers(1, 4), seeds)
def test_dilation_marginals(din, dout, rank, seed):
    rng = np.random.default_rng(seed)
    ch = random_channel(din, dout, rank, rng)
    rho = random_density(din, rng)
    joint = dilate(ch, rho)
    assert np.allclose(partial_trace(joint, [dout, ch.dim_env], keep=0), apply(ch, rho), atol=1e-12)
    comp = complementary(ch)
    if comp.dim_out == ch.dim_env:
        assert np.allclose(partial_trace(joint, [dout, ch.dim_env], keep=1), apply(comp, rho), atol=1e-12)
    else:
        # canonicalized environment: compare spectra instead of matrices
        env = partial_trace(joint, [dout, ch.dim_env], keep=1)
        w = np.sort(np.linalg.eigvalsh(env))[::-1][: comp.dim_out]
        assert np.allclose(w, np.sort(np.linalg.eigvalsh(apply(comp, rho)))[::-1], atol=1e-10)


@given(dims, dims, st.integers(1, 4), seeds)
def test_transfer_choi_involution(din, dout, rank, seed):
    ch = random_channel(din, dout, rank, np.random.default_rng(seed))
    t, j = transfer_matrix(ch), choi_matrix(ch)
    assert np.allclose(transfer_from_choi(j, din, dout), t, atol=1e-12)
    assert np.allclose(choi_from_transfer(t, din, dout), j, atol=1e-12)
    t4 = t.reshape(dout, dout, din, din)
    j4 = j.reshape(dout, din, dout, din)
    assert np.allclose(t4, j4.transpose(0, 2, 1, 3), atol=1e-12)


@given(dims, dims, dims, seeds)
def test_transfer_of_composition(da, db, dc, seed):
    rng = np.random.default_rng(seed)
    inner = random_channel(da, db, 2, rng)
    outer = random_channel(db, dc, 2, rng)
    t = transfer_matrix(compose(outer, inner))
    assert np.allclose(t, transfer_matrix(outer) @ transfer_matrix(inner), atol=1e-12)


def test_stinespring_identity_and_damping():
    assert np.allclose(stinespring(identity_channel(2)).matrix, np.eye(2))
    v = stinespring(amplitude_damping(0.3)).matrix
    assert v.shape == (4, 2)
    assert np.allclose(v.conj().T @ v, np.eye(2), atol=1e-14)


def test_stinespring_depolarizing_marginal():
    ch = depolarizing(0.1)
    rho = random_density(2, np.random.default_rng(3))
    assert stinespring(ch).matrix.shape == (8, 2)
    assert np.allclose(partial_trace(dilate(ch, rho), [2, 4], keep=0), apply(ch, rho), atol=1e-12)


def test_complement_of_identity_is_trace():
    comp = complementary(identity_channel(2))
    assert comp.dim_out == 1
    rho = random_density(2, np.random.default_rng(4))
    assert np.allclose(apply(comp, rho), [[1.0]])


def test_complement_of_damping_is_damping():
    g = 0.3
    w1 = np.linalg.eigvalsh(choi_matrix(complementary(amplitude_damping(g))))
    w2 = np.linalg.eigvalsh(choi_matrix(amplitude_damping(1 - g)))
    assert np.allclose(w1, w2, atol=1e-12)


def test_complement_of_depolarizing_entropy():
    p = 0.1
    comp = complementary(depolarizing(p))
    assert comp.dim_out == 4
    # at the maximally mixed input H(B) − H(E) is the closed-form value
    h_e = von_neumann_entropy(apply(comp, np.eye(2) / 2))
    assert abs(1 - h_e - depolarizing_q1(p)) < 1e-12


def test_transfer_identity_and_unitary():
    assert np.allclose(transfer_matrix(identity_channel(2)), np.eye(4))
    u = random_unitary(3, np.random.default_rng(5))
    assert np.allclose(transfer_matrix(channel_from_kraus([u])), np.kron(u, u.conj()), atol=1e-13)


def test_compose_examples():
    d = depolarizing(0.3)
    assert np.allclose(choi_matrix(compose(identity_channel(2), d)), choi_matrix(d), atol=1e-12)
    p = q = 0.1
    pq = compose(depolarizing(p), depolarizing(q))
    assert np.allclose(choi_matrix(pq), choi_matrix(depolarizing(p + q - 4 * p * q / 3)), atol=1e-12)
    r = compose(completely_depolarizing(2), amplitude_damping(0.4))
    assert np.allclose(choi_matrix(r), np.eye(4) / 2, atol=1e-12)


def test_compose_dimension_mismatch():
    with pytest.raises(ShapeMismatch):
        compose(identity_channel(3), identity_channel(2))


def test_tensor_examples():
    assert np.allclose(choi_matrix(tensor(identity_channel(2), identity_channel(2))),
                       choi_matrix(identity_channel(4)))
    rng = np.random.default_rng(6)
    d = depolarizing(0.2)
    rho, sigma = random_density(2, rng), random_density(2, rng)
    out = apply(tensor(d, d), np.kron(rho, sigma))
    assert np.allclose(out, np.kron(apply(d, rho), apply(d, sigma)), atol=1e-12)


@given(seeds)
def test_tensor_choi_matches_kraus(seed):
    rng = np.random.default_rng(seed)
    a, b = random_channel(2, 3, 2, rng), random_channel(3, 2, 2, rng)
    jt = tensor_choi(ChoiMatrix(2, 3, choi_matrix(a)), ChoiMatrix(3, 2, choi_matrix(b)))
    assert np.allclose(jt.matrix, choi_matrix(tensor(a, b)), atol=1e-12)


def test_partial_trace_examples():
    assert np.allclose(partial_trace(np.eye(4), [2, 2], keep=0), 2 * np.eye(2))
    omega = max_entangled(2)  # unnormalized, so this is twice the Bell projector
    assert np.allclose(partial_trace(np.outer(omega, omega.conj()), [2, 2], keep=0), np.eye(2))
