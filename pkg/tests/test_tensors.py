import numpy as np
import pytest

from entsym.tensors import (
    Tolerance,
    cap,
    cup,
    dagger,
    hermitian_eigenvalues,
    is_psd,
    partial_trace,
    swap,
    tensor,
    trace,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def kron_oracle(a, b):
    """Index-loop Kronecker product, independent of np.kron."""
    out = np.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            for k in range(b.shape[0]):
                for l in range(b.shape[1]):
                    out[i * b.shape[0] + k, j * b.shape[1] + l] = a[i, j] * b[k, l]
    return out


def test_tensor_identity_and_unit():
    assert np.array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(tensor(np.diag([1.0, 2.0]), np.array([[1.0]])), np.diag([1.0, 2.0]))


def test_tensor_against_index_loop_oracle():
    assert np.abs(tensor(X, Z) - kron_oracle(X, Z)).max() == 0.0


def test_dagger():
    assert np.array_equal(dagger(np.array([[1j]])), np.array([[-1j]]))
    rng = np.random.default_rng(0)
    m = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    oracle = np.array([[np.conj(m[i, j]) for i in range(3)] for j in range(2)])
    assert np.abs(dagger(m) - oracle).max() == 0.0
    assert np.array_equal(dagger(dagger(m)), m)


def test_dagger_of_unitary():
    rng = np.random.default_rng(1)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    assert np.abs(dagger(q) @ q - np.eye(4)).max() < 1e-12


def test_cup_cap_basics():
    assert np.array_equal(cup(1), np.array([[1.0]]))
    assert complex((cap(2) @ cup(2))[0, 0]) == 2.0
    assert np.array_equal(dagger(cup(5)), cap(5))


@pytest.mark.parametrize("d", range(1, 7))
def test_snake_equations_exact(d):
    left = tensor(cap(d), np.eye(d)) @ tensor(np.eye(d), cup(d))
    right = tensor(np.eye(d), cap(d)) @ tensor(cup(d), np.eye(d))
    assert np.abs(left - np.eye(d)).max() == 0.0
    assert np.abs(right - np.eye(d)).max() == 0.0


def test_swap_basics():
    assert np.array_equal(swap(1, 3), np.eye(3))
    e0, e1 = np.eye(2)[:, [0]], np.eye(2)[:, [1]]
    assert np.array_equal(swap(2, 2) @ tensor(e0, e1), tensor(e1, e0))
    assert np.array_equal(swap(2, 3) @ swap(3, 2), np.eye(6))


@pytest.mark.parametrize("d", [2, 3])
def test_untangling_identities(d):
    s = swap(d, d)
    assert np.abs(s @ cup(d) - cup(d)).max() == 0.0
    assert np.abs(cap(d) @ s - cap(d)).max() == 0.0
    assert np.abs(s @ s - np.eye(d * d)).max() == 0.0


def test_swap_naturality():
    rng = np.random.default_rng(2)
    for d1, d2 in [(2, 2), (2, 3), (3, 4), (4, 4)]:
        f = rng.normal(size=(d1, d1)) + 1j * rng.normal(size=(d1, d1))
        g = rng.normal(size=(d2, d2)) + 1j * rng.normal(size=(d2, d2))
        lhs = tensor(f, g) @ swap(d2, d1)
        rhs = swap(d2, d1) @ tensor(g, f)
        assert np.abs(lhs - rhs).max() < 1e-12


def test_trace():
    assert trace(np.eye(4)) == 4.0
    with pytest.raises(ValueError):
        trace(np.ones((2, 3)))
    rng = np.random.default_rng(3)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert abs(trace(tensor(a, b)) - trace(a) * trace(b)) < 1e-12


def partial_trace_oracle(m, d1, d2, which):
    if which == 2:
        out = np.zeros((d1, d1), dtype=complex)
        for i in range(d1):
            for k in range(d1):
                out[i, k] = sum(m[i * d2 + j, k * d2 + j] for j in range(d2))
    else:
        out = np.zeros((d2, d2), dtype=complex)
        for j in range(d2):
            for l in range(d2):
                out[j, l] = sum(m[i * d2 + j, i * d2 + l] for i in range(d1))
    return out


def test_partial_trace():
    m = cup(2) @ cap(2)
    got = partial_trace(m, (2, 2), 2)
    assert np.abs(got - np.eye(2)).max() == 0.0
    rng = np.random.default_rng(4)
    big = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    for which in (1, 2):
        assert np.abs(partial_trace(big, (2, 3), which) - partial_trace_oracle(big, 2, 3, which)).max() < 1e-13


def test_is_psd():
    ok, w = is_psd(np.eye(3))
    assert ok and w >= -1e-15
    ok, w = is_psd(np.diag([1.0, -1.0]))
    assert not ok and abs(w - (-1.0)) < 1e-12
    rng = np.random.default_rng(5)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    ok, w = is_psd(m.conj().T @ m)
    assert ok
    ok, _ = is_psd(m + m.conj().T + 10j * np.eye(4))  # not Hermitian
    assert not ok


def test_eigensolver_moment_identities():
    rng = np.random.default_rng(6)
    for n in (2, 5, 9, 17):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = (m + m.conj().T) / 2
        eigs = hermitian_eigenvalues(h)
        assert abs(eigs.sum() - np.trace(h).real) < 1e-9
        assert abs((eigs**2).sum() - np.trace(h @ h).real) < 1e-9


def test_eigensolver_matches_lapack():
    rng = np.random.default_rng(7)
    m = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    h = (m + m.conj().T) / 2
    assert np.abs(hermitian_eigenvalues(h) - np.linalg.eigvalsh(h)).max() < 1e-10


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(epsilon=-1.0)
    with pytest.raises(ValueError):
        Tolerance(norm="frobenius")
