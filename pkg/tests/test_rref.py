import numpy as np

from spinperm import rref


def test_rref_identity():
    r, pivots = rref.rref(np.eye(3))
    assert np.allclose(r, np.eye(3))
    assert pivots == [0, 1, 2]


def test_rank_and_nullity():
    a = np.array([[1, 2, 3], [2, 4, 6], [1, 1, 1]], dtype=np.complex128)
    assert rref.matrix_rank(a) == 2
    assert rref.nullity(a) == 1


def test_nullspace_vectors_annihilated():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    ns = rref.nullspace(a)
    assert len(ns) == 2
    for v in ns:
        assert np.linalg.norm(a @ v) < 1e-10 * np.linalg.norm(v)


def test_leading_reduced_basis_canonical():
    v1 = np.array([0, 1, 2, 3], dtype=np.complex128)
    v2 = np.array([0, 2, 4, 7], dtype=np.complex128)
    basis = rref.leading_reduced_basis([v1, v2])
    leads = [rref.leading_index(v) for v in basis]
    assert leads == [1, 3]
    # lead coefficient one, mutually reduced
    assert basis[0][1] == 1 and abs(basis[0][3]) < 1e-12
    assert basis[1][3] == 1 and abs(basis[1][1]) < 1e-12
    # canonical form is basis-independent
    again = rref.leading_reduced_basis([v1 + v2, 2 * v2 - v1])
    for u, v in zip(basis, again):
        assert np.allclose(u, v)


def test_leading_reduced_basis_full_rank_input():
    assert rref.leading_reduced_basis([]) == []


def test_kernel_leading_basis_full_rank():
    assert rref.kernel_leading_basis(np.eye(4)) == []


def test_complex_rank_threshold():
    a = np.array([[1, 1j], [1j, -1]], dtype=np.complex128)  # rank 1
    assert rref.matrix_rank(a) == 1
