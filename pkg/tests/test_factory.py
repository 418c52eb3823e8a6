import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapline.errors import DimensionError, ParameterError
from gapline.factory import (
    BandedHermitian,
    SeededRng,
    _householder,
    _round_robin,
    assemble_dense,
    band_reduce,
    generate,
    jacobi_eigh,
    random_orthogonal,
)


def _uniform(n, a=0.3, b=1.0):
    return np.concatenate([np.linspace(-b, -a, n // 2), np.linspace(a, b, n - n // 2)])


def _outside_band(M, m):
    idx = np.arange(M.shape[0])
    return M[np.abs(np.subtract.outer(idx, idx)) > m]


def test_random_orthogonal_trivial():
    assert random_orthogonal(1, 3).tolist() == [[1.0]]
    with pytest.raises(DimensionError):
        random_orthogonal(0, 3)


def test_random_orthogonal_orthogonality():
    Q = random_orthogonal(50, SeededRng(7))
    assert np.max(np.abs(Q.T @ Q - np.eye(50))) <= 5e-14


def test_random_orthogonal_deterministic():
    assert np.array_equal(random_orthogonal(30, 11), random_orthogonal(30, 11))
    assert not np.array_equal(random_orthogonal(30, 11), random_orthogonal(30, 12))


def test_random_orthogonal_complex_is_unitary():
    Q = random_orthogonal(20, 5, complex_=True)
    assert np.iscomplexobj(Q)
    assert np.max(np.abs(Q.conj().T @ Q - np.eye(20))) <= 1e-13


def test_unknown_generator():
    with pytest.raises(ParameterError):
        SeededRng(1, "MT19937").generator()


def test_assemble_dense_examples():
    assert np.array_equal(assemble_dense(np.eye(2), [-1, 2]), np.diag([-1.0, 2.0]))
    c = s = math.sqrt(0.5)
    A = assemble_dense(np.array([[c, -s], [s, c]]), [-1, 1])
    assert np.allclose(A, [[0, -1], [-1, 0]], atol=1e-15)
    Q = random_orthogonal(6, 1)
    assert np.allclose(assemble_dense(Q, np.ones(6)), np.eye(6), atol=1e-14)
    with pytest.raises(DimensionError):
        assemble_dense(np.eye(3), [1, 2])


def test_householder_maps_to_multiple_of_e1():
    x = np.array([3.0, 1.0, -2.0, 0.5])
    v, beta, alpha = _householder(x)
    y = x - beta * v * (v @ x)
    assert np.allclose(y[1:], 0, atol=1e-15)
    assert abs(alpha) == pytest.approx(np.linalg.norm(x))
    assert y[0] == pytest.approx(alpha)


def test_band_reduce_already_banded():
    T = np.diag(np.arange(5.0)) + np.diag(np.ones(4), 1) + np.diag(np.ones(4), -1)
    H = band_reduce(T, 1)
    assert np.array_equal(H.data, T)
    assert np.allclose(H.meta["reflector_basis"], np.eye(5))


def test_band_reduce_wide_band_is_identity():
    A = assemble_dense(random_orthogonal(5, 2), [1, 2, 3, 4, 5])
    H = band_reduce(A, 4)
    assert np.array_equal(H.data, A)
    assert np.array_equal(H.meta["reflector_basis"], np.eye(5))


def test_tridiagonal_invariants():
    A = assemble_dense(random_orthogonal(6, 4), [-3, -1, 0.5, 1, 2, 7])
    H = band_reduce(A, 1)
    assert np.all(_outside_band(H.data, 1) == 0)
    assert np.trace(H.data) == pytest.approx(np.trace(A), rel=1e-12)
    assert np.linalg.norm(H.data) == pytest.approx(np.linalg.norm(A), rel=1e-12)


def test_band_reduce_matches_prescribed_spectrum():
    lam = _uniform(200)
    H = generate(lam, 20, SeededRng(3))
    got, _ = jacobi_eigh(H.data)
    assert np.max(np.abs(got - np.sort(lam))) <= 1e-9


@pytest.mark.parametrize("n,m", [(10, 2), (50, 3), (40, 7), (60, 20), (33, 1), (21, 19)])
def test_partial_final_panel(n, m):
    lam = _uniform(n)
    H = generate(lam, m, 9)
    res = H.residuals()
    assert res["out_of_band"] == 0 and res["hermitian"] == 0
    assert res["eig_residual"] <= 1e-10 * np.abs(lam).max()
    assert res["orthogonality"] <= 1e-10
    assert H.bandwidth() <= m


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 40), st.integers(1, 8), st.integers(0, 2**32), st.booleans())
def test_generate_invariants(n, m, seed, complex_):
    rng = np.random.default_rng(seed)
    lam = rng.uniform(-1, 1, n)
    H = generate(lam, m, seed, complex_=complex_)
    assert isinstance(H, BandedHermitian)
    assert np.all(_outside_band(H.data, m) == 0)
    assert np.array_equal(H.data, H.data.conj().T)
    V, ev = H.provenance.basis, H.provenance.eigenvalues
    assert np.max(np.abs(H.data @ V - V * ev)) <= 1e-10 * np.abs(lam).max()
    assert np.max(np.abs(V.conj().T @ V - np.eye(n))) <= 1e-10
    assert np.array_equal(ev, np.sort(lam))
    oracle = np.linalg.eigvalsh(H.data)
    assert np.allclose(oracle, np.sort(lam), atol=1e-10)


def test_generate_is_bit_reproducible():
    lam = _uniform(80)
    one, two = generate(lam, 5, 17), generate(lam, 5, 17)
    assert np.array_equal(one.data, two.data)
    assert np.array_equal(one.provenance.basis, two.provenance.basis)
    assert one.meta == {"seed": 17, "algorithm": "PCG64"}


def test_generate_two_by_two():
    for seed in range(5):
        H = generate([-1, 1], 1, seed).data
        x, y = H[0, 0], H[0, 1]
        assert H[1, 1] == pytest.approx(-x, abs=1e-15)
        assert x * x + y * y == pytest.approx(1.0, rel=1e-14)


def test_generate_validation():
    with pytest.raises(DimensionError):
        generate([1.0], 1, 0)
    with pytest.raises(ParameterError):
        generate([1.0, 2.0], 0, 0)


def test_round_robin_covers_every_pair_once():
    for n in (2, 5, 8, 11):
        seen = set()
        for P, Q in _round_robin(n):
            idx = np.concatenate([P, Q])
            assert len(set(idx.tolist())) == idx.size  # disjoint within a round
            seen.update(zip(P.tolist(), Q.tolist()))
        assert seen == {(p, q) for p in range(n) for q in range(p + 1, n)}


def test_jacobi_trivial_cases():
    lam, V = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    assert lam.tolist() == [1.0, 2.0, 3.0]
    assert np.array_equal(np.abs(V), np.eye(3)[:, [1, 2, 0]])
    lam, V = jacobi_eigh(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(lam, [-1, 1])
    assert np.allclose(np.abs(V), math.sqrt(0.5))
    assert V[0, 0] * V[1, 0] < 0 < V[0, 1] * V[1, 1]


@pytest.mark.parametrize("complex_", [False, True])
def test_jacobi_against_numpy(complex_):
    rng = np.random.default_rng(4)
    A = rng.standard_normal((40, 40))
    if complex_:
        A = A + 1j * rng.standard_normal((40, 40))
    A = A + A.conj().T
    lam, V = jacobi_eigh(A)
    assert np.allclose(lam, np.linalg.eigvalsh(A), atol=1e-12)
    assert np.max(np.abs(A @ V - V * lam)) <= 1e-10 * np.abs(lam).max()
    assert np.max(np.abs(V.conj().T @ V - np.eye(40))) <= 1e-12
