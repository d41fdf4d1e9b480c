# -*- coding: utf-8 -*-

"""
tdsolve.tensor.decomp Tests
"""

import numpy as np
import pytest

from tdsolve.optim.derivatives import CountedObjective, fd_gradient
from tdsolve.tensor.core import DenseTensor3, DimensionError, norm
from tdsolve.tensor.decomp import (
    CPFactors,
    LayoutError,
    ParamLayout,
    ParamVector,
    Paratuck2Factors,
    Paratuck2Objective,
    cp_reconstruct,
    flatten,
    init_factors,
    objective,
    paratuck2_reconstruct,
    split_batch,
    split_blocks,
    unflatten,
)


def random_factors(rng, dims, latent):
    I, J, K = dims
    P, Q = latent
    return Paratuck2Factors(
        a=rng.normal(size=(I, P)),
        da=rng.normal(size=(K, P)),
        h=rng.normal(size=(P, Q)),
        db=rng.normal(size=(K, Q)),
        b=rng.normal(size=(J, Q)),
    )


def brute_paratuck2(f):
    I, P = f.a.shape
    J, Q = f.b.shape
    K = f.da.shape[0]
    out = np.zeros((I, J, K))
    for i in range(I):
        for j in range(J):
            for k in range(K):
                for p in range(P):
                    for q in range(Q):
                        out[i, j, k] += (
                            f.a[i, p]
                            * f.da[k, p]
                            * f.h[p, q]
                            * f.db[k, q]
                            * f.b[j, q]
                        )
    return out


def test_param_layout():
    """Block sizes and offsets"""
    layout = ParamLayout.create((5, 4, 3), (2, 3))
    assert layout.size == 5 * 2 + 3 * 2 + 2 * 3 + 3 * 3 + 4 * 3
    assert layout.offsets[:3] == (0, 10, 16)
    assert layout.dims == (5, 4, 3)
    assert layout.latent == (2, 3)
    with pytest.raises(ValueError):
        ParamLayout.create((5, 0, 3), (2, 3))
    with pytest.raises(ValueError):
        ParamLayout.create((5, 4, 3), (0, 3))


def test_factor_shapes():
    """Inconsistent blocks are rejected"""
    f = init_factors((4, 3, 2), (2, 3), seed=0)
    with pytest.raises(DimensionError):
        f.replace(h=np.ones((3, 3)))
    with pytest.raises(DimensionError):
        f.replace(db=np.ones((3, 3)))


def test_paratuck2_reconstruct_oracle():
    """Reconstruction matches an explicit summation"""
    rng = np.random.default_rng(11)
    for _ in range(100):
        dims = tuple(rng.integers(1, 5, size=3))
        latent = tuple(rng.integers(1, 5, size=2))
        f = random_factors(rng, dims, latent)
        recon = paratuck2_reconstruct(f)
        expected = brute_paratuck2(f)
        scale = max(1.0, np.abs(expected).max())
        np.testing.assert_allclose(recon.array, expected, atol=1e-12 * scale)


def test_paratuck2_identity_case():
    """Identity factors reproduce H"""
    h = np.arange(1.0, 7.0).reshape(2, 3)
    f = Paratuck2Factors(
        a=np.eye(2), da=np.ones((1, 2)), h=h, db=np.ones((1, 3)), b=np.eye(3)
    )
    np.testing.assert_array_equal(paratuck2_reconstruct(f).array[:, :, 0], h)


def test_paratuck2_zero_diagonal():
    """A zero diagonal slice yields a zero frontal slice"""
    rng = np.random.default_rng(5)
    f = random_factors(rng, (3, 4, 3), (2, 2))
    da = f.da.copy()
    da[1] = 0.0
    recon = paratuck2_reconstruct(f.replace(da=da))
    assert np.all(recon.array[:, :, 1] == 0.0)


def test_cp_reconstruct_oracle():
    """CP reconstruction matches an explicit summation"""
    rng = np.random.default_rng(7)
    for _ in range(100):
        dims = tuple(rng.integers(1, 5, size=3))
        rank = int(rng.integers(1, 5))
        f = CPFactors([rng.normal(size=(d, rank)) for d in dims])
        expected = np.zeros(dims)
        for r in range(rank):
            expected += np.multiply.outer(
                np.multiply.outer(f[0][:, r], f[1][:, r]), f[2][:, r]
            )
        scale = max(1.0, np.abs(expected).max())
        np.testing.assert_allclose(
            cp_reconstruct(f).array, expected, atol=1e-12 * scale
        )


def test_cp_factors():
    """Rank checks and the 3-way restriction"""
    with pytest.raises(DimensionError):
        CPFactors([np.ones((2, 2)), np.ones((3, 3))])
    assert cp_reconstruct(
        CPFactors([np.ones((2, 1)), np.ones((3, 1)), np.ones((4, 1))])
    ).dims == (2, 3, 4)
    with pytest.raises(NotImplementedError):
        cp_reconstruct(CPFactors([np.ones((2, 1))] * 4))
    f1 = CPFactors.random((2, 3, 4), 2, seed=9)
    f2 = CPFactors.random((2, 3, 4), 2, seed=9)
    assert f1.rank == 2 and f1.dims == (2, 3, 4)
    for m1, m2 in zip(f1.factors, f2.factors):
        np.testing.assert_array_equal(m1, m2)


def test_flatten_order():
    """Blocks are concatenated A, D^A, H, D^B, B, each row-major"""
    f = Paratuck2Factors(
        a=np.array([[1.0, 2.0]]),
        da=np.array([[3.0, 4.0]]),
        h=np.array([[5.0], [6.0]]),
        db=np.array([[7.0]]),
        b=np.array([[8.0]]),
    )
    vec = flatten(f)
    np.testing.assert_array_equal(vec.data, np.arange(1.0, 9.0))
    back = unflatten(vec)
    for b1, b2 in zip(back.blocks(), f.blocks()):
        np.testing.assert_array_equal(b1, b2)


def test_layout_mismatch():
    """Vectors with the wrong length are rejected"""
    layout = ParamLayout.create((3, 3, 3), (2, 2))
    with pytest.raises(LayoutError):
        ParamVector(data=np.ones(layout.size - 1), layout=layout)
    with pytest.raises(LayoutError):
        split_blocks(np.ones(layout.size + 1), layout)


def test_init_factors():
    """Seeded initialization"""
    f1 = init_factors((5, 4, 3), (2, 3), seed=4)
    f2 = init_factors((5, 4, 3), (2, 3), seed=4)
    f3 = init_factors((5, 4, 3), (2, 3), seed=5)
    for b1, b2 in zip(f1.blocks(), f2.blocks()):
        np.testing.assert_array_equal(b1, b2)
    assert not np.array_equal(f1.a, f3.a)
    assert np.all(f1.da == 1.0) and np.all(f1.db == 1.0)
    assert np.all((f1.a >= 0.0) & (f1.a < 1.0))
    with pytest.raises(ValueError):
        init_factors((5, 4, 3), (0, 3), seed=0)


def test_objective(exact_factors, exact_target):
    """Residual norm of the flattened factors"""
    x = flatten(exact_factors)
    assert objective(exact_target, x) == 0.0

    zero = ParamVector(data=np.zeros_like(x.data), layout=x.layout)
    assert objective(exact_target, zero) == pytest.approx(norm(exact_target))

    other = DenseTensor3(np.ones((4, 3, 5)))
    with pytest.raises(LayoutError):
        objective(other, x)


def test_objective_counts(exact_factors, exact_target):
    """The callable objective counts its evaluations"""
    fun = Paratuck2Objective(exact_target, exact_factors.layout)
    x = flatten(exact_factors).data
    fun(x)
    fun(x + 1.0)
    assert fun.n_evals == 2
    assert fun(x + 1.0) > 0.0


def test_paratuck2_cp_case():
    """Identity H with unit diagonals is a CP model with a ones third factor"""
    rng = np.random.default_rng(12)
    a = rng.normal(size=(5, 3))
    b = rng.normal(size=(4, 3))
    f = Paratuck2Factors(
        a=a, da=np.ones((2, 3)), h=np.eye(3), db=np.ones((2, 3)), b=b
    )
    expected = cp_reconstruct(CPFactors([a, b, np.ones((2, 3))]))
    np.testing.assert_allclose(
        paratuck2_reconstruct(f).array, expected.array, rtol=1e-12, atol=1e-12
    )


def test_paratuck2_linear_in_h():
    """Scaling H scales the reconstruction"""
    rng = np.random.default_rng(13)
    f = random_factors(rng, (4, 3, 3), (2, 3))
    base = paratuck2_reconstruct(f).array
    doubled = paratuck2_reconstruct(f.replace(h=2.0 * f.h)).array
    np.testing.assert_allclose(doubled, 2.0 * base, rtol=1e-14, atol=1e-14)


def test_flatten_order_slices():
    """Diagonal blocks are stored one slice after the other"""
    f = Paratuck2Factors(
        a=np.array([[1.0, 2.0]]),
        da=np.array([[3.0, 4.0], [5.0, 6.0]]),
        h=np.array([[7.0], [8.0]]),
        db=np.array([[9.0], [10.0]]),
        b=np.array([[11.0]]),
    )
    vec = flatten(f)
    np.testing.assert_array_equal(vec.data, np.arange(1.0, 12.0))
    assert vec.layout.dims == (1, 1, 2)
    _, da, _, db, _ = split_blocks(vec.data, vec.layout)
    np.testing.assert_array_equal(da[1], [5.0, 6.0])
    np.testing.assert_array_equal(db[:, 0], [9.0, 10.0])


def test_objective_batch(exact_factors, exact_target):
    """Batched evaluation agrees with one point at a time"""
    rng = np.random.default_rng(14)
    x = flatten(exact_factors).data
    points = x + 0.1 * rng.normal(size=(7, x.size))
    fun = Paratuck2Objective(exact_target, exact_factors.layout)
    values = fun.evaluate_batch(points)
    assert fun.n_evals == 7
    single = np.array([fun(row) for row in points])
    assert fun.n_evals == 14
    np.testing.assert_allclose(values, single, rtol=1e-14)

    chunked = Paratuck2Objective(exact_target, exact_factors.layout)
    chunked.max_batch_entries = 2 * exact_target.array.size
    np.testing.assert_allclose(chunked.evaluate_batch(points), values, rtol=1e-14)
    assert chunked.n_evals == 7

    with pytest.raises(LayoutError):
        fun.evaluate_batch(x)
    with pytest.raises(LayoutError):
        split_batch(points[:, 1:], exact_factors.layout)
    blocks = split_batch(points, exact_factors.layout)
    assert blocks[1].shape == (7,) + exact_factors.da.shape


def test_objective_gradient_batch(small_tensor):
    """Finite-difference gradients use the batched objective consistently"""
    x = flatten(init_factors(small_tensor.dims, (2, 2), seed=3)).data
    layout = ParamLayout.create(small_tensor.dims, (2, 2))
    fun = Paratuck2Objective(small_tensor, layout)
    batched = fd_gradient(fun, x, chunk=5)
    assert fun.n_evals == 4 * x.size
    sequential = fd_gradient(CountedObjective(fun), x)
    np.testing.assert_allclose(batched, sequential, rtol=1e-9, atol=1e-9)
