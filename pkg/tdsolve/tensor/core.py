# -*- coding: utf-8 -*-
# pylint: disable=invalid-name

"""\
Dense 3-way tensors and multilinear algebra kernels
---------------------------------------------------

Implements :class:`DenseTensor3`, the object being decomposed, together with
the products and unfoldings used by the decompositions and the ALS updates.
Matrices and vectors are plain ``float64`` numpy arrays.

Entries are linearized with the first index varying fastest, then the
second, then the third (column-major order). With this convention
``vec_tensor(t)`` equals the column-by-column vectorization of
``unfold_wide(t)``.

.. code-block:: python

   t = DenseTensor3(np.ones((2, 2, 2)))
   norm(t)                 # sqrt(8)
   frontal_slice(t, 0)     # 2x2 matrix of ones
   unfold_wide(t)          # 2x4 matrix [X_0 X_1]
"""

import numpy as np


class DimensionError(ValueError):
    """Operands have incompatible shapes"""


class DenseTensor3:
    """Real-valued 3-way array of shape ``(I, J, K)``.

    The data is copied on construction, validated for finiteness and stored
    read-only, so instances can be shared freely.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        """
        Args:
            data (array_like): Nested sequence or array of shape (I, J, K)

        Raises:
            DimensionError: If the array is not 3-way or has an empty mode
            ValueError: If any entry is NaN or infinite
        """
        arr = np.array(data, dtype=np.float64, order='F')
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise DimensionError(
                "Expected a non-empty 3-way array, got shape %s"
                % (arr.shape,)
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("Tensor entries must be finite")
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def from_vec(cls, vec, dims):
        """Create a tensor from its vectorization (inverse of vec_tensor)

        Args:
            vec (array_like): Entries in column-major order, length I*J*K
            dims (tuple): The dimensions (I, J, K)
        """
        vec = np.asarray(vec, dtype=np.float64)
        dims = tuple(int(d) for d in dims)
        if vec.ndim != 1 or vec.size != int(np.prod(dims)):
            raise DimensionError(
                "Cannot reshape %d entries into %s" % (vec.size, dims)
            )
        return cls(np.reshape(vec, dims, order='F'))

    @property
    def dims(self):
        """Dimensions (I, J, K)"""
        return self._data.shape

    @property
    def shape(self):
        """Alias for :attr:`dims`"""
        return self._data.shape

    @property
    def array(self):
        """Read-only view of the underlying (I, J, K) array"""
        return self._data

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data
        return self._data.astype(dtype)

    def __repr__(self):
        return "<DenseTensor3 of shape %s>" % (self.dims,)


def norm(t):
    """Frobenius norm: square root of the sum of squared entries"""
    return float(np.sqrt(np.sum(np.square(t.array))))


def frontal_slice(t, k):
    """Return the I x J matrix of entries with third index ``k``

    Args:
        t (DenseTensor3): Tensor
        k (int): Zero-based slice index, ``0 <= k < K``

    Raises:
        IndexError: If ``k`` is out of range
    """
    K = t.dims[2]
    if not 0 <= k < K:
        raise IndexError("Slice %d out of range for K=%d" % (k, K))
    return np.array(t.array[:, :, k])


def unfold_wide(t):
    """Horizontal concatenation ``[X_0 X_1 ... X_{K-1}]`` of frontal slices"""
    I, J, K = t.dims
    return np.reshape(t.array, (I, J * K), order='F')


def unfold(t, mode):
    """Mode-n matricization with column-major ordering of remaining indices

    Mode 0 coincides with :func:`unfold_wide`.

    Args:
        t (DenseTensor3): Tensor
        mode (int): One of 0, 1, 2
    """
    if mode not in (0, 1, 2):
        raise IndexError("Invalid mode %d for a 3-way tensor" % mode)
    arr = np.moveaxis(t.array, mode, 0)
    return np.reshape(arr, (arr.shape[0], -1), order='F')


def vec_tensor(t):
    """Vectorization in the module-wide (column-major) linearization order"""
    return np.ravel(t.array, order='F').copy()


def from_vec(vec, dims):
    """Inverse reshape of :func:`vec_tensor`"""
    return DenseTensor3.from_vec(vec, dims)


def outer(u, v):
    """Outer product ``u o v`` with entries ``u[i] * v[j]``"""
    return np.outer(np.asarray(u, dtype=np.float64), np.asarray(v, np.float64))


def kronecker(a, b):
    """Kronecker product; block (i, j) of the result is ``a[i, j] * b``"""
    return np.kron(
        np.atleast_2d(np.asarray(a, dtype=np.float64)),
        np.atleast_2d(np.asarray(b, dtype=np.float64)),
    )


def khatri_rao(a, b):
    """Column-wise Kronecker product of ``a`` (I x R) and ``b`` (J x R)

    Column ``r`` of the (I*J x R) result is ``kron(a[:, r], b[:, r])``.

    Raises:
        DimensionError: If the column counts differ
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape[1] != b.shape[1]:
        raise DimensionError(
            "Khatri-Rao product needs equal column counts: %d != %d"
            % (a.shape[1], b.shape[1])
        )
    I, R = a.shape
    J = b.shape[0]
    return (a[:, None, :] * b[None, :, :]).reshape(I * J, R)
