# -*- coding: utf-8 -*-
# pylint: disable=invalid-name

"""\
Paratuck2 and CP decompositions
-------------------------------

Factor containers, reconstruction of the approximate tensor, and the mapping
between Paratuck2 factors and the flat decision vector optimized by the
solvers.

Paratuck2 expresses every frontal slice as

.. math::

   X_k = A \\, D^A_k \\, H \\, D^B_k \\, B^T

with ``A`` (I x P), ``H`` (P x Q), ``B`` (J x Q) and diagonal ``D^A_k``
(P x P), ``D^B_k`` (Q x Q). Only the diagonals are stored: ``da`` has shape
(K, P) and ``db`` has shape (K, Q), row ``k`` holding the diagonal of slice
``k``.

The flat vector concatenates the blocks ``A, D^A, H, D^B, B`` in that order;
matrices are row-major and diagonal stacks are slice-major.
"""

from dataclasses import dataclass

import numpy as np

from .core import DenseTensor3, DimensionError


class LayoutError(ValueError):
    """A parameter vector does not match its layout"""


def positive_ints(values, what):
    """Validate a tuple of positive integers"""
    out = tuple(int(v) for v in values)
    if any(v < 1 for v in out):
        raise ValueError("%s must be positive integers, got %s" % (what, out))
    return out


@dataclass(frozen=True)
class ParamLayout:
    """Block sizes of the flattened Paratuck2 decision vector"""

    I: int
    P: int
    Q: int
    J: int
    K: int

    @classmethod
    def create(cls, dims, latent):
        """Layout for a tensor of ``dims`` (I, J, K) and ``latent`` (P, Q)"""
        I, J, K = positive_ints(dims, "Tensor dimensions")
        P, Q = positive_ints(latent, "Latent factors")
        return cls(I=I, P=P, Q=Q, J=J, K=K)

    @property
    def dims(self):
        """Tensor dimensions (I, J, K)"""
        return (self.I, self.J, self.K)

    @property
    def latent(self):
        """Latent factors (P, Q)"""
        return (self.P, self.Q)

    @property
    def shapes(self):
        """Block shapes in flattening order: A, D^A, H, D^B, B"""
        return (
            (self.I, self.P),
            (self.K, self.P),
            (self.P, self.Q),
            (self.K, self.Q),
            (self.J, self.Q),
        )

    @property
    def offsets(self):
        """Start offset of each block followed by the total size"""
        sizes = [r * c for r, c in self.shapes]
        return tuple(int(v) for v in np.concatenate(([0], np.cumsum(sizes))))

    @property
    def size(self):
        """Total length I*P + P*K + P*Q + Q*K + J*Q"""
        return self.offsets[-1]


@dataclass(frozen=True)
class Paratuck2Factors:
    """The five Paratuck2 factor blocks"""

    a: np.ndarray
    da: np.ndarray
    h: np.ndarray
    db: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        I, P = self.a.shape
        Q = self.h.shape[1]
        K = self.da.shape[0]
        expected = ((P, Q), (K, P), (K, Q), (self.b.shape[0], Q))
        actual = (self.h.shape, self.da.shape, self.db.shape, self.b.shape)
        if expected != actual:
            raise DimensionError(
                "Inconsistent Paratuck2 factor shapes: A %s, D^A %s, H %s, "
                "D^B %s, B %s"
                % (
                    self.a.shape,
                    self.da.shape,
                    self.h.shape,
                    self.db.shape,
                    self.b.shape,
                )
            )

    @property
    def latent(self):
        """Latent factors (P, Q)"""
        return self.h.shape

    @property
    def layout(self):
        """The :class:`ParamLayout` matching these factors"""
        return ParamLayout(
            I=self.a.shape[0],
            P=self.h.shape[0],
            Q=self.h.shape[1],
            J=self.b.shape[0],
            K=self.da.shape[0],
        )

    def blocks(self):
        """Factor blocks in flattening order"""
        return (self.a, self.da, self.h, self.db, self.b)

    def replace(self, **kwargs):
        """Return a copy with some of the blocks replaced"""
        data = dict(a=self.a, da=self.da, h=self.h, db=self.db, b=self.b)
        data.update(kwargs)
        return self.__class__(**data)


@dataclass(frozen=True)
class ParamVector:
    """Flattened decision vector with the layout needed to unflatten it"""

    data: np.ndarray
    layout: ParamLayout

    def __post_init__(self):
        if self.data.ndim != 1 or self.data.size != self.layout.size:
            raise LayoutError(
                "Parameter vector of length %d does not match layout size %d"
                % (self.data.size, self.layout.size)
            )


class CPFactors:
    """Rank-R CP factors: a list of N matrices of shape (I_n, R)"""

    def __init__(self, factors):
        """
        Args:
            factors (list): Factor matrices sharing the column count R
        """
        mats = [np.atleast_2d(np.asarray(f, dtype=np.float64)) for f in factors]
        if not mats:
            raise ValueError("CP factors need at least one matrix")
        ranks = {m.shape[1] for m in mats}
        if len(ranks) != 1:
            raise DimensionError(
                "CP factor matrices must share a column count, got %s"
                % sorted(ranks)
            )
        self.factors = mats
        self.rank = mats[0].shape[1]

    @classmethod
    def random(cls, dims, rank, seed=0):
        """Factors drawn uniformly on [0, 1) from a seeded generator"""
        rng = np.random.default_rng(seed)
        return cls([rng.uniform(size=(int(d), int(rank))) for d in dims])

    @property
    def dims(self):
        """Dimensions of the represented tensor"""
        return tuple(m.shape[0] for m in self.factors)

    def __getitem__(self, index):
        return self.factors[index]

    def __len__(self):
        return len(self.factors)

    def __repr__(self):
        return "<CPFactors of shape %s and rank %d>" % (self.dims, self.rank)


def init_factors(dims, latent, seed):
    """Seeded Paratuck2 initialization.

    ``A``, ``H`` and ``B`` are drawn i.i.d. uniform on [0, 1) from
    ``numpy.random.default_rng(seed)`` (in that order); every diagonal entry
    of ``D^A`` and ``D^B`` is one.

    Args:
        dims (tuple): Tensor dimensions (I, J, K)
        latent (tuple): Latent factors (P, Q)
        seed (int): Seed of the random generator

    Raises:
        ValueError: If a dimension or latent factor is not positive
    """
    layout = ParamLayout.create(dims, latent)
    rng = np.random.default_rng(seed)
    a = rng.uniform(size=(layout.I, layout.P))
    h = rng.uniform(size=(layout.P, layout.Q))
    b = rng.uniform(size=(layout.J, layout.Q))
    return Paratuck2Factors(
        a=a,
        da=np.ones((layout.K, layout.P)),
        h=h,
        db=np.ones((layout.K, layout.Q)),
        b=b,
    )


def paratuck2_slices(a, da, h, db, b):
    """Stack of reconstructed slices with shape (..., K, I, J)

    Slice ``k`` equals ``A diag(da[k]) H diag(db[k]) B^T``. Leading axes
    shared by all five blocks are batch axes.
    """
    left = a[..., None, :, :] * da[..., :, None, :]
    right = db[..., :, :, None] * np.swapaxes(b, -1, -2)[..., None, :, :]
    return left @ h[..., None, :, :] @ right


def paratuck2_reconstruct(f):
    """Reconstruct the tensor represented by Paratuck2 factors"""
    slices = paratuck2_slices(f.a, f.da, f.h, f.db, f.b)
    return DenseTensor3(np.moveaxis(slices, 0, -1))


def cp_reconstruct(f):
    """Reconstruct ``sum_r a_r o b_r o c_r`` from three CP factors

    Raises:
        NotImplementedError: If the number of factor matrices is not three
    """
    if len(f) != 3:
        raise NotImplementedError(
            "CP reconstruction supports 3-way tensors only, got %d factors"
            % len(f)
        )
    a, b, c = f.factors
    return DenseTensor3(np.einsum('ir,jr,kr->ijk', a, b, c))


def flatten(f):
    """Concatenate the factor blocks into a :class:`ParamVector`"""
    data = np.concatenate([np.ravel(blk) for blk in f.blocks()])
    return ParamVector(data=data, layout=f.layout)


def split_blocks(vec, layout):
    """Views of the five factor blocks inside a raw vector

    Raises:
        LayoutError: If ``vec`` does not have ``layout.size`` entries
    """
    vec = np.asarray(vec, dtype=np.float64)
    if vec.ndim != 1 or vec.size != layout.size:
        raise LayoutError(
            "Parameter vector of length %d does not match layout size %d"
            % (vec.size, layout.size)
        )
    offs = layout.offsets
    return tuple(
        vec[offs[i] : offs[i + 1]].reshape(shape)
        for i, shape in enumerate(layout.shapes)
    )


def split_batch(points, layout):
    """Factor blocks of the rows of ``points``, each with a leading batch axis

    Raises:
        LayoutError: If ``points`` is not (m, ``layout.size``)
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != layout.size:
        raise LayoutError(
            "Parameter batch of shape %s does not match layout size %d"
            % (points.shape, layout.size)
        )
    offs = layout.offsets
    nrows = points.shape[0]
    return tuple(
        points[:, offs[i] : offs[i + 1]].reshape((nrows,) + shape)
        for i, shape in enumerate(layout.shapes)
    )


def unflatten(x):
    """Inverse of :func:`flatten`

    Raises:
        LayoutError: On length mismatch
    """
    a, da, h, db, b = (
        np.array(blk) for blk in split_blocks(x.data, x.layout)
    )
    return Paratuck2Factors(a=a, da=da, h=h, db=db, b=b)


def objective(target, x):
    """Residual norm ``||target - reconstruct(unflatten(x))||``

    Raises:
        LayoutError: If the layout of ``x`` does not match ``target``
    """
    if tuple(x.layout.dims) != tuple(target.dims):
        raise LayoutError(
            "Layout dimensions %s do not match tensor dimensions %s"
            % (x.layout.dims, target.dims)
        )
    return Paratuck2Objective(target, x.layout)(x.data)


class Paratuck2Objective:
    """Objective ``f(x) = ||X - X_hat(x)||`` over raw parameter vectors

    Closes over the target tensor and the parameter layout. Every evaluated
    point, single or batched, is counted in :attr:`n_evals`. A point gives
    the same value whether it is evaluated alone or inside a batch.
    """

    #: Upper bound on reconstructed entries held in memory per batch chunk
    max_batch_entries = 1 << 22

    def __init__(self, target, layout):
        """
        Args:
            target (DenseTensor3): Tensor being decomposed
            layout (ParamLayout): Layout of the decision vector
        """
        if tuple(layout.dims) != tuple(target.dims):
            raise LayoutError(
                "Layout dimensions %s do not match tensor dimensions %s"
                % (layout.dims, target.dims)
            )
        self.target = target
        self.layout = layout
        #: Slices of the target with shape (K, I, J)
        self._slices = np.ascontiguousarray(np.moveaxis(target.array, -1, 0))
        #: Number of objective evaluations so far
        self.n_evals = 0

    def residual(self, vec):
        """Residual slices ``X_k - X_hat_k`` with shape (K, I, J)"""
        return self._slices - paratuck2_slices(*split_blocks(vec, self.layout))

    def _norms(self, points):
        res = self._slices - paratuck2_slices(*split_batch(points, self.layout))
        res = res.reshape(points.shape[0], -1)
        return np.sqrt(np.sum(res * res, axis=1))

    def evaluate_batch(self, points):
        """Objective values at each row of ``points`` (m x size)"""
        points = np.asarray(points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != self.layout.size:
            raise LayoutError(
                "Parameter batch of shape %s does not match layout size %d"
                % (points.shape, self.layout.size)
            )
        nrows = points.shape[0]
        out = np.empty(nrows)
        chunk = max(1, self.max_batch_entries // self._slices.size)
        for start in range(0, nrows, chunk):
            stop = min(start + chunk, nrows)
            out[start:stop] = self._norms(points[start:stop])
        self.n_evals += nrows
        return out

    def __call__(self, vec):
        vec = np.asarray(vec, dtype=np.float64)
        split_blocks(vec, self.layout)
        self.n_evals += 1
        return float(self._norms(vec[None, :])[0])
