# -*- coding: utf-8 -*-

"""\
Synthetic benchmark tensors
"""

import numpy as np

from ..tensor.core import DenseTensor3
from ..tensor.decomp import CPFactors, cp_reconstruct, positive_ints


def synth_tensor(dims):
    """Tensor with entries ``1, 2, ..., I*J*K`` in column-major order

    The first index varies fastest, then the second, then the third.

    Args:
        dims (tuple): Dimensions (I, J, K)
    """
    idim, jdim, kdim = positive_ints(dims, "Tensor dimensions")
    size = idim * jdim * kdim
    return DenseTensor3.from_vec(
        np.arange(1, size + 1, dtype=np.float64), (idim, jdim, kdim)
    )


def synth_imbalanced_tensor(dims, seed=0):
    """Non-negative tensor with richer structure along the second mode

    Sum of ``J`` rank-one terms ``a_j o e_j o c_j`` where ``e_j`` is the
    ``j``-th unit vector, so each term touches a single second-mode index.
    ``a_j`` and ``c_j`` are drawn uniformly on [0, 1) from a seeded
    generator. The CP rank is at most ``J``.

    Args:
        dims (tuple): Dimensions (I, J, K)
        seed (int): Seed of the random generator
    """
    idim, jdim, kdim = positive_ints(dims, "Tensor dimensions")
    rng = np.random.default_rng(seed)
    a = rng.uniform(size=(idim, jdim))
    c = rng.uniform(size=(kdim, jdim))
    return cp_reconstruct(CPFactors([a, np.eye(jdim), c]))
