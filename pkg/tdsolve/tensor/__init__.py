# -*- coding: utf-8 -*-

"""
Dense 3-way tensors, multilinear kernels and the Paratuck2/CP decompositions.

.. currentmodule:: tdsolve.tensor
.. autosummary::
   :nosignatures:

   ~core.DenseTensor3
   ~decomp.Paratuck2Factors
   ~decomp.CPFactors
   ~decomp.ParamVector
"""

from .core import (
    DenseTensor3,
    DimensionError,
    frontal_slice,
    khatri_rao,
    kronecker,
    norm,
    outer,
    unfold,
    unfold_wide,
    vec_tensor,
)
from .decomp import (
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
    unflatten,
)
