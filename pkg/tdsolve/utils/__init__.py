# -*- coding: utf-8 -*-

"""
Low-level utilities used by other packages within tdsolve. Modules in this
package depend only on external libraries or other modules within utils.

.. currentmodule:: tdsolve.utils
.. autosummary::
   :nosignatures:

   ~struct.Struct
   osutils
"""

from .struct import Struct
