# -*- coding: utf-8 -*-

"""
``tdsolve.config`` configures the behavior of the library (solver defaults,
benchmark defaults, logging) using YAML based configuration files.

.. currentmodule:: tdsolve.config
.. autosummary::
   :nosignatures:

   ~config.get_config
   ~config.reload_config
   ~config.reset_default_config
"""

# pylint: disable=unused-import
from .config import TDConfig, get_config, reload_config, reset_default_config
