# -*- coding: utf-8 -*-

"""\
tdsolve Configuration
~~~~~~~~~~~~~~~~~~~~~

The :mod:`~tdsolve.config.config` module loads user configuration from YAML
files and provides a central location to configure the solver defaults, the
benchmark harness and logging. The configuration is stored in a
:class:`~tdsolve.config.config.TDConfig` mapping that user scripts may modify
at runtime. Access the configuration through :func:`get_config`, which returns
a fully populated instance on first use. This module also sets up logging (to
the console and, optionally, to a log file).
"""

import copy
import logging
import os
import os.path as pth
import sys
from logging.config import dictConfig

from ..utils import osutils
from ..utils.struct import Struct
from ..version import version

_rcfile_default = "tdsolve.yaml"
_rcsys_var = "TDSOLVERC_SYSTEM"
_rcfile_var = "TDSOLVERC"

_config_banner = """\
# -*- mode: yaml -*-
#
# tdsolve %(version)s
#
# Auto-generated on: %(timestamp)s
#

"""


def get_tdsolve_root():
    """Return the per-user directory for tdsolve files (``~/.tdsolve``)"""
    return osutils.abspath("~/.tdsolve/")


class TDConfig(Struct):  # pylint: disable=too-many-ancestors
    """tdsolve Configuration Object

    A (key, value) dictionary containing all the configuration data parsed
    from the configuration files. Obtain an instance through
    :func:`get_config` instead of instantiating this class directly.
    """

    def write_config(self, fh=sys.stdout):
        """Write configuration to file or standard output.

        Args:
            fh (handle): An open file handle
        """
        fh.write(
            _config_banner
            % {
                'timestamp': osutils.timestamp(),
                'version': version,
            }
        )
        self.to_yaml(fh)
        fh.write("\n\n")


def search_cfg_files():
    """Search locations and return all possible configuration files.

    The following locations are searched, in order:

      - The path pointed by :envvar:`TDSOLVERC_SYSTEM`

      - The user's file :file:`~/.tdsolve/tdsolve.yaml`

      - The path pointed by :envvar:`TDSOLVERC`, if defined.

      - The file :file:`tdsolve.yaml` in the current working directory

    Returns:
        List of configuration files available
    """
    candidates = [
        os.environ.get(_rcsys_var, None),
        pth.join(get_tdsolve_root(), _rcfile_default),
        os.environ.get(_rcfile_var, None),
        pth.join(os.getcwd(), _rcfile_default),
    ]
    rcfiles = []
    for rcname in candidates:
        if rcname and pth.exists(rcname) and rcname not in rcfiles:
            rcfiles.append(rcname)
    return rcfiles


def configure_logging(log_cfg=None):
    """Configure python logging.

    If ``log_cfg`` is None, then the basic configuration of python logging
    module is used.

    Args:
       log_cfg: The ``tdsolve.logging`` section of :class:`TDConfig`
    """

    def get_default_log_file():
        """Set up default logging file if none provided"""
        logs_dir = osutils.ensure_directory(
            pth.join(get_tdsolve_root(), "logs")
        )
        return pth.join(logs_dir, "tdsolve.log")

    if log_cfg is None:
        logging.basicConfig()
        return

    log_to_file = log_cfg.log_to_file
    lggr_cfg = copy.deepcopy(log_cfg.pylogger_options)
    log_filename = None
    if log_to_file:
        log_filename = log_cfg.log_file or get_default_log_file()
        lggr_cfg.handlers.log_file.filename = log_filename
        if "log_file" not in lggr_cfg.loggers.tdsolve.handlers:
            lggr_cfg.loggers.tdsolve.handlers.append("log_file")
    else:
        # RotatingFileHandler cannot be built without a filename
        lggr_cfg.handlers.pop("log_file", None)
        for lname in lggr_cfg.loggers:
            hlist = lggr_cfg.loggers[lname].handlers
            lggr_cfg.loggers[lname].handlers = [
                h for h in hlist if h != "log_file"
            ]
    dictConfig(lggr_cfg)
    if log_to_file:
        logging.getLogger(__name__).debug(
            "Logging enabled to file: %s", log_filename
        )


def get_default_config():
    """Return a fresh instance of the default configuration

    This function does not read the ``tdsolve.yaml`` files on the system, and
    returns the configuration shipped with the package.

    Returns:
        TDConfig: The default configuration
    """
    cdir = pth.dirname(__file__)
    default_yaml = pth.join(cdir, "default_config.yaml")
    return TDConfig.load_yaml(default_yaml)


def _cfg_manager():
    """Configuration manager

    Creates an interface to initalize configuration and return the
    configuration instance that can be updated by the user.
    """
    config_files = [None]
    cfg = [None]

    def _init_config(base_cfg=None, init_logging=True):
        """Initialize configuration

        Loads :func:`get_default_config` and then merges all the configuration
        files available on the system (see :func:`search_cfg_files`).

        Args:
            base_cfg (TDConfig): A base configuration object that is updated
            init_logging (bool): If True, initializes logging

        Returns:
            TDConfig: Configuration object
        """
        cfg = base_cfg or get_default_config()

        rcfiles = search_cfg_files()
        for rcname in rcfiles:
            cfg.merge(TDConfig.load_yaml(rcname))

        if init_logging:
            configure_logging(cfg.tdsolve.logging)
            logger = logging.getLogger(__name__)
            msg = (
                "Loaded configuration from files = %s" % rcfiles
                if rcfiles
                else "No configuration found; using defaults."
            )
            logger.debug(msg)

        config_files[0] = rcfiles
        return cfg

    def _get_config(base_cfg=None, init_logging=False):
        """Get the configuration object

        On the first call, initializes the configuration object by parsing all
        available configuration files. Successive invocations return the same
        object that can be mutated by the user.

        Args:
            base_cfg (TDConfig): A base configuration object that is updated
            init_logging (bool): If True, initializes logging

        Returns:
            TDConfig: The configuration dictionary
        """
        if cfg[0] is None:
            cfg[0] = _init_config(base_cfg, init_logging)
        return cfg[0]

    def _reset_default_config():
        """Reset to library defaults without reading configuration files

        Returns:
            TDConfig: The configuration dictionary
        """
        cfg[0] = get_default_config()
        return cfg[0]

    def _reload_config(base_cfg=None):
        """Force reloading of all the available configuration files

        Args:
            base_cfg: A TDConfig object to use instead of default

        Returns:
            TDConfig: The configuration dictionary
        """
        cfg[0] = _init_config(base_cfg)
        return cfg[0]

    def _rcfiles_loaded():
        """Return a list of the configuration files that were loaded"""
        return config_files[0]

    return (_get_config, _reload_config, _reset_default_config, _rcfiles_loaded)


(
    get_config,
    reload_config,
    reset_default_config,
    rcfiles_loaded,
) = _cfg_manager()
