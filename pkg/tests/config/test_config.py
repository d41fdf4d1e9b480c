# -*- coding: utf-8 -*-

"""
tdsolve.config.config Tests
"""

import io
import os

from tdsolve.config import config
from tdsolve.config.config import configure_logging as real_configure_logging


def test_get_tdsolve_root(monkeypatch):
    """Per-user directory"""

    def mock_user_tilde(path):
        return path.replace("~", "/test_user")

    monkeypatch.setattr(os.path, "expanduser", mock_user_tilde)
    assert config.get_tdsolve_root() == os.path.normpath("/test_user/.tdsolve")


def test_default_config():
    """Shipped defaults"""
    cfg = config.get_default_config()
    assert isinstance(cfg, config.TDConfig)
    solvers = cfg.tdsolve.solvers
    assert solvers.max_iters == 1000
    assert solvers.rel_tol == 1.0e-6
    assert solvers.eta == 1.0e-4
    assert solvers.als.floor == 1.0e-12
    assert solvers.bfgs.curvature_guard == 1.0e-10
    assert cfg.tdsolve.bench.seeds == [0, 1, 2, 3, 4]
    assert cfg.tdsolve.bench.ordinate == "log10"


def test_search_cfg_files(monkeypatch, tmpdir):
    """Configuration files are found in search order"""
    sysfile = tmpdir.join("system.yaml")
    sysfile.write("tdsolve:\n  bench:\n    jobs: 2\n")
    userfile = tmpdir.join("user.yaml")
    userfile.write("tdsolve:\n  bench:\n    jobs: 3\n")
    monkeypatch.setenv("TDSOLVERC_SYSTEM", str(sysfile))
    monkeypatch.setenv("TDSOLVERC", str(userfile))
    monkeypatch.chdir(str(tmpdir))
    rcfiles = config.search_cfg_files()
    assert rcfiles[0] == str(sysfile)
    assert rcfiles[-1] == str(userfile)

    cfg = config.reload_config()
    assert cfg.tdsolve.bench.jobs == 3
    assert config.rcfiles_loaded() == rcfiles
    cfg = config.reset_default_config()
    assert cfg.tdsolve.bench.jobs == 1


def test_write_config():
    """Configuration dump with banner"""
    cfg = config.get_default_config()
    buf = io.StringIO()
    cfg.write_config(buf)
    out = buf.getvalue()
    assert out.startswith("# -*- mode: yaml -*-")
    assert "max_iters: 1000" in out


def test_configure_logging_no_file():
    """Disabling file logging leaves the configuration untouched"""
    cfg = config.get_default_config()
    log_cfg = cfg.tdsolve.logging
    log_cfg.log_to_file = False
    real_configure_logging(log_cfg)
    assert "log_file" in log_cfg.pylogger_options.handlers
    assert log_cfg.pylogger_options.loggers.tdsolve.handlers == [
        "console_tdsolve"
    ]
