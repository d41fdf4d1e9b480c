# -*- coding: utf-8 -*-

"""\
tdsolve Version
"""

import os
import shlex
import subprocess

_basic_version = "v1.0.0"


def git_describe():
    """Get version from git-describe, falling back to the release version"""
    dirname = os.path.dirname(__file__)
    git_ver = _basic_version
    try:
        cmd = shlex.split("git describe --tags --dirty")
        task = subprocess.Popen(
            cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE, cwd=dirname
        )
        out, _ = task.communicate()
        if task.poll() == 0:
            git_ver = out.strip().decode('ascii')
    except OSError:
        pass
    return git_ver


#: Version string
version = git_describe()
