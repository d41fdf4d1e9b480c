# -*- coding: utf-8 -*-

"""Tensor Decomposition Solvers

This python package implements the Paratuck2 and CP tensor decompositions,
seven interchangeable resolution schemes for Paratuck2 and a benchmark
harness that compares their accuracy and convergence speed.
"""

from setuptools import setup

VERSION = "1.0.0"

classifiers = [
    "Development Status :: 4 - Beta",
    "License :: OSI Approved :: Apache Software License",
    "Operating System :: POSIX",
    "Operating System :: POSIX :: Linux",
    "Operating System :: MacOS :: MacOS X",
    "Operating System :: Microsoft :: Windows",
    "Programming Language :: Python :: 3",
    "Programming Language :: Python :: Implementation :: CPython",
    "Topic :: Scientific/Engineering :: Mathematics",
    "Topic :: Utilities",
]


setup(
    name="py-tdsolve",
    version=VERSION,
    license="Apache License, Version 2.0",
    description="Tensor Decomposition Solvers",
    long_description=__doc__,
    author="tdsolve developers",
    maintainer="tdsolve developers",
    include_package_data=True,
    package_data={'tdsolve.config': ['default_config.yaml']},
    platforms="any",
    classifiers=classifiers,
    packages=[
        'tdsolve',
        'tdsolve.bench',
        'tdsolve.config',
        'tdsolve.optim',
        'tdsolve.post',
        'tdsolve.scripts',
        'tdsolve.tensor',
        'tdsolve.utils',
    ],
    entry_points="""
        [console_scripts]
        tdsolve_bench=tdsolve.scripts.tdbench:main
    """,
    python_requires='>=3.10',
    install_requires=[
        "numpy>=1.26.0",
        "scipy>=1.11.0",
        "pandas>=2.1.0",
        "PyYAML>=6.0.0",
        "pytz",
    ],
)
