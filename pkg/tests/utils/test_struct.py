# -*- coding: utf-8 -*-

"""
tdsolve.utils.struct Tests
"""

import numpy as np
import pytest

from tdsolve.utils.struct import Struct, merge


def test_access():
    """Test basic key/attribute access patterns"""
    obj = Struct(a=1, b=2, c=3)
    obj.abc = 10
    obj["xyz"] = 20
    assert obj.a == 1
    assert obj.xyz == 20
    assert obj["abc"] == 10
    with pytest.raises(AttributeError):
        _ = obj.ijk


def test_nested_conversion():
    """Nested dictionaries become Struct instances"""
    obj = Struct(adam=dict(beta1=0.9, beta2=0.999))
    assert isinstance(obj.adam, Struct)
    assert obj.adam.beta2 == 0.999


def test_merge_update():
    """Test dictionary merging"""
    base = Struct(
        max_iters=1000,
        line_search={"c1": 1.0e-4, "c2": 0.9},
    )
    update = Struct(max_iters=50, line_search=dict(c2=0.5))
    base.merge(update)
    assert base.max_iters == 50
    assert base.line_search.c2 == 0.5
    assert base.line_search.c1 == 1.0e-4


test_yaml = """
tdsolve:

  solvers:
    max_iters: 1000
    rel_tol: 1.0e-6

    nag:
      gamma: 0.9
      learning_rate: 1.0e-3

  bench:
    seeds: [0, 1, 2]
"""


def test_yaml_parse():
    """Test loading of YAML data"""
    obj = Struct.from_yaml(test_yaml)
    solvers = obj.tdsolve.solvers
    assert solvers.max_iters == 1000
    assert solvers.nag.learning_rate == 1.0e-3
    assert obj.tdsolve.bench.seeds == [0, 1, 2]
    assert Struct.from_yaml("") == Struct()


def test_yaml_output():
    """Test writing YAML data"""
    obj = Struct.from_yaml(test_yaml)
    out = obj.to_yaml(default_flow_style=True)
    assert Struct.from_yaml(out) == obj
    assert out.startswith("{tdsolve: {solvers: {max_iters: 1000")


def test_yaml_numpy():
    """Numpy values are written as plain YAML"""
    obj = Struct(errors=np.array([1.0, 0.5]), seed=np.int64(3))
    out = Struct.from_yaml(obj.to_yaml())
    assert out.errors == [1.0, 0.5]
    assert out.seed == 3


def test_yaml_load(tmpdir):
    yfile = tmpdir.join("test.yaml")
    yfile.write(test_yaml)
    obj = Struct.load_yaml(str(yfile))
    assert "tdsolve" in obj


def test_merge():
    obj1 = Struct.from_yaml(test_yaml)
    obj2 = Struct(tdsolve=dict(bench=dict(jobs=4)))
    out = merge(obj1, obj2)
    assert out.tdsolve.bench.jobs == 4
    assert out.tdsolve.bench.seeds == [0, 1, 2]


def test_get_set():
    obj = Struct.from_yaml(test_yaml)
    assert obj.pget("tdsolve.solvers.nag.gamma") == 0.9
    assert obj.pget("tdsolve.missing.value") is None
    obj.pset("tdsolve.solvers.nag.gamma", 0.5)
    obj.pset("tdsolve.p1.p2.p3", 10)
    assert obj.pget("tdsolve.p1.p2.p3") == 10
    assert obj.tdsolve.solvers.nag.gamma == 0.5
