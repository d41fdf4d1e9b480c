# -*- coding: utf-8 -*-

"""\
Struct Module
-------------

Implements :class:`~tdsolve.utils.struct.Struct`, the mapping type used for
configuration data and benchmark plan files.

"""

from abc import ABCMeta
from collections import OrderedDict
from collections.abc import Mapping, MutableMapping

import numpy as np
import yaml


def _merge(this, that):
    """Recursive merge from *that* mapping to *this* mapping

    New entries are added, existing entries are updated. Nested mappings are
    merged rather than replaced.

    Args:
        this (dict): Mapping that is updated
        that (dict): Mapping to be merged. Unmodified within the function
    """
    for key, vother in that.items():
        vorig = this.get(key, None)
        if (
            isinstance(vorig, Mapping)
            and isinstance(vother, Mapping)
            and (id(vorig) != id(vother))
        ):
            _merge(vorig, vother)
        else:
            this[key] = vother


def merge(a, b, *args):
    """Recursively merge mappings and return consolidated dict.

    The update occurs left to right, i.e., entries from later dictionaries
    overwrite entries from preceeding ones.

    Returns:
        dict: The consolidated map
    """
    out = a.__class__()
    for c in (a, b) + args:
        _merge(out, c)
    return out


def gen_yaml_decoder(cls):
    """Generate a YAML loader that builds ``cls`` for every mapping node

    Args:
        cls: Class used for mapping
    """

    def struct_constructor(loader, node):
        """Custom constructor for Struct"""
        return cls(loader.construct_pairs(node))

    class StructYAMLLoader(yaml.SafeLoader):
        """Custom YAML loader for Struct data"""

    StructYAMLLoader.add_constructor(
        yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, struct_constructor
    )
    return StructYAMLLoader


def gen_yaml_encoder(cls):
    """Generate a YAML dumper aware of ``cls`` and numpy types

    Args:
        cls: Class used for mapping
    """

    def struct_representer(dumper, data):
        """Convert Struct to dictionary for YAML"""
        return dumper.represent_dict(list(data.items()))

    def numpy_representer(dumper, data):
        """Convert numpy arrays to YAML"""
        return dumper.represent_list(data.tolist())

    def numpy_scalar_representer(dumper, data):
        """Convert numpy scalars to YAML"""
        if isinstance(data, np.integer):
            return dumper.represent_int(int(data))
        if isinstance(data, np.bool_):
            return dumper.represent_bool(bool(data))
        return dumper.represent_float(float(data))

    class StructYAMLDumper(yaml.SafeDumper):
        """Custom YAML dumper for Struct data"""

    StructYAMLDumper.add_representer(cls, struct_representer)
    StructYAMLDumper.add_representer(np.ndarray, numpy_representer)
    for npt in (np.float64, np.float32, np.int64, np.int32, np.bool_):
        StructYAMLDumper.add_representer(npt, numpy_scalar_representer)
    return StructYAMLDumper


class StructMeta(ABCMeta):
    """Attach a YAML loader/dumper pair to every class in the hierarchy"""

    def __new__(mcls, name, bases, cdict):
        yaml_decoder = cdict.pop("yaml_decoder", None)
        yaml_encoder = cdict.pop("yaml_encoder", None)
        cls = super().__new__(mcls, name, bases, cdict)
        cls.yaml_decoder = yaml_decoder or gen_yaml_decoder(cls)
        cls.yaml_encoder = yaml_encoder or gen_yaml_encoder(cls)
        return cls


# pylint: disable=too-many-ancestors
class Struct(OrderedDict, MutableMapping, metaclass=StructMeta):
    """Dictionary that supports both key and attribute access.

    Features:

       #. Preserves ordering of members as initialized
       #. Provides attribute and dictionary-style lookups
       #. Read/write YAML formatted data
    """

    @classmethod
    def from_yaml(cls, stream):
        """Initialize mapping from a YAML string or file handle.

        Args:
            stream: A string or valid file handle

        Returns:
            Struct: YAML data as a python object
        """
        return cls(yaml.load(stream, Loader=cls.yaml_decoder) or {})

    @classmethod
    def load_yaml(cls, filename):
        """Load a YAML file

        Args:
            filename (str): Absolute path to YAML file

        Returns:
            Struct: YAML data as python object
        """
        with open(filename, 'r', encoding='utf-8') as fh:
            return cls.from_yaml(fh)

    # pylint: disable=signature-differs
    def __setitem__(self, key, value):
        if isinstance(value, Mapping) and not isinstance(value, Struct):
            out = self.__class__()
            _merge(out, value)
            super().__setitem__(key, out)
        else:
            super().__setitem__(key, value)

    def __setattr__(self, key, value):
        self[key] = value

    def __getattr__(self, key):
        if key not in self:
            raise AttributeError("No attribute named " + key)
        return self[key]

    def merge(self, *args):
        """Recursively update dictionary with entries from ``args``"""
        for other in args:
            _merge(self, other)

    def to_yaml(self, stream=None, default_flow_style=False, **kwargs):
        """Convert mapping to YAML format.

        Args:
            stream (file): A file handle where YAML is output
            default_flow_style (bool): False for block style output
        """
        return yaml.dump(
            self,
            stream=stream,
            Dumper=self.__class__.yaml_encoder,
            default_flow_style=default_flow_style,
            **kwargs
        )

    def pget(self, path, sep="."):
        """Get value from a nested dictionary entry.

        Returns None if any of the intermediate keys are missing instead of
        raising AttributeError.

        Args:
            path (str): The keys in individual dictionarys separated by sep
            sep (str): Separator for splitting keys (default: ".")

        Returns:
            Value corresponding to the key, or None
        """
        rhs = self
        for k in path.strip().strip(sep).split(sep):
            rhs = rhs.get(k, None)
            if rhs is None:
                return None
        return rhs

    def pset(self, path, value, sep="."):
        """Set value for a nested dictionary entry.

        Missing intermediate mappings are created with the class of ``self``.
        Mapping values are merged into an existing mapping entry.

        Args:
            path (str): The keys in individual dictionarys separated by sep
            value (object): Object assigned to innermost key
            sep (str): Separator for splitting keys (default: ".")
        """
        keys = path.strip().strip(sep).split(sep)
        lhs = self
        for k in keys[:-1]:
            lhs = lhs.setdefault(k, self.__class__())
        lval = lhs.get(keys[-1], None)
        if isinstance(lval, Mapping) and isinstance(value, Mapping):
            _merge(lval, value)
        else:
            lhs[keys[-1]] = value
