"""Jellium lattice energies, periodic Coulomb sums and energy minimization."""

import json as _json

from ._jellium import *  # noqa: F401,F403
from ._jellium import Error, InputError, NumericalError, bound_table_json

__version__ = "0.1.0"


def bound_table():
    """Bound table as a dict name -> {value, formula, source, reference}."""
    return _json.loads(bound_table_json())


def metadata(report):
    """Decoded metadata of an energy report dict."""
    return _json.loads(report["metadata"])
