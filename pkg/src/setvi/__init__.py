"""Exact set-valued variational analysis on polyhedral instances."""

from .conlinear import ConeError, ConeSpec, GSet
from .dini import regularity_audit, scalar_derivative, scalar_dini, set_derivative
from .extreal import INF, NEG_INF, ExtReal, format_rational, parse_rational
from .instance import Instance, InstanceError, load_instance, parse_instance
from .polyhedral import HRep, VRep
from .setfun import MaxAffineMap, Piecewise1DMap, Profiles, SetFun, Tracks, extend
from .tristate import Status
from .vi import PREDICATES, evaluate_all, implication_audit

__version__ = "0.1.0"

__all__ = [
    "ConeError",
    "ConeSpec",
    "GSet",
    "regularity_audit",
    "scalar_derivative",
    "scalar_dini",
    "set_derivative",
    "INF",
    "NEG_INF",
    "ExtReal",
    "format_rational",
    "parse_rational",
    "Instance",
    "InstanceError",
    "load_instance",
    "parse_instance",
    "HRep",
    "VRep",
    "MaxAffineMap",
    "Piecewise1DMap",
    "Profiles",
    "SetFun",
    "Tracks",
    "extend",
    "Status",
    "PREDICATES",
    "evaluate_all",
    "implication_audit",
]
