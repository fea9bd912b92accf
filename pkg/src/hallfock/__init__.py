"""Exact Fock-space and fixed-point models of the elliptic Hall algebra."""

from .scalar import Scalar, parse_scalar, q, q1, q2

__version__ = "0.1.0"
