"""Certify and compute continuous images f(E1, E2) of Moran sets and
homogeneous self-similar sets."""

__version__ = "0.1.0"
