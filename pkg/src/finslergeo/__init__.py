"""Numerics for homogeneous geodesics in homogeneous Finsler spaces."""

__version__ = "0.1.0"
