"""Pseudospectral simulation and verification of nonlinear Dirac systems
with approximately Majorana initial data."""

__version__ = "0.1.0"
