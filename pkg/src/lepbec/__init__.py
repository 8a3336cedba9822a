"""Bose condensation in quasi-free states obeying a local equilibrium
principle: occupation numbers, critical densities, finite-volume chemical
potentials, two-point kernels with singular parts and matrix models."""

__version__ = "0.1.0"
