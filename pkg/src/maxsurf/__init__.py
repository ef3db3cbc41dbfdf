"""Periodic maximal surfaces with conelike singularities in Lorentz-Minkowski space."""
