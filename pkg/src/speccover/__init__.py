"""Exact spectral-curve and stability computations for Higgs bundles obtained
by pushing line-bundle data forward along finite covers of the projective line."""

__version__ = "0.1.0"
