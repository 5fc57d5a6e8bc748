"""growthlab: simulation and verification lab for directed random growth
models on the plane (corner growth / last-passage percolation, exclusion
height processes, Hammersley's process, the random average process, and
their hydrodynamic and large-deviation limits)."""

from growthlab._backend import HAVE_COMPILED

__version__ = "0.1.0"

__all__ = ["HAVE_COMPILED", "__version__"]
