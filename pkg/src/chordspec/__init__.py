"""Chord-diagram crossing combinatorics and signed structured random-matrix spectra.

Subpackages:

- ``pairings``       exact enumeration, classification and censuses of circle matchings
- ``crossing_stats`` mean/variance of the crossing-vertex count, exact and Monte Carlo
- ``ensembles``      structured symmetric matrix samplers and the +-1 sign mask
- ``spectra``        eigenvalues and rescaled spectral moments
- ``theory``         predicted signed moments and the finite-size brute-force oracle
- ``cli``            command-line interface (census / crossing-stats / simulate / theory / verify)

The hot kernels live in a compiled extension with a NumPy fallback chosen at
import time; see ``chordspec._backend``.
"""

from chordspec._backend import backend_name

__all__ = ["backend_name"]
__version__ = "0.1.0"
