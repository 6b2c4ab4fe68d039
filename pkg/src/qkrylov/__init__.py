"""Numerical simulator for quantum Krylov-subspace algorithms.

The package checks quantum-algorithm constructions against exact dense linear
algebra: swap tests, matrix-function state preparation, linear combinations
of states, stationary iteration, quantum Arnoldi and quantum conjugate
gradient, plus a few graph and eigenvalue applications.
"""

__version__ = "0.1.0"
