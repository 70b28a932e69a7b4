"""Weight bases of Gelfand-Tsetlin type for split classical Lie algebras.

The package constructs, for the split odd orthogonal (B), symplectic (C) and
even orthogonal (D) series, the pattern-indexed weight basis in which the
chain of subalgebras g_1 < g_2 < ... < g_n acts by explicit sparse matrices,
together with the exact arithmetic, root-system oracles, gl building blocks,
tensor (Wigner) coefficients and verification suites needed to certify the
construction.
"""

from .exactnum import AlgebraicValue, sqrt_of, signum_and_square

__all__ = [
    "AlgebraicValue",
    "sqrt_of",
    "signum_and_square",
]

__version__ = "0.1.0"
