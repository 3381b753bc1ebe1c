"""Finite-precision computer algebra for weighted p-adic series rings.

Exact (rational / modular-integer) implementations of: Gauss norms on
sparse multivariate Laurent-type series, plain and enhanced q-power
Frobenius actions with their commuting operator families, length-N Witt
vectors over perfect char-p series rings, the cubic Newton idempotent
iteration and projection splittings behind Frobenius descent, slope
arithmetic for phi-modules in standard form, and ramification data of
cyclotomic and Lubin-Tate towers with field-of-norms arithmetic.
"""

__version__ = "0.1.0"
