"""Verification laboratory for operator-valued conditionally bi-free probability.

Exact, desk-scale implementations of bi-non-crossing partition combinatorics,
truncated amalgamated c-free products, the recursive moment/cumulant pairs,
the universal moment formulas, the partial R-transform identity, and the
limit theorems, with every identity checked exactly over rationals.
"""

__version__ = "0.1.0"
