"""Exact computation of automorphism-twisted derivations of Lie algebras.

Subpackages cover exact rational linear algebra, structure-constant Lie
algebras, twisted-derivation solvers, graded dimension series, a lex
Groebner engine, and the worked three-dimensional case study.
"""

from gderive import errors

__version__ = "0.1.0"

__all__ = ["errors", "__version__"]
