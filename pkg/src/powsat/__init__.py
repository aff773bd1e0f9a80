"""powsat: decision procedures for power structures and friends.

Solvers: quantifier-free theories of powers (``power_solver``), QFBAPA
(``qfbapa``), QFBAPAI (``qfbapai``), combinatory array logic with
cardinalities (``cal``), and quantifier-free Skolem arithmetic
(``skolem``); each paired with a brute-force oracle for differential
testing and, where applicable, a certificate checker.
"""

from ._engine import BACKEND as ENGINE_BACKEND

__version__ = "0.1.0"
__all__ = ["ENGINE_BACKEND", "__version__"]
