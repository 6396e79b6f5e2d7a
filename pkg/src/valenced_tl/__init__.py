"""Exact arithmetic for valenced strand algebras.

Subpackages are organised bottom-up: ``qnum`` (coefficient rings and
quantum integers), ``digits`` (two-tier digit combinatorics), ``diagram``
(the planar strand category), ``jones_wenzl`` (idempotents and ladder
morphisms), ``cellular`` (cell data computed from diagrams), ``formulas``
(closed-form cell data) and ``cli`` (the command line front end).
"""

__version__ = "0.1.0"
