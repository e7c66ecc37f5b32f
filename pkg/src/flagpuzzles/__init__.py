"""Exact puzzle calculus on d-step flag varieties.

Subpackages by layer: :mod:`~flagpuzzles.exact` (rational-function
arithmetic), :mod:`~flagpuzzles.lattice` (root systems, weights, labels),
:mod:`~flagpuzzles.rep1` (d=1 quantized affine algebra and R-matrices),
:mod:`~flagpuzzles.chern` (restriction tables, products, Schubert limits),
:mod:`~flagpuzzles.puzzle` (puzzle enumeration and fugacities),
:mod:`~flagpuzzles.cli` (command line interface).
"""

__version__ = "0.1.0"
