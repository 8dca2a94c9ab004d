"""Littlewood-Paley square functions and norm-equivalence experiments on
the unit disk: truncated power series, spectrally accurate disk quadrature,
Hardy/Bergman p-norms (including the quasi-norm range p < 1), kernel atoms,
coefficient multipliers, and a deterministic scan harness with a CLI.
"""

__version__ = "0.1.0"
