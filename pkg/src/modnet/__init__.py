"""modnet: exact and numerical verification of modular nets of real
subspaces attached to Jacobi-type Lie groups.

Layers: exact rational Lie/Jordan algebra (qlinalg, liealg, spindler,
grading, parabolic, jordan), finite-dimensional modular theory (stdspace),
the discretized positive-energy representation (grids, rep), and the
distribution-vector net with its locality/KMS checks (distvec).
"""

__version__ = "0.1.0"

__all__ = [
    "qlinalg",
    "liealg",
    "spindler",
    "grading",
    "parabolic",
    "jordan",
    "stdspace",
    "grids",
    "rep",
    "distvec",
    "suites",
    "cli",
]
