"""Discrete-time heat kernels on regular trees and finite regular graphs.

Exact discrete I-Bessel functions and the heat kernels built from them.
Trace formulas tie graph spectra to counts of closed geodesics.
"""

from .bessel import bessel_poly, bessel_scaled
from .graphs import RegularGraph, generate, load_graph
from .qsurd import QSurd
from .tables import KernelTable
from .tree import tree_heat_kernel

__all__ = [
    "KernelTable",
    "QSurd",
    "RegularGraph",
    "bessel_poly",
    "bessel_scaled",
    "generate",
    "load_graph",
    "tree_heat_kernel",
]

__version__ = "0.1.0"
