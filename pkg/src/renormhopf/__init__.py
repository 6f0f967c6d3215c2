"""Exact Hopf-algebraic renormalisation toolkit.

Modules:

* ``laurent``: exact truncated Laurent series in eps with polynomial coefficients
* ``algebra``: generic graded connected Hopf algebras given on generators
* ``trees``: rooted trees and admissible cuts
* ``graphs``: a small phi^3 graph catalog, divergent subgraphs and quotients
* ``hopf``: characters, convolution, Birkhoff decomposition and BPHZ
* ``lie``: infinitesimal characters, insertion brackets, grading and theta
* ``rg``: residue, beta function and the flow ``F_t``
* ``diffeo``: odd formal diffeomorphisms and their Birkhoff decomposition
* ``resolvents``: cubic and quartic resolvents and two circle constructions
"""

__version__ = "0.1.0"
