"""Exact computational checks for mirror symmetry of A_n resolutions.

Submodules:

* ``toric``: fan, divisors and boxed section counts of the resolution.
* ``syz_base``: wall-crossing charts, monodromy and the glued cover.
* ``paths``: admissible polylines, winding vectors, the section ``L_0``.
* ``fs_ring``: thimble lifts on the cylinder and the triangle-count ring.
* ``wrapped``: wrapped generators, the map ``psi`` and localized homs.
* ``cli``: the ``anmirror`` command line tool.
"""

__version__ = "0.1.0"

from .errors import (AnMirrorError, DegenerateCrossing, InternalInconsistency,
                     InvalidInput, InvalidParameter, OutOfRange, PerturbationError)

__all__ = [
    "__version__",
    "AnMirrorError",
    "DegenerateCrossing",
    "InternalInconsistency",
    "InvalidInput",
    "InvalidParameter",
    "OutOfRange",
    "PerturbationError",
]
