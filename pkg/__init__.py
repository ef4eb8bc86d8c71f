"""
char2-quartics - exact verifications for nodes on quartic surfaces in characteristic 2.

Root lattices, fibre combinatorics, Weierstrass models over GF(2^k)[t]
and the quartic family l1 l2 l3 l4 + q^2, built on numpy, sympy,
networkx, pydantic and FastAPI.
"""

__version__ = "1.0.0"
__author__ = "char2-quartics Contributors"

# Import main components when used as a package
try:
    from orchestrator import VerificationOrchestrator
    from binary_fields import BinaryField, PolyGF2k
    from char2_weierstrass import WeierstrassModel
    from quartic_family import FamilyParameters, QuarticSurfaceModel

    __all__ = [
        'VerificationOrchestrator',
        'BinaryField',
        'PolyGF2k',
        'WeierstrassModel',
        'FamilyParameters',
        'QuarticSurfaceModel',
    ]
except ImportError:
    # When dependencies are not installed yet
    pass
