"""Exact q-series for quantum spin networks, the tetrahedron index and the
FKB / 3D-index invariants of ideal triangulations."""

from spindex.qseries import QSeries, Monomial

__version__ = "0.1.0"

__all__ = ["QSeries", "Monomial", "__version__"]
