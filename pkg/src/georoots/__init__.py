"""Root sequences mod m, real quadratic ideal classes, and the closed
geodesics they parametrize, plus the pair-correlation machinery relating
the two."""

__version__ = "0.1.0"
