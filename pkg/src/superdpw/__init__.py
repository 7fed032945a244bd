"""superdpw: superharmonic / superprimitive maps from R^{2|2} via loop-group Weierstrass data."""

__version__ = "0.1.0"
