"""SG Points - exact Galois and simultaneous Galois points of plane curves."""

__version__ = "0.1.0"
