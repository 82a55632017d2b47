"""shapeopt - relaxed density optimization and radial stability of semilinear shape problems."""

__version__ = "0.1.0"
