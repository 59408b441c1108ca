"""codimlab: codimensions, PI-exponents and cocharacters of finite-dimensional Lie algebras."""

__version__ = "0.1.0"
