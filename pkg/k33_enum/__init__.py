"""K33 Enum - exact and asymptotic enumeration of K33-minor-free graphs."""

__version__ = "0.1.0"
