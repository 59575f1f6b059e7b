"""Semi-symmetric metric connections and semi-quasi-Einstein classification."""

__version__ = "0.1.0"
