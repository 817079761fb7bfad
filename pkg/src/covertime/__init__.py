"""Cover times of planar random walks and Brownian motion: simulation and exact chains."""

__version__ = "0.1.0"
