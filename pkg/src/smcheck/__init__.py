"""smcheck - statistical model checking of probabilistic discrete-event models."""

__version__ = "0.1.0"
