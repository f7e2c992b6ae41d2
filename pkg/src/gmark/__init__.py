"""Generalized Markov triples, their Euclid and tropical shadows, and the
asymptotic ratios that connect them."""

from .core import LambdaParams, ReducedSeq

__version__ = "0.1.0"
__all__ = ["LambdaParams", "ReducedSeq", "__version__"]
