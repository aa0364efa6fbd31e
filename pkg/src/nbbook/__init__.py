"""Notebook purpose-inference engine and book-style overlay builder."""

from .overlay import GENERATOR_VERSION

__version__ = "0.1.0"
__all__ = ["GENERATOR_VERSION", "__version__"]
