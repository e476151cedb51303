"""Semi-canonical embeddings of rational complexity-one T-varieties."""

from .kernels import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
