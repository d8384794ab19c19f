"""FastAPI service wrapping the verification library."""

from .app import app

__all__ = ["app"]
