"""SG Points API routers."""

from . import health, tools

__all__ = ["health", "tools"]
