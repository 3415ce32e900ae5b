"""
Shared utilities (structured logging)
"""

from .logger import get_logger, set_console_level, StructuredLogger

__all__ = ["get_logger", "set_console_level", "StructuredLogger"]
