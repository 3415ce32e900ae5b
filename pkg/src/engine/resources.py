"""
Resource guard for exponential enumerations
Memory check follows the same psutil threshold pattern used before every expensive call
"""

from typing import Dict

import psutil

from config import MEMORY_THRESHOLD
from utils.logger import get_logger
from .errors import ResourceBudgetError

logger = get_logger(__name__)


class ResourceGuard:
    """
    Counts enumerated candidates against a budget and checks system memory
    before large allocations.

    One guard is created per solver run; it is not shared between threads.
    """

    def __init__(self, budget_name: str, limit: int, hint: str = "", memory_threshold: float = MEMORY_THRESHOLD):
        """
        Args:
            budget_name: name reported in the refusal diagnostic
            limit: maximum number of candidates that may be charged
            hint: how to raise the limit (CLI flag / environment variable)
            memory_threshold: system memory usage (%) above which allocations are refused
        """
        self.budget_name = budget_name
        self.limit = limit
        self.hint = hint
        self.memory_threshold = memory_threshold
        self.used = 0

    def require(self, amount: int) -> None:
        """Refuse up front when a known enumeration size exceeds the budget"""
        if amount > self.limit:
            logger.warning(f"{self.budget_name}: refusing enumeration of {amount} candidates (limit {self.limit})")
            raise ResourceBudgetError(self.budget_name, self.limit, amount, self.hint)

    def charge(self, amount: int = 1) -> None:
        """Account for enumerated candidates; raises once the budget is spent"""
        self.used += amount
        if self.used > self.limit:
            logger.warning(f"{self.budget_name}: budget of {self.limit} candidates exhausted")
            raise ResourceBudgetError(self.budget_name, self.limit, None, self.hint)

    def check_memory(self, bytes_needed: int = 0) -> None:
        """
        Memory usage check before allocating exponential tables
        Raises ResourceBudgetError when usage (plus the planned allocation) crosses the threshold
        """
        mem = psutil.virtual_memory()
        projected = mem.percent + 100.0 * bytes_needed / max(mem.total, 1)
        if projected > self.memory_threshold:
            raise ResourceBudgetError(
                "memory",
                self.memory_threshold,
                round(projected, 1),
                "lower the instance size or raise ICOVER_MEMORY_THRESHOLD",
            )


def memory_usage() -> Dict[str, float]:
    """Current memory usage (used in bench output and the health endpoint)"""
    mem = psutil.virtual_memory()
    return {
        "total_gb": mem.total / (1024 ** 3),
        "used_gb": mem.used / (1024 ** 3),
        "available_gb": mem.available / (1024 ** 3),
        "percent": mem.percent,
    }
