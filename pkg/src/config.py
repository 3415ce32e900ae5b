"""
Configuration module for icover
Manages environment variables and solver budgets with strict typing
"""

import os
import sys
from typing import Dict, Any

try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("true", "1", "yes")


# Alphabet handling: symbol sets are bit vectors of this width at most
MAX_ALPHABET: int = int(os.getenv("ICOVER_MAX_ALPHABET", "256"))

# Enumeration budgets (all refusals are explicit, never silent truncation)
MAX_PREFIXES: int = int(os.getenv("ICOVER_MAX_PREFIXES", str(2 ** 20)))
MAX_SUBSETS: int = int(os.getenv("ICOVER_MAX_SUBSETS", str(2 ** 22)))
TABLE_MAX_K: int = int(os.getenv("ICOVER_TABLE_MAX_K", "20"))
ORACLE_BUDGET: int = int(os.getenv("ICOVER_ORACLE_BUDGET", str(2 ** 22)))
SAT_MAX_VARS: int = int(os.getenv("ICOVER_SAT_MAX_VARS", "24"))

# Memory guard (percent of system RAM in use before expensive allocations are refused)
MEMORY_THRESHOLD: float = float(os.getenv("ICOVER_MEMORY_THRESHOLD", "90.0"))

# Logging
LOG_LEVEL: str = os.getenv("ICOVER_LOG_LEVEL", "WARNING").upper()
LOG_FILE: str = os.getenv("ICOVER_LOG_FILE", "")

# Generators
DEFAULT_SEED: int = int(os.getenv("ICOVER_DEFAULT_SEED", "7"))

# Strict DIMACS ingestion rejects tautological clauses and duplicate literals
DIMACS_STRICT: bool = _env_flag("ICOVER_DIMACS_STRICT", "true")

# HTTP surface
API_HOST: str = os.getenv("ICOVER_API_HOST", "127.0.0.1")
API_PORT: int = int(os.getenv("ICOVER_API_PORT", "8000"))


def get_budgets() -> Dict[str, int]:
    """Return the enumeration budgets as a dictionary (used to seed RunConfig)"""
    return {
        "max_prefixes": MAX_PREFIXES,
        "max_subsets": MAX_SUBSETS,
        "table_max_k": TABLE_MAX_K,
        "oracle_budget": ORACLE_BUDGET,
    }


def validate_config() -> bool:
    """
    Validate configuration settings
    Raises ValueError for values no solver can work with
    """
    if MAX_ALPHABET < 1:
        raise ValueError("ICOVER_MAX_ALPHABET must be at least 1")
    for name, value in get_budgets().items():
        if value < 1:
            raise ValueError(f"Budget '{name}' must be positive, got {value}")
    if not 0.0 < MEMORY_THRESHOLD <= 100.0:
        raise ValueError(
            f"ICOVER_MEMORY_THRESHOLD must be in (0, 100], got {MEMORY_THRESHOLD}"
        )
    if LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        raise ValueError(f"Unknown ICOVER_LOG_LEVEL '{LOG_LEVEL}'")
    return True


def config_summary() -> Dict[str, Any]:
    """Effective settings as a flat dictionary"""
    return {
        "max_alphabet": MAX_ALPHABET,
        **get_budgets(),
        "sat_max_vars": SAT_MAX_VARS,
        "memory_threshold": MEMORY_THRESHOLD,
        "log_level": LOG_LEVEL,
        "log_file": LOG_FILE or None,
        "default_seed": DEFAULT_SEED,
        "dimacs_strict": DIMACS_STRICT,
        "api": f"{API_HOST}:{API_PORT}",
    }


def print_config(stream=None) -> None:
    """Display current configuration settings"""
    out = stream or sys.stdout
    print("=" * 50, file=out)
    print("icover configuration", file=out)
    print("=" * 50, file=out)
    for key, value in config_summary().items():
        print(f"{key:>18}: {value}", file=out)
    print("=" * 50, file=out)
