"""
Run configuration shared by the CLI and the HTTP service
Defaults come from config.py; flags override them.
"""

from enum import Enum

from pydantic import BaseModel, Field

from config import DEFAULT_SEED, MAX_PREFIXES, MAX_SUBSETS, ORACLE_BUDGET, TABLE_MAX_K


class Algorithm(str, Enum):
    """Solver selector"""
    AUTO = "auto"
    SIMPLE = "simple"
    ODOT = "odot"
    FPT = "fpt"
    PARTIAL = "partial"
    ORACLE = "oracle"


class OutputFormat(str, Enum):
    PLAIN = "plain"
    JSON = "json"


class RunConfig(BaseModel):
    algorithm: Algorithm = Algorithm.AUTO
    max_prefixes: int = Field(MAX_PREFIXES, ge=1, description="simple_solve prefix enumeration budget")
    max_subsets: int = Field(MAX_SUBSETS, ge=1, description="FPT covering-set enumeration budget")
    table_max_k: int = Field(TABLE_MAX_K, ge=0, description="Largest k for the 2^k column table")
    oracle_budget: int = Field(ORACLE_BUDGET, ge=1, description="Brute-force candidate budget")
    output: OutputFormat = OutputFormat.PLAIN
    seed: int = DEFAULT_SEED
