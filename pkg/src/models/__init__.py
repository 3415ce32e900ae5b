"""
Pydantic models
Results, reduction records and run configuration
"""

from .cover_models import (
    BenchRow,
    CheckReport,
    CoverResult,
    InputDigest,
    OracleReport,
    SolveReport,
)
from .reduction_models import (
    CnfFormula,
    MismatchInstance,
    ReductionLayout,
    ReductionOutput,
    VerificationReport,
)
from .run_config import Algorithm, OutputFormat, RunConfig

__all__ = [
    "BenchRow",
    "CheckReport",
    "CoverResult",
    "InputDigest",
    "OracleReport",
    "SolveReport",
    "CnfFormula",
    "MismatchInstance",
    "ReductionLayout",
    "ReductionOutput",
    "VerificationReport",
    "Algorithm",
    "OutputFormat",
    "RunConfig",
]
