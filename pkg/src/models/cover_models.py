"""
Pydantic models for cover computations
Every result that leaves a solver (CLI, HTTP, check harness) is validated through these models.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator


class CoverResult(BaseModel):
    """Shortest cover with its certificate"""
    length: int = Field(..., ge=1, description="Shortest cover length")
    witness: str = Field(..., description="Solid cover string")
    covering_set: List[int] = Field(default_factory=list, description="Ascending 1-based occurrence positions")
    algorithm: str = Field(..., description="Provenance tag of the solver")

    @field_validator("covering_set", mode="before")
    @classmethod
    def sort_positions(cls, v):
        """Covering sets are always stored ascending and duplicate-free"""
        return sorted(set(int(x) for x in (v or [])))

    @field_validator("witness")
    @classmethod
    def witness_not_empty(cls, v: str) -> str:
        if not v:
            raise ValueError("witness must be a nonempty solid string")
        return v


class OracleReport(BaseModel):
    """Brute-force answer: shortest cover plus every feasible cover length"""
    shortest: Optional[CoverResult] = Field(None, description="Shortest cover (None if none within max_length)")
    all_lengths: List[int] = Field(default_factory=list, description="Every cover length found, ascending")
    shortest_witnesses: List[str] = Field(default_factory=list, description="All covers of the shortest length")
    max_length: Optional[int] = Field(None, description="Enumeration bound (None = n)")
    enumerated: int = Field(0, description="Solid candidates checked")


class InputDigest(BaseModel):
    n: int
    k: int
    sigma: int
    partial: bool


class SolveReport(BaseModel):
    """One solver run on one input"""
    input: InputDigest
    result: Optional[CoverResult] = None
    algorithm: str = Field(..., description="Algorithm that produced the result")
    timings: Dict[str, float] = Field(default_factory=dict, description="Per-phase wall time in microseconds")
    validated: bool = Field(False, description="Independent is_cover re-check passed")
    all_lengths: Optional[List[int]] = Field(None, description="Oracle path only")

    @property
    def micros(self) -> int:
        return int(round(sum(self.timings.values())))

    def to_json_dict(self) -> Dict:
        """Flat machine output: {n, k, sigma, partial, length, witness, covering_set, algo, micros}"""
        data = {
            "n": self.input.n,
            "k": self.input.k,
            "sigma": self.input.sigma,
            "partial": self.input.partial,
            "length": self.result.length if self.result else None,
            "witness": self.result.witness if self.result else None,
            "covering_set": self.result.covering_set if self.result else [],
            "algo": self.algorithm,
            "micros": self.micros,
        }
        if self.all_lengths is not None:
            data["all_lengths"] = self.all_lengths
        return data


class CheckReport(BaseModel):
    """Cross-validation of every applicable algorithm on one input"""
    text: str
    input: InputDigest
    reports: List[SolveReport] = Field(default_factory=list)
    expected_length: Optional[int] = None
    expected_witness: Optional[str] = Field(None, description="Lowest-rank shortest cover the exact solvers must all report")
    disagreements: List[str] = Field(default_factory=list)

    @property
    def agreed(self) -> bool:
        return not self.disagreements


class BenchRow(BaseModel):
    """One CSV line of the bench command"""
    n: int
    k: int
    sigma: int
    algo: str
    micros: int
    length: int

    @staticmethod
    def header() -> List[str]:
        return ["n", "k", "sigma", "algo", "micros", "length"]

    def as_row(self) -> List:
        return [self.n, self.k, self.sigma, self.algo, self.micros, self.length]
