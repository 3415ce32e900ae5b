"""
Pydantic models for the CNF-SAT → shortest-cover reduction
"""

from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

PARTIAL_BINARY = frozenset("01?")


class CnfFormula(BaseModel):
    """CNF over variables 1..p; literals are signed variable indices"""
    p: int = Field(..., ge=0, description="Variable count")
    clauses: List[List[int]] = Field(default_factory=list, description="Clauses as signed literal lists")
    allow_empty_clauses: bool = Field(False, description="Accept empty clauses (always false)")

    @model_validator(mode="after")
    def check_literals(self) -> "CnfFormula":
        for index, clause in enumerate(self.clauses, start=1):
            if not clause and not self.allow_empty_clauses:
                raise ValueError(f"clause {index} is empty")
            for literal in clause:
                if literal == 0 or abs(literal) > self.p:
                    raise ValueError(f"clause {index}: literal {literal} outside variables 1..{self.p}")
        return self

    @property
    def m(self) -> int:
        return len(self.clauses)


class MismatchInstance(BaseModel):
    """Universal Mismatch input: m binary partial words of common length p ('?' = don't care)"""
    words: List[str] = Field(default_factory=list)
    p: int = Field(..., ge=0)

    @field_validator("words")
    @classmethod
    def check_alphabet(cls, v: List[str]) -> List[str]:
        for word in v:
            if set(word) - PARTIAL_BINARY:
                raise ValueError(f"{word!r} is not a binary partial word over 0, 1, ?")
        return v

    @model_validator(mode="after")
    def check_uniform_length(self) -> "MismatchInstance":
        for word in self.words:
            if len(word) != self.p:
                raise ValueError(f"word {word!r} has length {len(word)}, expected {self.p}")
        return self

    @property
    def m(self) -> int:
        return len(self.words)


class ReductionLayout(BaseModel):
    """1-based start offsets of each block of the reduction word"""
    prefix_start: int = 1
    beta_starts: List[int] = Field(default_factory=list)
    gamma_starts: List[int] = Field(default_factory=list)
    d: int
    length: int

    def locate(self, position: int) -> Tuple[str, int]:
        """
        Block containing a 1-based position

        Returns:
            (block name such as "prefix", "beta_2", "gamma_1", offset inside the block, 1-based)
        """
        if not 1 <= position <= self.length:
            raise IndexError(f"position {position} outside 1..{self.length}")
        blocks = [("prefix", self.prefix_start)]
        blocks += [(f"beta_{j}", s) for j, s in enumerate(self.beta_starts, start=1)]
        blocks += [(f"gamma_{i}", s) for i, s in enumerate(self.gamma_starts, start=1)]
        name, start = blocks[0]
        for candidate, candidate_start in blocks:
            if candidate_start <= position:
                name, start = candidate, candidate_start
        return name, position - start + 1


class ReductionOutput(BaseModel):
    """Reduction word T, threshold d = 4p + 3 and block layout"""
    text: str = Field(..., description="Binary partial word in the i-string grammar")
    p: int
    m: int
    d: int
    length: int
    layout: ReductionLayout

    def sidecar(self) -> dict:
        """JSON sidecar written next to generated instances"""
        return {
            "p": self.p,
            "m": self.m,
            "d": self.d,
            "length": self.length,
            "layout": {
                "prefix": self.layout.prefix_start,
                "beta": self.layout.beta_starts,
                "gamma": self.layout.gamma_starts,
            },
        }


class VerificationReport(BaseModel):
    """Outcome of the desk-scale reduction check"""
    p: int
    m: int
    d: int
    satisfiable: bool = Field(..., description="A Universal Mismatch solution exists")
    shortest_length: Optional[int] = Field(None, description="Shortest cover of T if it is ≤ d")
    witness: Optional[str] = None
    decoded: Optional[str] = Field(None, description="Mismatch solution decoded from the length-d witness")
    solutions_checked: int = 0
    passed: bool = True
    failures: List[str] = Field(default_factory=list)

    def fail(self, message: str) -> None:
        self.passed = False
        self.failures.append(message)
