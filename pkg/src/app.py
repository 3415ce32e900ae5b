# app.py: FastAPI server exposing the cover solvers and the reduction verifier
# Same JSON schema as `icover solve --json`

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field
from contextlib import asynccontextmanager
from typing import Optional
import uvicorn
import os
import sys

# src on sys.path so that `from engine import ...` works when run as a script
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import print_config, validate_config, API_HOST, API_PORT, DIMACS_STRICT
from engine.errors import CnfFormatError, IStringParseError, ResourceBudgetError, SolverDisagreementError
from engine.istring import parse_istring
from engine.reduction import build_reduction, cnf_to_mismatch, parse_dimacs, verify_reduction
from engine.resources import memory_usage
from engine.service import solve
from models.run_config import Algorithm, RunConfig
from utils.logger import get_logger

logger = get_logger(__name__)


# --- [1] startup ---
@asynccontextmanager
async def lifespan(app: FastAPI):
    print_config(sys.stderr)
    validate_config()
    yield


app = FastAPI(
    title="icover API",
    description="Shortest solid covers of indeterminate strings and partial words",
    version="1.0.0",
    lifespan=lifespan,
)


# --- [2] request models ---
class SolveRequest(BaseModel):
    text: str = Field(..., description="i-string in the text grammar")
    alphabet: Optional[str] = Field(None, description="Declared alphabet (inferred when omitted)")
    algorithm: Algorithm = Algorithm.AUTO
    max_prefixes: Optional[int] = Field(None, ge=1)
    max_subsets: Optional[int] = Field(None, ge=1)

    model_config = {
        "json_schema_extra": {
            "example": {"text": "bb??abb??ba?", "alphabet": "ab", "algorithm": "auto"}
        }
    }


class ReduceRequest(BaseModel):
    dimacs: str = Field(..., description="CNF in DIMACS format")
    strict: bool = DIMACS_STRICT
    verify: bool = Field(False, description="Run the brute-force verifier (small formulas only)")

    model_config = {
        "json_schema_extra": {
            "example": {"dimacs": "p cnf 2 2\n1 2 0\n-1 0\n", "verify": True}
        }
    }


# --- [3] error mapping ---
def _http_error(exc: Exception) -> HTTPException:
    if isinstance(exc, (IStringParseError, CnfFormatError)):
        return HTTPException(status_code=400, detail=str(exc))
    if isinstance(exc, ResourceBudgetError):
        return HTTPException(status_code=422, detail=str(exc))
    if isinstance(exc, SolverDisagreementError):
        logger.error(f"solver disagreement: {exc}")
        return HTTPException(status_code=500, detail=str(exc))
    return HTTPException(status_code=400, detail=str(exc))


# --- [4] endpoints ---
@app.get("/health")
async def health():
    return {
        "status": "healthy",
        "memory": memory_usage(),
        "algorithms": [a.value for a in Algorithm],
    }


@app.post("/solve")
async def solve_endpoint(request: SolveRequest):
    overrides = {"algorithm": request.algorithm}
    if request.max_prefixes:
        overrides["max_prefixes"] = request.max_prefixes
    if request.max_subsets:
        overrides["max_subsets"] = request.max_subsets
    try:
        text = parse_istring(request.text, request.alphabet)
        report = solve(text, RunConfig(**overrides))
    except (ValueError, RuntimeError) as exc:
        raise _http_error(exc)
    return report.to_json_dict()


@app.post("/reduce")
async def reduce_endpoint(request: ReduceRequest):
    try:
        formula = parse_dimacs(request.dimacs, strict=request.strict)
        instance = cnf_to_mismatch(formula)
        output = build_reduction(instance)
        body = {"text": output.text, **output.sidecar()}
        if request.verify:
            body["verification"] = verify_reduction(instance).model_dump()
    except (ValueError, RuntimeError) as exc:
        raise _http_error(exc)
    return body


# --- [5] run ---
if __name__ == "__main__":
    uvicorn.run(app, host=API_HOST, port=API_PORT)
