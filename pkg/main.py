"""FastAPI server for the XY-chain Renyi entropy calculator."""
import logging
import time
from contextlib import asynccontextmanager
from typing import Dict, Optional

from fastapi import APIRouter, FastAPI, HTTPException
from pydantic import BaseModel, Field

from src.config import load_settings
from src.errors import RenyiError
from src.sweep import CSV_COLUMNS, LIMIT_COLUMNS, evaluate_row, format_number, limit_rows
from src.verify import SUITE_NAMES, run_suite

settings = load_settings()

logging.basicConfig(
    level=settings.log_level.upper(),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Log the active settings on startup."""
    logger.info(
        f"🚀 Renyi entropy service starting (tie_tol={settings.tie_tol}, "
        f"series_tol={settings.series_tol}, max_workers={settings.max_workers})"
    )
    yield


app = FastAPI(title="XY Renyi Entropy", version="1.0.0", lifespan=lifespan)
api_router = APIRouter()


class EvalRequest(BaseModel):
    """Request model for the eval endpoint."""
    h: float = Field(description="Transverse field h >= 0")
    gamma: float = Field(description="Anisotropy gamma > 0")
    alpha: float = Field(description="Renyi order alpha > 0")
    tol: Optional[float] = Field(default=None, gt=0, description="Series tail tolerance")
    series: bool = Field(default=False, description="Use the eigenvalue series instead of the closed form")


class LimitsRequest(BaseModel):
    """Request model for the limits endpoint."""
    h: float
    gamma: float
    alpha: float


class VerifyRequest(BaseModel):
    """Request model for the verify endpoint."""
    suite: str = Field(default="all", description=f"One of {', '.join(SUITE_NAMES)}")
    overrides: Optional[Dict[str, float]] = Field(default=None, description="Family name to tolerance")


@api_router.get("/")
async def root():
    """Root endpoint."""
    return {
        "message": "XY Renyi Entropy",
        "version": "1.0.0",
        "endpoints": {
            "/api/eval": "POST - Entropy record for one (h, gamma, alpha)",
            "/api/limits": "POST - Closed form beside the asymptotic estimates",
            "/api/verify": "POST - Run a verification suite",
            "/api/health": "GET - Health check",
        },
        "suites": list(SUITE_NAMES),
    }


@api_router.get("/health")
async def health():
    """Health check endpoint."""
    return {"status": "healthy"}


@api_router.post("/eval")
def eval_point(request: EvalRequest):
    """Same record as ``eval`` on the command line, column names as keys."""
    try:
        row = evaluate_row(
            request.h, request.gamma, request.alpha,
            request.tol or settings.series_tol, request.series, settings.tie_tol,
        )
    except RenyiError as e:
        raise HTTPException(status_code=422, detail=f"{type(e).__name__}: {e}")
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Evaluation failed: {str(e)}")
    return {column: format_number(row[column]) for column in CSV_COLUMNS}


@api_router.post("/limits")
def limits(request: LimitsRequest):
    """Closed form and every asymptotic estimate whose guard holds."""
    try:
        rows = limit_rows(request.h, request.gamma, request.alpha, settings.tie_tol)
    except RenyiError as e:
        raise HTTPException(status_code=422, detail=f"{type(e).__name__}: {e}")
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Limits failed: {str(e)}")
    return {"rows": [{column: format_number(row[column]) for column in LIMIT_COLUMNS} for row in rows]}


@api_router.post("/verify")
def verify(request: VerifyRequest):
    """Run a verification suite and return the report."""
    start_time = time.time()
    try:
        report = run_suite(request.suite, request.overrides)
    except RenyiError as e:
        raise HTTPException(status_code=422, detail=f"{type(e).__name__}: {e}")
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Verification failed: {str(e)}")
    logger.info(f"✓ /api/verify {request.suite} finished in {time.time() - start_time:.2f}s")
    return report.model_dump(mode="json")


app.include_router(api_router, prefix="/api", tags=["api"])


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8001)
