from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from contextlib import asynccontextmanager
import logging
from typing import Callable, Optional

from .config import settings
from .localsing import TruncationTooSmall, catalog_names
from .models.document import CurveDocument
from .models.report import Report
from .services.verification_service import INPUT_ERRORS, VerificationServiceError, verification_service

# Setup logging
logging.basicConfig(
    level=getattr(logging, settings.log_level),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(f"Starting {settings.service_name} service")
    yield
    logger.info(f"Shutting down {settings.service_name} service")

app = FastAPI(
    title="Residuum",
    description="Exact verification of k-differentials, residue balancing and conductor descent on singular curves",
    version="1.0.0",
    lifespan=lifespan
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _run(command: str, handler: Callable[[], Report]) -> Report:
    try:
        return handler()
    except TruncationTooSmall as e:
        logger.warning(f"{command}: truncation too small: {e}")
        raise HTTPException(status_code=422, detail=f"{e}; raise trunc and retry")
    except INPUT_ERRORS as e:
        logger.warning(f"{command}: rejected input: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except VerificationServiceError as e:
        logger.error(f"{command}: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/graph-invariants", response_model=Report)
async def graph_invariants(document: CurveDocument):
    return _run("graph-invariants", lambda: verification_service.graph_invariants(document))

@app.post("/check-balance", response_model=Report)
async def check_balance(
    document: CurveDocument,
    k: Optional[int] = Query(None, ge=1, description="Tensor power of the differential to check"),
    trials: int = Query(0, ge=0, description="Random equivalence probe trials"),
    seed: Optional[int] = Query(None, description="Probe seed"),
):
    return _run("check-balance", lambda: verification_service.check_balance(document, k=k, trials=trials, seed=seed))

@app.post("/construct", response_model=Report)
async def construct(
    document: CurveDocument,
    k: Optional[int] = Query(None, ge=1, description="Tensor power"),
    params: Optional[str] = Query(None, description="Edge parameters, e.g. e12=1,e23=2/3"),
):
    return _run("construct", lambda: verification_service.construct(document, k=k, params=params))

@app.post("/span", response_model=Report)
async def span(document: CurveDocument):
    return _run("span", lambda: verification_service.span(document))

@app.post("/conductor", response_model=Report)
async def conductor(
    document: Optional[CurveDocument] = None,
    singularity: str = Query(..., description="Catalog name or document singularity id"),
    differential: Optional[str] = Query(None, description="Per-branch Laurent text in t, separated by ','"),
    k: Optional[int] = Query(None, ge=1, description="Tensor power"),
    trunc: Optional[int] = Query(None, ge=2, description="Series truncation order"),
):
    return _run(
        "conductor", lambda: verification_service.conductor(document, singularity, differential, k, trunc)
    )

@app.post("/descent-global", response_model=Report)
async def descent_global(
    document: CurveDocument,
    trunc: Optional[int] = Query(None, ge=2, description="Series truncation order"),
):
    return _run("descent-global", lambda: verification_service.descent_global(document, trunc=trunc))

@app.get("/selftest", response_model=Report)
async def selftest(
    trials: Optional[int] = Query(None, ge=1, description="Equivalence probe trials per graph"),
    seed: Optional[int] = Query(None, description="Seed for every random draw"),
):
    return _run("selftest", lambda: verification_service.selftest(trials=trials, seed=seed))

# Health Check
@app.get("/health")
async def health_check():
    return {
        "status": "healthy",
        "service": settings.service_name,
        "version": "1.0.0",
        "catalog": catalog_names(),
    }

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host=settings.service_host, port=settings.service_port)
