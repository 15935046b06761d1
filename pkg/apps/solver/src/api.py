"""
FastAPI HTTP API for the harmonium and coupled-oscillator solvers.
"""

import asyncio
import logging
import time
from contextlib import asynccontextmanager
from functools import partial

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, ConfigDict, Field

from .config import LOG_LEVEL, SOLVER_DIGITS, SOLVER_PRECISION
from .errors import InvalidInput, SolverError
from .models.results import Method
from .services.benchmarks import ground_energy, osc_report
from .services.numerics import working_precision
from .services.shared import get_shared_services

logging.basicConfig(
    level=LOG_LEVEL,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
logger = logging.getLogger(__name__)

VERSION = "1.0.0"


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Start the solver pool on startup, drain it on shutdown."""
    shared = get_shared_services()
    shared.init_executor()
    yield
    shared.close()


app = FastAPI(
    title="Harmonium Eigensolver API",
    description="High-precision ground states of the harmonium atom and the coupled oscillator",
    version=VERSION,
    lifespan=lifespan,
)


class HealthResponse(BaseModel):
    status: str
    precision_default: int
    version: str
    uptime_s: float
    requests_served: int
    failures: int


class EnergyResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    value: str
    certified_digits: int
    method: str
    lam: str = Field(alias="lambda")
    orders_used: list[int]


class SpectrumRowResponse(BaseModel):
    j: int
    n: int
    eps: str
    E: str | None = None


class VariationalResponse(BaseModel):
    alpha_opt: str
    beta_opt: str
    W_opt: str
    abs_error: str


class OscillatorResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lam: str = Field(alias="lambda")
    spectrum: list[SpectrumRowResponse]
    variational: VariationalResponse


async def _solve(fn, *args, **kwargs):
    """Run a solver call on the shared pool, mapping solver errors to HTTP errors."""
    shared = get_shared_services()
    loop = asyncio.get_running_loop()
    try:
        result = await loop.run_in_executor(shared.executor, partial(fn, *args, **kwargs))
    except InvalidInput as e:
        shared.state.failures += 1
        raise HTTPException(status_code=400, detail=str(e))
    except SolverError as e:
        shared.state.failures += 1
        logger.error(f"{fn.__name__} failed: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    shared.state.requests_served += 1
    return result


@app.get("/health", response_model=HealthResponse)
async def health_check():
    """Check service health, the default working precision and request counters."""
    state = get_shared_services().state
    return HealthResponse(
        status="ok",
        precision_default=working_precision(SOLVER_DIGITS, SOLVER_PRECISION),
        version=VERSION,
        uptime_s=round(time.time() - state.started_at, 3),
        requests_served=state.requests_served,
        failures=state.failures,
    )


@app.get("/harmonium/ground", response_model=EnergyResponse)
async def harmonium_ground(
    k: str = Query(..., description="Spring constant as a decimal string"),
    method: Method = Query(Method.RPM),
    digits: int = Query(SOLVER_DIGITS, ge=1),
):
    """Ground-state energy E0(k) of the harmonium in units hbar = m = e = 1."""
    if method is Method.EXACT:
        raise HTTPException(status_code=400, detail="method must be rpm or rr")
    result = await _solve(ground_energy, k, method, digits)
    return EnergyResponse(**result.to_record())


@app.get("/oscillator/spectrum", response_model=OscillatorResponse)
async def oscillator_spectrum(
    lam: str = Query(..., description="Coupling lambda as a decimal string"),
    j_max: int = Query(1, ge=0),
    n_max: int = Query(1, ge=0),
    digits: int = Query(SOLVER_DIGITS, ge=1),
):
    """Exact coupled-oscillator levels plus the Gaussian variational optimum."""
    report = await _solve(osc_report, lam, j_max, n_max, digits)
    return OscillatorResponse(**report.to_record())
