import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

APP_DIR = Path(__file__).resolve().parent.parent

# Precision
SOLVER_DIGITS = int(os.getenv("SOLVER_DIGITS", "18"))
SOLVER_PRECISION = int(os.getenv("SOLVER_PRECISION")) if os.getenv("SOLVER_PRECISION") else None
MIN_PRECISION = 50

# Riccati-Pade
RPM_D_MIN = int(os.getenv("RPM_D_MIN", "2"))
RPM_D_MAX = int(os.getenv("RPM_D_MAX", "30"))
RPM_DISPLACEMENT = int(os.getenv("RPM_DISPLACEMENT", "0"))
RPM_GUESS_BASIS = int(os.getenv("RPM_GUESS_BASIS", "10"))

# Rayleigh-Ritz
RR_BASIS_START = int(os.getenv("RR_BASIS_START", "10"))
RR_BASIS_STEP = int(os.getenv("RR_BASIS_STEP", "5"))
RR_BASIS_MAX = int(os.getenv("RR_BASIS_MAX", "40"))

# Kernel limits
JACOBI_MAX_SWEEPS = int(os.getenv("JACOBI_MAX_SWEEPS", "100"))
NEWTON_MAX_ITER = int(os.getenv("NEWTON_MAX_ITER", "200"))
QUAD_MAX_DEPTH = int(os.getenv("QUAD_MAX_DEPTH", "40"))

# Benchmarks
BENCHMARKS_PATH = os.getenv("BENCHMARKS_PATH", str(APP_DIR / "config" / "benchmarks.yaml"))
FIGURE_DIGITS = int(os.getenv("FIGURE_DIGITS", "12"))
SOLVER_WORKERS = int(os.getenv("SOLVER_WORKERS", "1"))

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# HTTP API Configuration
HTTP_PORT = int(os.getenv("HTTP_PORT", "8000"))
