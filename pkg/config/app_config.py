import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# Output
OUTPUT_DIR = os.getenv("OUTPUT_DIR", "results")

# Property checks (relative to max(1, max|K|) of the checked kernel)
CHECK_TOL = float(os.getenv("CHECK_TOL", "1e-10"))
POSITIVE_TOL = float(os.getenv("POSITIVE_TOL", "1e-13"))

# Algebraic identities
ALGEBRA_TOL = float(os.getenv("ALGEBRA_TOL", "1e-12"))
RESOLVENT_TOL = float(os.getenv("RESOLVENT_TOL", "1e-10"))

# Scalar solve per time step
SOLVE_TOL = float(os.getenv("SOLVE_TOL", "1e-14"))
SOLVE_MAX_ITER = int(os.getenv("SOLVE_MAX_ITER", "200"))
BRACKET_MAX_DOUBLINGS = int(os.getenv("BRACKET_MAX_DOUBLINGS", "64"))

# Experiment harness
DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "42"))
MONOTONE_TOL = float(os.getenv("MONOTONE_TOL", "1e-12"))
MIN_RELATIVE_STEP = float(os.getenv("MIN_RELATIVE_STEP", "1e-12"))

# HTTP server
API_HOST = os.getenv("API_HOST", "127.0.0.1")
API_PORT = int(os.getenv("API_PORT", "8000"))
