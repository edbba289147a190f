"""Configuration loaded from the environment (and an optional .env file)."""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Numeric defaults
DEFAULT_TOL = float(os.getenv('RPINORM_TOL', '1e-9'))
DEFAULT_N_CAP = int(os.getenv('RPINORM_N_CAP', '64'))
DEFAULT_REFINEMENT = int(os.getenv('RPINORM_REFINE', '256'))
DEFAULT_JOBS = int(os.getenv('RPINORM_JOBS', '1'))

# Logging
LOG_LEVEL = os.getenv('RPINORM_LOG_LEVEL', 'WARNING').upper()

# Validation
if not DEFAULT_TOL > 0:
    raise ValueError("❌ RPINORM_TOL must be a positive number.")
if DEFAULT_N_CAP < 2:
    raise ValueError("❌ RPINORM_N_CAP must be at least 2.")
if DEFAULT_REFINEMENT < 2:
    raise ValueError("❌ RPINORM_REFINE must be at least 2.")
if DEFAULT_JOBS < 1:
    raise ValueError("❌ RPINORM_JOBS must be at least 1.")
