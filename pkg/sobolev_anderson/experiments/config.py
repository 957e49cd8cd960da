# config.py
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Output Configuration
AA_OUTPUT_DIR = os.getenv("AA_OUTPUT_DIR", "results")
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")

# Reproducibility
AA_SEED = int(os.getenv("AA_SEED", "0"))

# Theory-bound defaults
THEORY_N = int(os.getenv("THEORY_N", "16"))
THEORY_TRIALS = int(os.getenv("THEORY_TRIALS", "100"))

# Exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2
