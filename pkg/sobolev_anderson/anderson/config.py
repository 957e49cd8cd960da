# config.py
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Least-squares safeguards
AA_RIDGE = float(os.getenv("AA_RIDGE", "1e-12"))
AA_DIVERGENCE_FACTOR = float(os.getenv("AA_DIVERGENCE_FACTOR", "1e12"))

# Run defaults
AA_DEFAULT_TOL = float(os.getenv("AA_DEFAULT_TOL", "1e-8"))
AA_DEFAULT_MAX_ITERS = int(os.getenv("AA_DEFAULT_MAX_ITERS", "500"))
