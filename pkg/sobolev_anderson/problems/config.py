# config.py
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Poisson defaults
POISSON_N = int(os.getenv("POISSON_N", "63"))
POISSON_ERROR_MODES = int(os.getenv("POISSON_ERROR_MODES", "20"))

# Nonlinear Helmholtz defaults
NHL_H = float(os.getenv("NHL_H", "0.002"))
NHL_K0 = float(os.getenv("NHL_K0", "20"))

# WaveHoltz defaults
WAVEHOLTZ_CFL = float(os.getenv("WAVEHOLTZ_CFL", "0.5"))
WAVEHOLTZ_1D_N = int(os.getenv("WAVEHOLTZ_1D_N", "513"))
WAVEHOLTZ_2D_N = int(os.getenv("WAVEHOLTZ_2D_N", "65"))
WAVEHOLTZ_1D_AMPLITUDE = float(os.getenv("WAVEHOLTZ_1D_AMPLITUDE", "2.0"))
WAVEHOLTZ_2D_AMPLITUDE = float(os.getenv("WAVEHOLTZ_2D_AMPLITUDE", "1.0"))
WAVEHOLTZ_REFERENCE_CHUNK = int(os.getenv("WAVEHOLTZ_REFERENCE_CHUNK", "256"))
