import os

from dotenv import load_dotenv
load_dotenv()

TOOL_NAME = "monomix"
VERSION = "0.1.0"

WORKERS = int(os.getenv("MONOMIX_WORKERS", os.cpu_count() or 1))

# Exact analysis caps
EXPLICIT_MAX_DIM = int(os.getenv("MONOMIX_EXPLICIT_MAX_DIM", 20))
BRUTEFORCE_MAX_DIM = int(os.getenv("MONOMIX_BRUTEFORCE_MAX_DIM", 4))
CONDUCTANCE_MAX_STATES = int(os.getenv("MONOMIX_CONDUCTANCE_MAX_STATES", 22))
EIGEN_MAX_STATES = int(os.getenv("MONOMIX_EIGEN_MAX_STATES", 4000))
MIXING_TIME_CAP = int(os.getenv("MONOMIX_MIXING_TIME_CAP", 100000))
PERCOLATION_EXACT_MAX_SITES = int(os.getenv("MONOMIX_PERCOLATION_EXACT_MAX_SITES", 24))
PERCOLATION_EXPLICIT_MAX_SITES = 16

# Simulation
SIM_MAX_DIM = int(os.getenv("MONOMIX_SIM_MAX_DIM", 4096))
DRAW_BLOCK = int(os.getenv("MONOMIX_DRAW_BLOCK", 65536))

# Ising defaults
ISING_DEFAULT_BETA = 3.0
ISING_EPSILON_SLACK = 1e-9

LOG_DIR = os.getenv("LOG_DIR", "logs")
DEBUG = os.getenv("DEBUG", "False").lower() == "true"
LOG_UTC_OFFSET_MINUTES = int(os.getenv("LOG_UTC_OFFSET_MINUTES", 0))
