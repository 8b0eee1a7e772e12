import os
from dotenv import load_dotenv

load_dotenv()

# === Parallelism ===
RADON_THREADS = max(1, int(os.getenv("RADON_THREADS", os.cpu_count() or 1)))

# === Quadrature Defaults ===
DEFAULT_QUAD_NODES = int(os.getenv("RADON_QUAD_NODES", 64))
DEFAULT_ANGULAR_NODES = int(os.getenv("RADON_ANGULAR_NODES", 128))
CHORD_BISECTION_TOL = 1e-10  # relative to body diameter
RULE_CACHE_SIZE = 64

# === Sinogram Grid ===
DEFAULT_DIRECTIONS = int(os.getenv("RADON_DIRECTIONS", 64))
DEFAULT_OFFSETS = int(os.getenv("RADON_OFFSETS", 128))
MIN_OFFSETS = 16
SLAB_EXCLUSION = 1e-6  # relative to slab width
PROFILE_THRESHOLD = 1e-9  # relative to max sinogram value

# === Rigidity Tolerances ===
DEFAULT_BINS = int(os.getenv("RADON_BINS", 64))
TOL_K_SPREAD = float(os.getenv("RADON_TOL_K", 1e-6))
TOL_LINEARITY = float(os.getenv("RADON_TOL_LINEARITY", 1e-6))
TOL_CENTERED = float(os.getenv("RADON_TOL_CENTERED", 1e-6))
TOL_WIDTH = float(os.getenv("RADON_TOL_WIDTH", 1e-6))
TOL_G_COLLAPSE = float(os.getenv("RADON_TOL_G", 1e-4))
TOL_SECTION = float(os.getenv("RADON_TOL_SECTION", 1e-6))

# === Oracle Verification ===
TOL_ORACLE = float(os.getenv("RADON_TOL_ORACLE", 1e-6))
TOL_FOURIER = float(os.getenv("RADON_TOL_FOURIER", 1e-4))
KERNEL_REGULARIZATION = 2e-3
TOL_KERNEL = float(os.getenv("RADON_TOL_KERNEL", 1e-3))
TOL_MOMENT_ROUTES = 1e-8
TOL_XRAY = 1e-8
DEFAULT_CHORDS = int(os.getenv("RADON_CHORDS", 1000))

# === Logging ===
LOG_LEVEL = os.getenv("RADON_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
