#config.py
import os
from dotenv import load_dotenv


load_dotenv()

# ==== Base Directories ==== #
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
LOG_DIR = os.path.join(BASE_DIR, 'logs')
APP_ROOT = os.path.dirname(BASE_DIR)
CONFIG_DIR = os.path.join(APP_ROOT, 'config')
DATA_DIR = os.path.join(APP_ROOT, 'data')
RESULTS_DIR = os.getenv('OFJDAR_RESULTS_DIR', os.path.join(APP_ROOT, 'results'))

# ==== Ensure directories exist ==== #
def ensure_directories_exist():
    """Ensure necessary directories exist before use."""
    os.makedirs(LOG_DIR, exist_ok=True)

ensure_directories_exist()


# ==== File Paths ==== #
ADAPT_CONFIG_FILE = os.path.join(CONFIG_DIR, 'adapt_config.json')
EXPERIMENT_CONFIG_FILE = os.path.join(CONFIG_DIR, 'experiment_config.json')
SIM_TO_EXP_CONFIG_FILE = os.path.join(CONFIG_DIR, 'sim_to_exp_config.json')

# ==== Logger Settings ==== #
LOG_FILE = os.path.join(LOG_DIR, 'app.log')
LOGGER_NAME = 'OFJDAR'
LOG_LEVEL = os.getenv('OFJDAR_LOG_LEVEL', 'INFO').upper()

# ==== Worker Settings ==== #
DEFAULT_WORKERS = int(os.getenv('OFJDAR_WORKERS', '1'))

# ==== Dataset Settings ==== #
DEFAULT_N_SENSORS = 20
DEFAULT_LABEL_GRID = {"start": 0.5, "stop": 50.0, "step": 0.5}  # mm
DEFAULT_PANEL_SEED = 7715
DAMAGE_INDEX_TOL = 1e-12
ALPHA_RANGE = (0.5, 2.0)
BETA_RANGE = (-0.1, 0.1)
TAU_RANGE = (10.0, 40.0)  # mm
BETA_SHIFT_SPREAD = 0.1
DEFAULT_STRAIN_SCALE = 10.0
IRREGULAR_CONCENTRATION = 1.0  # 1 = uniform spacing
CSV_LABEL_COLUMN = 'label'
CSV_FEATURE_PREFIX = 'feature_'

# ==== Fuzzy Settings ==== #
DEFAULT_QUANTILES = (0.05, 0.50, 0.95)
KDE_BANDWIDTH_FACTOR = 1.06  # Silverman
KDE_GRID_POINTS = 2048
KDE_GRID_PAD = 3.0  # bandwidths on each side
NORMALIZATION_TOL = 1e-8

# ==== Adaptation Settings ==== #
DEFAULT_LAMBDA = 1.0
DEFAULT_SUBSPACE_DIM = 100
DEFAULT_N_CLASSES = 3
DEFAULT_MAX_ITERS = 10
DEFAULT_TOL = 1e-3  # scaled-label units
DEFAULT_RANK_TOL = 1e-8
PENCIL_JITTER = 1e-9
DEFAULT_GAMMA_EXPONENTS = (-10, -8, -6, -4, -2, 0, 2, 4)
PENCIL_SCALINGS = ("relative", "absolute")
DEFAULT_PENCIL_SCALING = "relative"

# ==== Regressor Settings ==== #
GPR_JITTER_LADDER = (1e-8, 1e-6, 1e-4)
GPR_LENGTHSCALE_FACTORS = (0.25, 0.5, 1.0, 2.0, 4.0)
GPR_NOISE_FACTORS = (1e-6, 1e-4, 1e-2)
DEFAULT_REGRESSOR = 'gpr'

# ==== Protocol Settings ==== #
DEFAULT_N_TL0 = 5
DEFAULT_DELTA_N = (1, 5, 10)
DEFAULT_NOISE_LEVELS = (0.0, 5.0, 10.0)
