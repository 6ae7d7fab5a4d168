"""General constants."""
from __future__ import annotations

VERSION = "1.0.0"

HBAR = 2.0
"""Vacuum variance is 1 per quadrature."""

# Tolerances
ORTHOGONALITY_TOLERANCE = 1e-10
DFT_TOLERANCE = 1e-12
SYMMETRY_TOLERANCE = 1e-12
PHYSICALITY_TOLERANCE = 1e-9
ROUND_TRIP_TOLERANCE = 1e-9
ORACLE_TOLERANCE = 1e-12
IMAGINARY_TOLERANCE = 1e-12
"""Largest imaginary residue a real field may carry out of an inverse transform."""
UNITARITY_TOLERANCE = 1e-10
SCHMIDT_TAIL = 1e-14

# One-sided Jacobi SVD
JACOBI_MAX_SWEEPS = 60
JACOBI_EPSILON = 2.220446049250313e-16
"""Machine epsilon; the off-diagonal threshold scales it by the row count."""

# Encoding
DEFAULT_MAX_SQUEEZE = 6.0
DEFAULT_SCALE_THRESHOLD = 2.0

# Filtering experiment
DEFAULT_SIGNAL_SIZE = 64
DEFAULT_SIGNAL_COMPONENTS: tuple[tuple[int, int, float], ...] = (
    (3, 3, 1.0),
    (7, 0, 0.5),
    (0, 5, 0.5),
)
"""(row frequency, column frequency, amplitude) of each cosine product."""
DEFAULT_NOISE_STD = 1.0
DEFAULT_SEED = 0
DEFAULT_CUTOFF = 10
DEFAULT_SWEEP_SEEDS = 20

# Heat experiment
DEFAULT_HEAT_SIZE = 32
DEFAULT_ALPHA = 0.05
DEFAULT_DT = 0.2
DEFAULT_STEPS = 4

# Gate kinds
GATE_TMS = "tms"
GATE_ROTATION = "rotation"
GATE_BEAMSPLITTER = "beamsplitter"
GATE_LOSS = "loss"
GATE_INTERFEROMETER = "interferometer"
GATE_PERMUTATION = "permutation"
PASSIVE_GATES = (GATE_ROTATION, GATE_BEAMSPLITTER, GATE_INTERFEROMETER, GATE_PERMUTATION)

# Mask kinds
MASK_RECTANGULAR = "rectangular"
MASK_CIRCULAR = "circular"

# Configuration keys
CONF_SIZE = "size"
CONF_SEED = "seed"
CONF_SEEDS = "seeds"
CONF_SCALE = "lambda"
CONF_MAX_SQUEEZE = "max_squeeze"
CONF_COMPILE_INTERFEROMETERS = "compile_interferometers"
CONF_MATRIX = "matrix"
CONF_UNITARY = "unitary"
CONF_COMPONENTS = "components"
CONF_NOISE_STD = "noise_std"
CONF_MASK = "mask"
CONF_CLASSICAL_MASK = "classical_mask"
CONF_KIND = "kind"
CONF_CUTOFF_ROWS = "cutoff_rows"
CONF_CUTOFF_COLS = "cutoff_cols"
CONF_RADIUS = "radius"
CONF_ALPHA = "alpha"
CONF_DT = "dt"
CONF_STEPS = "steps"
CONF_PEAKS = "peaks"
CONF_CENTER = "center"
CONF_WIDTH = "width"
CONF_AMPLITUDE = "amplitude"
CONF_TOLERANCES = "tolerances"
CONF_PGM = "pgm"
CONF_WORKERS = "workers"
CONF_SIZES = "sizes"

TOL_ROUND_TRIP = "round_trip"
TOL_ORACLE = "oracle"
TOL_PHYSICALITY = "physicality"
TOL_RECONSTRUCTION = "reconstruction"

DEFAULT_TOLERANCES = {
    TOL_ROUND_TRIP: ROUND_TRIP_TOLERANCE,
    TOL_ORACLE: ORACLE_TOLERANCE,
    TOL_PHYSICALITY: PHYSICALITY_TOLERANCE,
    TOL_RECONSTRUCTION: ORTHOGONALITY_TOLERANCE,
}

# Report metrics
ATTR_MASK_SHAPE = "mask_shape"
ATTR_BINS_RETAINED = "bins_retained"
ATTR_SNR_IN = "snr_in"
ATTR_SNR_OUT = "snr_out"
ATTR_SNR_IMPROVEMENT = "snr_improvement"
ATTR_ORACLE_ERROR = "oracle_error"
ATTR_GATE_COUNT = "gate_count"
ATTR_DEPTH = "depth"
ATTR_TIME = "time"
ATTR_MAX_ERROR = "max_error"
ATTR_TOTAL_HEAT = "total_heat"

COLUMN_CLASSICAL = "Classical"
COLUMN_CV = "CV-QFL"

SNR_CLEAN = float("inf")
"""Sentinel returned by snr_db when the corrupted field equals the reference."""

# Exit codes
EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_BAD_INPUT = 2

REPORT_FILE = "report.csv"
FIELD_FILE = "field_{}.csv"
FIELD_IMAGE = "field_{}.pgm"
MESH_FILE = "mesh.txt"
GATES_FILE = "gates.csv"
SPECTRUM_RE_FILE = "spectrum_re.csv"
SPECTRUM_IM_FILE = "spectrum_im.csv"
