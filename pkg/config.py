"""Configuration file for the duality simulator and its scenarios."""

import math

from colorama import Fore, Style

# Check mark character
CHECK_MARK = u'\u2714'
# Cross mark character
CROSS_MARK = u'\u2718'
# Okay green colour.
OKAY_GREEN = Fore.GREEN
# Error red colour.
ERROR_RED = Fore.RED
# Normal text.
NORMAL_TEXT = Style.RESET_ALL
# Okay message prefix or suffix.
OKAY_MSG = OKAY_GREEN + CHECK_MARK + NORMAL_TEXT
# Error message prefix or suffix.
ERROR_MSG = ERROR_RED + CROSS_MARK + NORMAL_TEXT

# Largest Hilbert-space dimension a FockSpace may have.
MAX_HILBERT_DIMENSION = 10 ** 6
# Largest dimension whose lifted network unitary is kept in the cache.
CACHED_LIFT_DIMENSION = 1024

# Allowed deviation of trace(rho) from one.
TRACE_TOLERANCE = 1e-10
# Allowed elementwise deviation of rho from rho^dagger.
HERMITICITY_TOLERANCE = 1e-12
# Smallest eigenvalue accepted as positive.
POSITIVITY_TOLERANCE = 1e-9
# Imaginary part allowed on moments that must be real.
IMAGINARY_TOLERANCE = 1e-10
# Imaginary part allowed on mean photon numbers.
MEAN_PHOTON_IMAGINARY_TOLERANCE = 1e-12

# Probability lost to truncation above which a state constructor refuses the cutoff.
TAIL_MASS_THRESHOLD = 1e-6
# Allowed deviation of probabilities and mixture weights from summing to one.
PROBABILITY_SUM_TOLERANCE = 1e-12
# Relative truncation error allowed on the moments of a random classical component.
CLASSICAL_TRUNCATION_ERROR = 1e-12
# Number of coherent components in a random classical mixture (inclusive bounds).
CLASSICAL_MIN_COMPONENTS = 3
CLASSICAL_MAX_COMPONENTS = 6

# Frobenius residual of U^dagger U - I accepted for a mode unitary.
UNITARITY_TOLERANCE = 1e-10

# Margin below which a classical bound counts as violated.
VIOLATION_EPSILON = 1e-9
# Normalization below which a ratio is reported as undefined or infinite.
UNDEFINED_THRESHOLD = 1e-12
# Agreement required between the two algebraic forms of X.
CLOSED_FORM_TOLERANCE = 1e-10
# Agreement required between the two forms of the HOM coincidence probability.
HOM_FORM_TOLERANCE = 1e-12
# Agreement required between the two routes to V_HOM.
V_HOM_TOLERANCE = 1e-10

# Drift allowed when a state-pathway result is recomputed at doubled cutoff.
CUTOFF_DRIFT_TOLERANCE = 1e-6
# Agreement required for pinned values, HOM endpoints and fringe-scan checks.
CHECK_TOLERANCE = 1e-9
# Agreement required between a fitted fringe and the predicted visibility.
FRINGE_FIT_TOLERANCE = 1e-6

# Float format used in CSV, key-value and console tables.
FLOAT_FORMAT = '{:.12g}'

# Default log grid of the g2_auto and zeta sweeps.
DEFAULT_LOG_GRID_MIN = 1e-2
DEFAULT_LOG_GRID_MAX = 1e2
DEFAULT_SWEEP_POINTS = 201
# Intensity ratio used by the g2_auto sweep.
DEFAULT_SWEEP_ZETA = 2.0
# Cross correlation assumed by both sweeps.
DEFAULT_SWEEP_G2_AB = 1.0
# Autocorrelations assumed by the zeta sweep.
DEFAULT_SWEEP_G2_AA = 0.25
DEFAULT_SWEEP_G2_BB = 1.0
# Mean photon number of mode B in parametric records.
DEFAULT_NBAR_B = 1.0

# Default per-mode cutoff for state-pathway scenarios.
DEFAULT_CUTOFF = 4
# Default per-mode cutoff for the fringe scan (coherent inputs).
DEFAULT_FRINGE_CUTOFF = 10
# Default number of distinguishability angles for the HOM dip.
DEFAULT_HOM_DIP_POINTS = 51
# Default number of phases for the fringe scan.
DEFAULT_FRINGE_POINTS = 73
# Default range of the fringe phase.
DEFAULT_FRINGE_MAX = 2 * math.pi
# Default inputs of the HOM dip, fringe scan and state run.
DEFAULT_HOM_INPUTS = ('fock(1)', 'fock(1)')
DEFAULT_FRINGE_INPUTS = ('coherent(1.0)', 'coherent(1.0)')
DEFAULT_STATE_RUN_ORDER = 2
# Default seed of the classical-ensemble scenario input.
DEFAULT_SEED = 0

# Section of the scenario configuration file.
CONFIG_SECTION = 'scenario'

# CSV column order per scenario.
SWEEP_G2AUTO_COLUMNS = ('g2_auto', 'D2', 'V2', 'sqrt_X2', 'violated')
SWEEP_ZETA_COLUMNS = ('zeta', 'D2', 'V2', 'sqrt_X2', 'violated')
HOM_DIP_COLUMNS = ('chi', 'coincidence', 'P_parallel_ref', 'P_perp_ref')
FRINGE_SCAN_COLUMNS = ('theta', 'P_C', 'P_D')
REPORT_COLUMNS = ('n', 'k', 'D', 'V_phase', 'V_intensity', 'X_phase', 'X_intensity', 'V_HOM',
                  'phase_margin', 'phase_positive', 'cs_margin', 'cs_classical', 'violated',
                  'closed_form_residual')
PAPER_CHECK_COLUMNS = ('check', 'pathway', 'expected', 'computed', 'delta')
STATE_RUN_COLUMNS = ('quantity', 'value')

# Process exit codes.
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_CHECK_FAILURE = 3
