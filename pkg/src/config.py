"""
Default settings shared by the library, the CLI and the study runner.
"""

# Multiplier bootstrap
DEFAULT_B = 200
MIN_RECOMMENDED_B = 50
MAX_MULTIPLIER_REDRAWS = 1000

# Quadrature grid over [0,1]^3 (m points per axis, midpoint rule)
DEFAULT_GRID_M = 20

# Test levels
DEFAULT_ALPHA = 0.05
STUDY_ALPHAS = (0.1, 0.05)

# The penalty constant k_n always uses this bootstrap quantile
PENALTY_QUANTILE = 0.05

# Bandwidth: "auto" means n^(-1/4), clipped below 1/2
AUTO_BANDWIDTH_EXPONENT = -0.25
AUTO_BANDWIDTH_CAP = 0.49

# Sample size thresholds for warnings / errors
MIN_SAMPLE_SIZE = 2
WARN_SAMPLE_SIZE = 50
SMALL_SAMPLE_SIZE = 20

# Monte Carlo study
DEFAULT_RUNS = 200

DEFAULT_TIE_POLICY = "random"
TIE_POLICIES = ("error", "random")
STATISTICS = ("L2", "KS")
HYPOTHESES = ("associativity", "archimedeanity")

# Lattice index guard: n*u within this distance of an integer counts as that integer
LATTICE_TOL = 1e-9

# Calibration of the asymmetric negative logistic dependence parameter
LAMBDA_BISECTION_XTOL = 1e-10
