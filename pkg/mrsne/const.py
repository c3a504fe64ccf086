"""Constants and defaults for MR-SNE."""

# Domain ids as they appear in files and on Embedding rows
DOMAIN_1 = 1
DOMAIN_2 = 2

# Cross-graph preprocessing modes
NORM_UNNORM = "unnorm"
NORM_NORM = "norm"
NORM_PMI = "pmi"

# Optimizer schedule (T=500, eta=100, alpha=0.5, decay by 1/10 every 400)
DEFAULT_ITERATIONS = 500
DEFAULT_LEARNING_RATE = 100.0
DEFAULT_MOMENTUM = 0.5
DEFAULT_LR_DECAY_EVERY = 400
DEFAULT_LR_DECAY_FACTOR = 0.1
DEFAULT_DIM = 2
DEFAULT_SEED = 0

# The usual t-SNE choice; data with fewer items per domain need a smaller value
DEFAULT_PERPLEXITY = 30.0

# N(0, 1e-4) initialisation, read as variance
INIT_STD = 1e-2

# Perplexity calibration
CALIBRATION_TOLERANCE = 1e-5  # relative, on 2**H
CALIBRATION_MAX_ITER = 100
CALIBRATION_BRACKET = 1e20  # sigma searched in [rho / BRACKET, rho * BRACKET]

# Mass checks on probability matrices
MASS_TOLERANCE = 1e-10

# CDMCA / regularized CCA
CCA_REGULARIZATION = 0.01
CCA_RANK_TOLERANCE = 1e-12

# Neighborhood metrics: default k grid
DEFAULT_METRIC_KS = (1, 2, 5, 10, 20, 50, 100, 200, 500)

# Log the KL objective every this many iterations at debug level
KL_LOG_EVERY = 50

# SVG scatter plot
SVG_SIZE = 1000
SVG_MARGIN = 0.05
SVG_POINT_RADIUS = 3
SVG_POINT_COLOR = "#1f4e8c"
SVG_LABEL_COLOR = "green"
SVG_FONT_SIZE = 12

# Hint printed when a one-hot style domain makes the perplexity unreachable
DEGENERATE_DOMAIN_HINT = "set β₂=0 / --drop-domain2 for degenerate (e.g. one-hot) domains"
