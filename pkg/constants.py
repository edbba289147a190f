"""Centralized constants for the norm library and its CLI."""

# ==================== NUMERIC POLICY ====================

# Consecutive values closer than this are merged during canonicalization
MERGE_TOL = 1e-12

# Absolute floor for norm-value comparisons
ABS_TOL_FLOOR = 1e-12

# Brute-force enumeration limit (number of nondecreasing index tuples)
BRUTE_FORCE_CAP = 5_000_000

# Finite-difference step control for value extraction
INITIAL_EPSILON = 0.25
HALVING_FACTOR = 0.5
MAX_HALVINGS = 60


# ==================== NORM CATALOG ====================

NAMED_S = 'S'
NAMED_LAMBDA = 'Lambda'
NAMED_SN = 'S_n'
NAMED_SN_E = 'S_n_e'
NAMED_LN = 'L_n'

NAMED_FAMILIES = (NAMED_S, NAMED_LAMBDA, NAMED_SN, NAMED_SN_E, NAMED_LN)

# Families that need an explicit n
INDEXED_FAMILIES = (NAMED_SN, NAMED_SN_E, NAMED_LN)

CLASSIC_NORMS = ('sup', 'range', 'tv', 'tail', 'asym')

SPECTRUM_FAMILIES = ('S', 'L')

# Default lower-bound catalog for pseudo-distance estimates
CATALOG_MAX_SN = 8
CATALOG_MAX_LN = 4


# ==================== DOCUMENT FORMATS ====================

FORMAT_BREAKPOINTS = 'breakpoints'
FORMAT_PROFILE = 'profile'

NORM_KIND_WEIGHTS = 'weights'
NORM_KIND_NAMED = 'named'
NORM_KIND_CLASSIC = 'classic'

OUTPUT_FORMATS = ('json', 'csv')


# ==================== EXIT CODES ====================

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
