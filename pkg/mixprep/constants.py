# Tolerance ledger and fixed physical constants shared by every app.

# Physicality checks: hermiticity, unit trace, positive semidefiniteness.
PHYSICAL_TOL = 1e-10
# Loose physicality used for generated and reconstructed states.
GENERATED_PHYSICAL_TOL = 1e-9
NORMALIZATION_TOL = 1e-10
UNITARY_TOL = 1e-10
SYMMETRIC_TOL = 1e-10

RECONSTRUCTION_TOL = 1e-9
CROSS_CHECK_TOL = 1e-7

# Eigenvalues (and weights) below this count as zero.
RANK_CUTOFF = 1e-12
ZERO_WEIGHT = 1e-12
# Relative eigenvalue floor for matrix square roots; round-off sits near 1e-17.
SQRT_CUTOFF = 1e-14

# Preconcurrence equalization.
EQUALIZATION_TOL = 1e-10
EQUALIZATION_MAX_ITER = 500

# Takagi singular values closer than this share a block.
TAKAGI_CLUSTER_TOL = 1e-9

WAVEPLATE_TOL = 1e-9

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact
DEFAULT_KAPPA = 10.0

DEFAULT_SWEEP_POINTS = 500
DEFAULT_ORACLE_RESOLUTION = 1e-3

