# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

# This file contains the shared numerical constants.

# Hermiticity check, entrywise max |h - h^dagger|.
HERMITIAN_TOL = 1e-10
# Jacobi sweeps stop once the off-diagonal Frobenius norm drops below
# this value times max(1, ||h||_F).
JACOBI_OFFDIAG_TOL = 1e-12
JACOBI_MAX_SWEEPS = 64
# Negative eigenvalues above -PSD_CLAMP_TOL are round-off and clamped to 0,
# anything below -PSD_REJECT_TOL is an error.
PSD_CLAMP_TOL = 1e-10
PSD_REJECT_TOL = 1e-8
# Tolerance for the quantum weight algebra residuals.
ALGEBRA_TOL = 1e-9
# Tolerance used when classifying a TLME as Hermiticity-preserving.
STRUCTURE_TOL = 1e-12

# evolve_rk4 warns when ||K|| * dt reaches this value.
STIFFNESS_LIMIT = 0.1
# theta_from_growth renormalizes every RENORM_INTERVAL steps.
RENORM_INTERVAL = 100
THETA_SLOPE_TOL = 1e-8
# Smallest weighted trace the coherence fit accepts.
SIGNAL_FLOOR = 1e-12
# Fraction of the grid, counted from the end, used by the slope fits.
FIT_FRACTION = 0.5

# Quantum jump engine.
MC_CHUNK_SIZE = 1000
MC_BATCHES = 20

# Filter stability guard on dt * ||L||^2.
FILTER_STABILITY_LIMIT = 0.1

# Micromaser truncation guard, <n> must stay below this fraction of fock_dim.
TRUNCATION_FRACTION = 0.5
TRUNCATION_WARN_FRACTION = 1 / 3

SCHEMA_VERSION = 1

# Systems up to this dimension are stepped with the dense RK4 step matrix.
DENSE_STEP_DIM = 32
