"""Global numerical tolerances shared across modules."""

ANGLE_TOL = 1e-9
BARY_TOL = 1e-9
MEAN_TOL = 1e-9
POLE_TOL = 1e-13
RANK_RTOL = 1e-9
PSD_RTOL = 1e-9
TWO_PI = 6.283185307179586
