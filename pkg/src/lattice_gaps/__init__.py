"""SL(2,Z) norm-ball orbits in the plane and their gaps around rational lines."""

from .ball import BallSpec, count_ball, enumerate_ball, enumerate_ball_naive
from .geometry import (
    height_sq,
    horocycle,
    period,
    period_witness,
    primitive_decompose,
    section,
    tautological_identity,
)
from .numeric import Mat2, UnimodularMatrix, frobenius_norm_sq, mat_apply, mat_mul
from .spectrum import nearest_primitive, spectrum_curve, spectrum_value

__version__ = "0.1.0"
