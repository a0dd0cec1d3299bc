"""From-scratch real-order Bessel/Hankel evaluation and magnitude envelopes."""

from .asymptotics import (
    EVANESCENT,
    OSCILLATORY,
    TRANSITION,
    CalibrationError,
    EnvelopeConstants,
    RemainderCaps,
    c0_tilde,
    calibrate_envelope,
    classify_regime,
    default_calibration_grid,
    envelope_bounds,
    envelope_log_bounds,
    eta2,
    matviyenko_remainder,
    required_z0,
    uniform_interval_constant,
)
from .bessel import (
    OverflowWarning,
    RangeWarning,
    UnderflowWarning,
    bessel_j,
    bessel_y,
    hankel1,
    hankel1_01,
    hankel1_log_abs,
    hankel1_polar,
    jy01,
)
from .core import BesselJY, ConvergenceError, Scaled, besseljy, halfint_jy

__all__ = [
    "EVANESCENT",
    "OSCILLATORY",
    "TRANSITION",
    "BesselJY",
    "CalibrationError",
    "ConvergenceError",
    "EnvelopeConstants",
    "OverflowWarning",
    "RangeWarning",
    "RemainderCaps",
    "Scaled",
    "UnderflowWarning",
    "bessel_j",
    "bessel_y",
    "besseljy",
    "c0_tilde",
    "calibrate_envelope",
    "classify_regime",
    "default_calibration_grid",
    "envelope_bounds",
    "envelope_log_bounds",
    "eta2",
    "halfint_jy",
    "hankel1",
    "hankel1_01",
    "hankel1_log_abs",
    "hankel1_polar",
    "jy01",
    "matviyenko_remainder",
    "required_z0",
    "uniform_interval_constant",
]
