"""Executable large-order/large-argument bounds for |H^(1)_nu(z)|.

The magnitude of the outgoing radial factor behaves in three regimes split
by the turning point nu ~ z, with a transition band of width ~ nu^(1/3):

* oscillatory  (z - nu >= C0 nu^(1/3), or nu = 0):  ~ (z^2-nu^2)^(-1/4)
* transition   (|z - nu| <= C0 nu^(1/3)):           ~ nu^(-1/3)
* evanescent   (nu - z >= C0 nu^(1/3)):  ~ exp(eta2(nu,z)) (nu^2-z^2)^(-1/4)

The theory only asserts that constants (z0, C0, A0) exist; this module finds
working values empirically on a grid and exposes the resulting two-sided
envelope, which downstream stability bounds consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import besseljy

OSCILLATORY = "oscillatory"
TRANSITION = "transition"
EVANESCENT = "evanescent"

_LN2 = math.log(2.0)


class CalibrationError(RuntimeError):
    """No admissible constants bracket the magnitude on the given grid."""


@dataclass(frozen=True)
class EnvelopeConstants:
    """Calibrated (z0, C0, A0) for the three-regime envelope.

    Invariants enforced at construction: z0 >= 1, A0 >= 1, and the side
    conditions needed by the stability machinery,

        z0 >= C0_tilde * max(2, (N-2)/2)      and
        z0 >= C0_tilde * (2 C0)^(3/2)

    with C0_tilde = max(2, 1 + C0 * 2^(2/3)) the smallest constant >= 2 such
    that nu + C0 nu^(1/3) <= C0_tilde nu for every nu >= 1/2.

    ``c1`` is the measured sup of |J_nu(z)/Y_nu(z)| over the calibration
    points with nu >= z >= z0 (must be < 1: |H| and |Y| are then equivalent
    up to 1 -+ c1 there).
    """

    z0: float
    c0: float
    a0: float
    c1: float | None = None
    n_dim: int = 2

    def __post_init__(self) -> None:
        if self.z0 < 1.0:
            raise ValueError("z0 must be >= 1")
        if self.a0 < 1.0:
            raise ValueError("A0 must be >= 1")
        if self.c0 <= 0.0:
            raise ValueError("C0 must be > 0")
        zmin = required_z0(self.c0, self.n_dim)
        if self.z0 < zmin * (1.0 - 1e-12):
            raise ValueError(
                f"z0={self.z0} violates the side conditions (needs >= {zmin})"
            )

    @property
    def c0_tilde(self) -> float:
        return c0_tilde(self.c0)


def c0_tilde(c0: float) -> float:
    """Smallest C >= 2 with nu + c0 nu^(1/3) <= C nu for all nu >= 1/2."""
    return max(2.0, 1.0 + c0 * 2.0 ** (2.0 / 3.0))


def required_z0(c0: float, n_dim: int = 2) -> float:
    """Smallest z0 compatible with the envelope side conditions."""
    ct = c0_tilde(c0)
    return max(1.0, ct * max(2.0, (n_dim - 2) / 2.0), ct * (2.0 * c0) ** 1.5)


def classify_regime(nu: float, z: float, consts: EnvelopeConstants) -> str:
    """Which of the three envelope regimes (nu, z) falls in.

    Ties |z - nu| = C0 nu^(1/3) resolve to the transition band (both bounds
    hold there; the band is the closed set).
    """
    if z < consts.z0:
        raise ValueError(f"z={z} below the envelope threshold z0={consts.z0}")
    if nu == 0.0:
        return OSCILLATORY
    width = consts.c0 * nu ** (1.0 / 3.0)
    if z - nu > width:
        return OSCILLATORY
    if nu - z > width:
        return EVANESCENT
    return TRANSITION


def eta2(nu: float, z: float) -> float:
    """Decay exponent nu*log(nu/z + sqrt((nu/z)^2 - 1)) - sqrt(nu^2 - z^2).

    Strictly positive for 0 < z < nu, homogeneous of degree 1, and -> 0 as
    z -> nu-.
    """
    if not (0.0 < z < nu):
        raise ValueError(f"eta2 requires 0 < z < nu, got nu={nu}, z={z}")
    t = nu / z
    root = math.sqrt(t * t - 1.0)
    return nu * math.log(t + root) - z * root


def envelope_log_bounds(
    nu: float, z: float, consts: EnvelopeConstants
) -> tuple[float, float]:
    """(log lower, log upper) envelope for |H^(1)_nu(z)|; never overflows."""
    regime = classify_regime(nu, z, consts)
    la = math.log(consts.a0)
    if regime == OSCILLATORY:
        centre = -0.25 * math.log(z * z - nu * nu)
    elif regime == TRANSITION:
        centre = -(1.0 / 3.0) * math.log(nu)
    else:
        centre = eta2(nu, z) - 0.25 * math.log(nu * nu - z * z)
    return centre - la, centre + la


def envelope_bounds(
    nu: float, z: float, consts: EnvelopeConstants
) -> tuple[float, float]:
    """Linear-scale envelope (lower, upper); upper may be inf if it overflows."""
    lo, hi = envelope_log_bounds(nu, z, consts)
    lower = math.exp(lo) if lo < 709.0 else math.inf
    upper = math.exp(hi) if hi < 709.0 else math.inf
    return lower, upper


@dataclass(frozen=True)
class RemainderCaps:
    """First-order remainder caps of the uniform oscillatory/evanescent forms.

    r1_cap bounds the relative remainder of the oscillatory representation
    (z > nu); r2_cap the evanescent one (z < nu).  The inapplicable side is
    None.  cap = exp(g_tilde) * g_tilde with g_tilde = 2 / (3 g^(3/2)) and
    g = |z - nu| / max(z, nu)^(1/3).
    """

    r1_cap: float | None
    r2_cap: float | None


def matviyenko_remainder(nu: float, z: float) -> RemainderCaps:
    if nu == z:
        raise ValueError("remainder caps are undefined at nu == z")
    if z > nu:
        g1 = (z - nu) / z ** (1.0 / 3.0)
        gt = 2.0 / (3.0 * g1**1.5)
        cap = math.exp(gt) * gt if gt < 700.0 else math.inf
        return RemainderCaps(r1_cap=cap, r2_cap=None)
    g2 = (nu - z) / nu ** (1.0 / 3.0)
    gt = 2.0 / (3.0 * g2**1.5)
    cap = math.exp(gt) * gt if gt < 700.0 else math.inf
    return RemainderCaps(r1_cap=None, r2_cap=cap)


def _round_up_2sig(value: float) -> float:
    if value <= 0.0:
        return 1.0
    exp = math.floor(math.log10(value))
    scale = 10.0 ** (exp - 1)
    return math.ceil(value / scale - 1e-12) * scale


def calibrate_envelope(
    grid: list[tuple[float, float]],
    c0_candidates: list[float],
    n_dim: int = 2,
    a0_limit: float = 100.0,
) -> EnvelopeConstants:
    """Find the smallest A0 (2 significant digits) bracketing |H| on the grid.

    For each candidate C0 the threshold z0 is the smallest value meeting the
    side conditions; grid points with z below that z0 are outside the
    envelope's domain and are skipped.  Raises CalibrationError if no
    candidate achieves A0 <= a0_limit, reporting the worst point.
    """
    if not grid:
        raise ValueError("calibration grid is empty")
    if any(z < 1.0 for _, z in grid):
        raise ValueError("calibration grid must have z >= 1")

    # |H| and J/Y at each grid point, computed once
    values = []
    for nu, z in grid:
        r = besseljy(nu, z)
        values.append((nu, z, r.hankel_log_abs(), r))

    best: EnvelopeConstants | None = None
    worst_point = None
    for c0 in c0_candidates:
        z0 = required_z0(c0, n_dim)
        trial = EnvelopeConstants(z0=z0, c0=c0, a0=1.0, n_dim=n_dim)
        need = 0.0
        arg = None
        used = 0
        for nu, z, log_h, _ in values:
            if z < z0:
                continue
            used += 1
            lo, hi = envelope_log_bounds(nu, z, trial)
            centre = 0.5 * (lo + hi)
            gap = abs(log_h - centre)
            if gap > need:
                need = gap
                arg = (nu, z)
        if used == 0:
            continue
        a0 = max(1.0, _round_up_2sig(math.exp(need)))
        if worst_point is None or a0 < getattr(best, "a0", math.inf):
            worst_point = arg
        if a0 <= a0_limit and (best is None or a0 < best.a0):
            c1 = _measure_c1(values, z0)
            best = EnvelopeConstants(z0=z0, c0=c0, a0=a0, c1=c1, n_dim=n_dim)
    if best is None:
        raise CalibrationError(
            f"no candidate C0 in {c0_candidates} brackets the grid with "
            f"A0 <= {a0_limit}; worst point {worst_point}"
        )
    return best


def _measure_c1(values, z0: float) -> float | None:
    """sup |J/Y| over calibration points with nu >= z >= z0."""
    sup = 0.0
    seen = False
    for nu, z, _, r in values:
        if nu >= z >= z0:
            seen = True
            ratio = math.exp(r.j.log_abs - r.y.log_abs)
            sup = max(sup, ratio)
    return sup if seen else None


def default_calibration_grid(
    nu_max: float = 200.0,
    z_min: float = 1.0,
    z_max: float = 400.0,
    nu_step: float = 0.5,
    z_factor: float = 1.05,
) -> list[tuple[float, float]]:
    """nu-step 0.5, z multiplicative step 1.05: resolves the nu^(1/3) band."""
    grid = []
    z_values = []
    z = z_min
    while z <= z_max:
        z_values.append(z)
        z *= z_factor
    nu = 0.0
    while nu <= nu_max:
        for z in z_values:
            grid.append((nu, z))
        nu += nu_step
    return grid


def uniform_interval_constant(z1: float, z2: float, nu_cap: float | None = None) -> float:
    """Empirical constant C >= 1 for the bounded-argument order-decay bounds.

    On z in [z1, z2] the magnitude |H^(1)_nu(z)| is bounded above and below
    by C^{+-1} (2/(pi nu))^{1/2} (e z / (2 nu))^{-nu} for nu >= 1/2, and
    C^{-1} <= |H_0| <= C.  The sup is measured on a mesh (the ratio tends to
    1 as nu grows, so a finite nu cap suffices).
    """
    if not (0.0 < z1 < z2):
        raise ValueError("need 0 < z1 < z2")
    if nu_cap is None:
        nu_cap = max(8.0, 3.0 * z2 + 40.0)
    c = 1.0
    n_z = max(24, int(40 * math.log(z2 / z1)) + 1)
    for iz in range(n_z + 1):
        z = z1 * (z2 / z1) ** (iz / n_z)
        r0 = besseljy(0.0, z)
        log_h0 = r0.hankel_log_abs()
        c = max(c, math.exp(abs(log_h0)))
        nu = 0.5
        while nu <= nu_cap:
            r = besseljy(nu, z)
            log_form = 0.5 * math.log(2.0 / (math.pi * nu)) - nu * math.log(
                math.e * z / (2.0 * nu)
            )
            c = max(c, math.exp(abs(r.hankel_log_abs() - log_form)))
            nu += 0.5
    return c
