"""Near-field reconstruction from noisy far fields, with certified bounds.

Given a far-field L2 error level eps and an a priori near-field bound M on
the reference circle of radius R0, the reconstruction is a spectral cutoff
at the degree picked by the index equation

    (2n / (e^a k r))^(2n) eps^2 = b^(2n) M^2,

and the certified L2 error bound on the circle of radius r in [B0 R0, B1 R0]
takes one of four forms depending on the wavenumber regime:

* bounded:   log-type bound, k in a fixed compact interval;
* high:      log-type bound improving exponentially in k, valid up to
             k1(eps) ~ log(M/eps);
* extreme:   k >= k1(eps); Lipschitz term plus an exponentially small tail
             (requires the wide annulus B0 >= 3e C0_tilde / 2);
* lipschitz: k-independent multiple of eps once M <= C2 k^tau and k clears
             the log(1/eps) threshold.

All bound evaluations run in log scale internally so experiment configs with
extreme M/eps ratios (the honest way to land inside the bounded/high
hypotheses, whose mode floors scale like e^2 k r) stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .modal import ModalSpectrum, degree_count
from .specfun import EnvelopeConstants, uniform_interval_constant

BOUNDED = "bounded"
HIGH = "high"
EXTREME = "extreme"
LIPSCHITZ = "lipschitz"

_LOG_MAX = 700.0

# alpha0 solves (1/alpha0)^(1/alpha0) = e; C_alpha = 1 for alpha >= alpha0
ALPHA0 = 0.5671432904097838


class NoSolution(ArithmeticError):
    """The index equation has no admissible root above the regime floor."""


@dataclass(frozen=True)
class AnnulusGeometry:
    """Reference radius R0 and the evaluation annulus [B0 R0, B1 R0]."""

    r0: float
    b0: float
    b1: float

    def __post_init__(self) -> None:
        if not (self.r0 > 0 and 1.0 < self.b0 < self.b1):
            raise ValueError("need R0 > 0 and 1 < B0 < B1")

    @property
    def r_min(self) -> float:
        return self.b0 * self.r0

    @property
    def r_max(self) -> float:
        return self.b1 * self.r0


@dataclass(frozen=True)
class StabilityInputs:
    epsilon: float
    m_bound: float
    k: float
    r: float
    geometry: AnnulusGeometry

    def __post_init__(self) -> None:
        if not (0.0 < self.epsilon <= self.m_bound):
            raise ValueError("need 0 < epsilon <= M")
        if self.k <= 0.0:
            raise ValueError("wavenumber must be > 0")
        g = self.geometry
        if not (g.r_min - 1e-12 <= self.r <= g.r_max + 1e-12):
            raise ValueError(f"radius {self.r} outside [{g.r_min}, {g.r_max}]")

    @property
    def log_ratio(self) -> float:
        """log(M / eps), computed safely for extreme ratios."""
        return math.log(self.m_bound) - math.log(self.epsilon)


@dataclass(frozen=True)
class StabilityConstants:
    """Every constant the four bounds need, derived from one calibration.

    The envelope supplies (z0, C0, A0, c1); the rest follow the explicit
    recipes: C is the smallest constant >= e^2/2 meeting the side conditions

        C (1 - C0 z0^(-2/3)) >= 1,   2 e^(1-a) / ((1+a) B0) <= b0,
        a = sqrt(C^2-1)/C >= 2 log(4/3),

    B_tilde = (N/2) C, and the envelope-based prefactors A (high regime) and
    A_tilde (extreme regime).  C_alpha = max(1, 1/(alpha e)) is exact.
    """

    alpha: float
    c_alpha: float
    b0_decay: float  # b0 in (1/B0, 1)
    a_const: float  # a = sqrt(C^2-1)/C
    a1: float  # a - log(4/3)
    a1_tilde: float  # log(e/2)
    big_a: float  # A   (high regime)
    a_tilde: float  # A~  (extreme regime, depends on N only)
    b_tilde: float  # B~ = (N/2) C
    c_const: float  # C >= e^2/2
    c0_tilde: float
    c1: float
    k0: float
    n_dim: int
    envelope: EnvelopeConstants
    geometry: AnnulusGeometry

    @property
    def extreme_b0_floor(self) -> float:
        """B0 must reach 3 e C0_tilde / 2 for the extreme-regime bound."""
        return 1.5 * math.e * self.c0_tilde


def c_alpha_of(alpha: float) -> float:
    """Smallest C_alpha with n log n <= C_alpha n^(1+alpha) for n >= e."""
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    return max(1.0, 1.0 / (alpha * math.e))


def derive_constants(
    envelope: EnvelopeConstants,
    geometry: AnnulusGeometry,
    alpha: float = 1.0,
    b0_decay: float | None = None,
    k0: float | None = None,
    n_dim: int = 2,
) -> StabilityConstants:
    if envelope.c1 is None or not (0.0 < envelope.c1 < 1.0):
        raise ValueError("envelope must carry a measured c1 in (0, 1)")
    b_big = geometry.b0
    if b0_decay is None:
        b0_decay = math.exp(0.5 * math.log(1.0 / b_big))  # log-midpoint
    if not (1.0 / b_big < b0_decay < 1.0):
        raise ValueError("b0 must lie in (1/B0, 1)")

    z0, c0, a0 = envelope.z0, envelope.c0, envelope.a0
    ct = envelope.c0_tilde
    c_floor = max(math.e**2 / 2.0, 1.0 / (1.0 - c0 * z0 ** (-2.0 / 3.0)))

    def a_of(c: float) -> float:
        return math.sqrt(c * c - 1.0) / c

    def cond_b0(c: float) -> bool:
        a = a_of(c)
        return 2.0 * math.exp(1.0 - a) / ((1.0 + a) * b_big) <= b0_decay

    c_const = c_floor
    while not (cond_b0(c_const) and a_of(c_const) >= 2.0 * math.log(4.0 / 3.0)):
        c_const *= 1.05
        if c_const > 1e6:
            raise ValueError("no admissible C: annulus too thin for this b0")

    a = a_of(c_const)
    a1 = a - math.log(4.0 / 3.0)
    c1 = envelope.c1

    # high-regime prefactor A = max((pi/2) A1^2, A2^2)
    a_t1 = a0 * max(
        1.0 / math.sqrt(z0),
        (2.0 * c0 * 0.5 ** (4.0 / 3.0) + c0 * c0 * 0.5 ** (2.0 / 3.0)) ** -0.25,
    )
    a_t2 = a0 * 2.0 ** (1.0 / 3.0)
    a_t3 = (1.0 + c1) / (1.0 - c1) * a0 * math.sqrt(2.0 / (a * math.exp(a1)))
    a_one = max(a_t1 * math.sqrt(z0), a_t2 * math.sqrt(z0), a_t3)
    a_two = math.sqrt(b0_decay) * a0 * a0 / math.sqrt(a)
    big_a = max(math.pi / 2.0 * a_one**2, a_two**2)

    # extreme-regime prefactor (depends on the dimension only)
    c_hat = max(1.0, (c0 * z0 ** (4.0 / 3.0)) ** -0.25 * math.exp(-math.sqrt(c0 * z0 ** (4.0 / 3.0))))
    a_hat = max(1.0, (2.0 * c0) ** -0.25) * c_hat * a0 * a0
    a_tilde = max(math.pi / 2.0 * a0 * a0 * ct / math.sqrt(ct * ct - 1.0), a_hat**2)

    if k0 is None:
        k0 = z0 / geometry.r0
    if k0 * geometry.r0 < z0 * (1.0 - 1e-12):
        raise ValueError(f"k0 R0 must reach z0={z0}")

    return StabilityConstants(
        alpha=alpha,
        c_alpha=c_alpha_of(alpha),
        b0_decay=b0_decay,
        a_const=a,
        a1=a1,
        a1_tilde=math.log(math.e / 2.0),
        big_a=big_a,
        a_tilde=a_tilde,
        b_tilde=n_dim / 2.0 * c_const,
        c_const=c_const,
        c0_tilde=ct,
        c1=c1,
        k0=k0,
        n_dim=n_dim,
        envelope=envelope,
        geometry=geometry,
    )


# ---------------------------------------------------------------------------
# Index equation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncationSolution:
    n: float
    j0: int
    nu0: float


def solve_index_equation(
    log_ratio: float, a_exp: float, b_decay: float, kr: float, tol: float = 1e-12
) -> float:
    """Root n >= b e^a k r / 2 of n log(2n / (b e^a k r)) = log(M/eps).

    The left side vanishes at the bracket start and increases monotonically
    beyond it, so doubling plus bisection is unconditionally safe.
    """
    if log_ratio < 0.0:
        raise NoSolution("index equation needs eps <= M")
    scale = b_decay * math.exp(a_exp) * kr / 2.0

    def g(n: float) -> float:
        return log_ratio - n * math.log(n / scale)

    lo = scale
    if log_ratio == 0.0:
        return lo
    hi = 2.0 * scale
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise NoSolution("index equation root exceeds the double range")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if abs(g(mid)) <= tol and (hi - lo) <= 1e-12 * max(1.0, mid):
            break
    return 0.5 * (lo + hi)


def _bracket_j0(n: float, n_dim: int) -> tuple[int, float]:
    """Integer j0 with 2 nu0 - 1 <= 2n < 2 nu0 + 1, nu0 = j0 + (N-2)/2."""
    off = (n_dim - 2) / 2.0
    j0 = int(math.floor(n + 0.5 - off))
    nu0 = j0 + off
    while 2.0 * nu0 - 1.0 > 2.0 * n:
        j0 -= 1
        nu0 = j0 + off
    while 2.0 * n >= 2.0 * nu0 + 1.0:
        j0 += 1
        nu0 = j0 + off
    if j0 < 0:
        raise NoSolution(f"index equation gives negative degree (n={n})")
    return j0, nu0


def bounded_floor(constants: StabilityConstants, k2: float) -> float:
    """nu_hat for the bounded regime: max(N/2, e^2 z2 / 2), z2 = k2 B1 R0."""
    z2 = k2 * constants.geometry.r_max
    return max(constants.n_dim / 2.0, math.e**2 * z2 / 2.0)


def high_floor(constants: StabilityConstants, kr: float) -> float:
    """nu_hat(kr) = B_tilde k r for the high-frequency regime."""
    return constants.b_tilde * kr


def solve_truncation(
    inputs: StabilityInputs, constants: StabilityConstants, regime: str
) -> TruncationSolution:
    """Root of the regime's index equation plus the bracketing integer j0.

    Raises NoSolution (with both sides of the failed inequality) when the
    regime's floor condition rules the root out.
    """
    kr = inputs.k * inputs.r
    el = inputs.log_ratio
    if regime == BOUNDED:
        a_exp, b_decay = constants.a1_tilde, 1.0 / constants.geometry.b0
        nu_hat = bounded_floor(constants, inputs.k)
        floor_n = nu_hat + 0.5
        lhs, rhs = el, _cond_rhs(constants, inputs.k, inputs.k)
    elif regime == HIGH:
        a_exp, b_decay = constants.a1, constants.b0_decay
        floor_n = 1.5 * high_floor(constants, kr)
        lhs, rhs = el, _cond3_rhs(constants, kr)
    else:
        raise ValueError(f"truncation is solved for '{BOUNDED}'/'{HIGH}', not {regime!r}")
    if lhs < rhs:
        raise NoSolution(
            f"{regime} floor condition fails: log(M/eps)={lhs:.6g} < required {rhs:.6g}"
        )
    n = solve_index_equation(el, a_exp, b_decay, kr)
    if 2.0 * n < 2.0 * floor_n - 1e-9:
        raise NoSolution(
            f"index-equation root n={n:.6g} below the {regime} floor {floor_n:.6g}"
        )
    j0, nu0 = _bracket_j0(n, constants.n_dim)
    return TruncationSolution(n=n, j0=j0, nu0=nu0)


def _cond_rhs(constants: StabilityConstants, k1: float, k2: float) -> float:
    """Right side of the bounded-regime hypothesis (uniform over [k1, k2])."""
    nu_hat = bounded_floor(constants, k2)
    al, ca = constants.alpha, constants.c_alpha
    return ca * (2.0 / (math.exp(constants.a1_tilde) * k1 * constants.geometry.r0)) ** al * (
        nu_hat + 0.5
    ) ** (1.0 + al)


def _cond3_rhs(constants: StabilityConstants, kr: float) -> float:
    """Right side of the high-regime hypothesis at argument k r."""
    al, ca = constants.alpha, constants.c_alpha
    return ca * (2.0 / (constants.b0_decay * math.exp(constants.a1) * kr)) ** al * (
        1.5 * constants.b_tilde * kr
    ) ** (1.0 + al)


# ---------------------------------------------------------------------------
# Certified bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilityReport:
    regime: str
    bound: float
    log_bound: float
    truncation: TruncationSolution | None
    constants_used: StabilityConstants
    hypothesis_ok: bool
    failed_condition: str | None = None
    beta1: float | None = None
    extras: dict = field(default_factory=dict)


def _finish(log_bound: float, **kw) -> StabilityReport:
    bound = math.exp(log_bound) if log_bound < _LOG_MAX else math.inf
    return StabilityReport(bound=bound, log_bound=log_bound, **kw)


def k1_of_eps(inputs: StabilityInputs, constants: StabilityConstants) -> float:
    """Upper end of the high regime: k1(eps) ~ log(M/eps) / (B1 R0)."""
    c = constants
    return (
        (1.0 / c.geometry.r_max)
        * (2.0 / (3.0 * c.b_tilde)) ** (1.0 + c.alpha)
        * (c.b0_decay * math.exp(c.a1) / 2.0) ** c.alpha
        * inputs.log_ratio
        / c.c_alpha
    )


def bounded_regime_bound(
    inputs: StabilityInputs,
    constants: StabilityConstants,
    k1: float | None = None,
    k2: float | None = None,
    interval_constant: float | None = None,
) -> StabilityReport:
    """Log-type bound for k in the compact interval [k1, k2].

    The interval defaults to the degenerate [k, k].  The prefactor constant
    is calibrated on [k1 R0, k2 B1 R0] unless supplied.
    """
    k1 = inputs.k if k1 is None else k1
    k2 = inputs.k if k2 is None else k2
    if not (k1 <= inputs.k <= k2):
        raise ValueError("k must lie in the declared interval")
    c = constants
    geo = c.geometry
    if interval_constant is None:
        interval_constant = uniform_interval_constant(k1 * geo.r0, k2 * geo.r_max)
    a_tilde = max(2.0 * interval_constant**2 / math.e, interval_constant**4)
    rhs = _cond_rhs(c, k1, k2)
    ok = inputs.log_ratio >= rhs
    failed = None if ok else f"log(M/eps)={inputs.log_ratio:.6g} < {rhs:.6g}"
    expo = math.log(geo.b0) * (
        (math.exp(c.a1_tilde) * k1 * geo.r0 / 2.0) ** c.alpha * inputs.log_ratio / c.c_alpha
    ) ** (1.0 / (1.0 + c.alpha))
    log_bound = (
        0.5 * math.log(2.0 * a_tilde)
        + math.log(geo.b0)
        + math.log(inputs.m_bound)
        - expo
    )
    trunc = None
    if ok:
        try:
            trunc = solve_truncation(inputs, c, BOUNDED)
        except NoSolution:
            trunc = None
    return _finish(
        log_bound,
        regime=BOUNDED,
        truncation=trunc,
        constants_used=c,
        hypothesis_ok=ok,
        failed_condition=failed,
        extras={"interval_constant": interval_constant, "a_tilde_interval": a_tilde},
    )


def beta1_of(inputs: StabilityInputs, constants: StabilityConstants) -> float:
    """Hoelder exponent at the high-regime endpoint k = k1(eps)."""
    c = constants
    return (
        math.log(1.0 / c.b0_decay)
        / c.c_alpha
        * (c.b0_decay * math.exp(c.a1) / (3.0 * c.b_tilde)) ** c.alpha
        * (inputs.r / c.geometry.r_max) ** (c.alpha / (1.0 + c.alpha))
    )


def highfreq_bound(inputs: StabilityInputs, constants: StabilityConstants) -> StabilityReport:
    """Log-type bound on [k0, k1(eps)], improving exponentially in k."""
    c = constants
    k_top = k1_of_eps(inputs, c)
    ok = c.k0 <= inputs.k <= k_top
    failed = None if ok else f"k={inputs.k:.6g} outside [{c.k0:.6g}, {k_top:.6g}]"
    kr = inputs.k * inputs.r
    expo = math.log(1.0 / c.b0_decay) * (
        (c.b0_decay * math.exp(c.a1) * kr / 2.0) ** c.alpha * inputs.log_ratio / c.c_alpha
    ) ** (1.0 / (1.0 + c.alpha))
    log_bound = (
        0.5 * math.log(2.0 * c.big_a * c.geometry.b1)
        - math.log(c.b0_decay)
        + math.log(inputs.m_bound)
        - expo
    )
    trunc = None
    if ok:
        try:
            trunc = solve_truncation(inputs, c, HIGH)
        except NoSolution:
            trunc = None
    return _finish(
        log_bound,
        regime=HIGH,
        truncation=trunc,
        constants_used=c,
        hypothesis_ok=ok,
        failed_condition=failed,
        beta1=beta1_of(inputs, c),
        extras={"k1_of_eps": k_top},
    )


def extreme_tail_degree(constants: StabilityConstants, kr: float) -> int:
    """Largest j with k r >= C0_tilde (j + (N-2)/2): the extreme cutoff."""
    off = (constants.n_dim - 2) / 2.0
    return max(0, int(math.floor(kr / constants.c0_tilde - off)))


def extreme_bound(inputs: StabilityInputs, constants: StabilityConstants) -> StabilityReport:
    """Bound for k >= k1(eps): eps-term plus an exponentially small tail."""
    c = constants
    geo = c.geometry
    conds = []
    if geo.b0 < c.extreme_b0_floor:
        conds.append(f"B0={geo.b0:.6g} < 3e C0_tilde/2 = {c.extreme_b0_floor:.6g}")
    if inputs.k < c.k0:
        conds.append(f"k={inputs.k:.6g} < k0={c.k0:.6g}")
    ok = not conds
    kr = inputs.k * inputs.r
    x = kr / c.c0_tilde
    tail_log = 2.0 * math.log(inputs.m_bound) + math.log(x) + 2.0 * x * math.log(2.0 / 3.0)
    eps_log = 2.0 * math.log(inputs.epsilon)
    hi = max(tail_log, eps_log)
    inner = hi + math.log1p(math.exp(min(tail_log, eps_log) - hi))
    log_bound = 0.5 * math.log(c.a_tilde * geo.b1) + 0.5 * inner
    j0 = extreme_tail_degree(c, kr)
    trunc = TruncationSolution(n=float(j0 + (c.n_dim - 2) / 2.0), j0=j0, nu0=j0 + (c.n_dim - 2) / 2.0)
    return _finish(
        log_bound,
        regime=EXTREME,
        truncation=trunc,
        constants_used=c,
        hypothesis_ok=ok,
        failed_condition="; ".join(conds) if conds else None,
    )


def lipschitz_c3(tau: float) -> float:
    """sup over x > 0 of x^(2 tau + 1) (8/9)^(2 x), in closed form."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    p = 2.0 * tau + 1.0
    return (p / (2.0 * math.e * math.log(9.0 / 8.0))) ** p


def lipschitz_threshold_k(epsilon: float, constants: StabilityConstants) -> float:
    c = constants
    return c.c0_tilde / (math.log(4.0 / 3.0) * c.geometry.r_min) * math.log(1.0 / epsilon)


def lipschitz_bound(
    inputs: StabilityInputs, constants: StabilityConstants, tau: float, c2: float
) -> StabilityReport:
    """k-independent bound linear in eps, under M <= C2 k^tau (caller asserts)."""
    c = constants
    geo = c.geometry
    conds = []
    if inputs.epsilon > 1.0 / math.e:
        conds.append(f"eps={inputs.epsilon:.6g} > 1/e")
    k_min = lipschitz_threshold_k(inputs.epsilon, c)
    if inputs.k < k_min:
        conds.append(f"k={inputs.k:.6g} < threshold {k_min:.6g}")
    if geo.b0 < c.extreme_b0_floor:
        conds.append(f"B0={geo.b0:.6g} < 3e C0_tilde/2 = {c.extreme_b0_floor:.6g}")
    ok = not conds
    factor = c.a_tilde * geo.b1 * (
        1.0 + c2**2 * (c.c0_tilde / geo.r_min) ** (2.0 * tau) * lipschitz_c3(tau)
    )
    log_bound = 0.5 * math.log(factor) + math.log(inputs.epsilon)
    kr = inputs.k * inputs.r
    j0 = extreme_tail_degree(c, kr)
    trunc = TruncationSolution(n=float(j0 + (c.n_dim - 2) / 2.0), j0=j0, nu0=j0 + (c.n_dim - 2) / 2.0)
    return _finish(
        log_bound,
        regime=LIPSCHITZ,
        truncation=trunc,
        constants_used=c,
        hypothesis_ok=ok,
        failed_condition="; ".join(conds) if conds else None,
        extras={"c3_tau": lipschitz_c3(tau), "threshold_k": k_min},
    )


def select_regime(
    inputs: StabilityInputs,
    constants: StabilityConstants,
    tau: float | None = None,
    c2: float | None = None,
) -> StabilityReport:
    """Dispatch to the regime containing k; return the smallest valid bound.

    Bounded for k < k0, high for k0 <= k <= k1(eps), extreme beyond; when
    (tau, C2) are supplied and the Lipschitz hypotheses hold, that bound is
    returned instead if smaller.
    """
    if inputs.k < constants.k0:
        report = bounded_regime_bound(inputs, constants)
    elif inputs.k <= k1_of_eps(inputs, constants):
        report = highfreq_bound(inputs, constants)
    else:
        report = extreme_bound(inputs, constants)
    if tau is not None and c2 is not None:
        lip = lipschitz_bound(inputs, constants, tau, c2)
        if lip.hypothesis_ok and (not report.hypothesis_ok or lip.log_bound < report.log_bound):
            report = lip
    return report


# ---------------------------------------------------------------------------
# Reconstruction
# ---------------------------------------------------------------------------


def reconstruct_nearfield(
    noisy: ModalSpectrum, truncation: TruncationSolution
) -> ModalSpectrum:
    """Spectral cutoff of the noisy far-field spectrum at degree j0.

    The returned spectrum evaluates on any circle through the modal radial
    factors; its L2(r) distance to the exact field is what the regime bound
    certifies.
    """
    return noisy.truncated(truncation.j0)


def reconstruction_error_spectrum(
    noise: ModalSpectrum, truth: ModalSpectrum, j0: int
) -> ModalSpectrum:
    """Spectrum of (reconstruction - truth): kept noise plus dropped tail."""
    keep = degree_count(j0, truth.n_dim)
    n = max(len(noise.coefficients), len(truth.coefficients))
    err = np.zeros(n, dtype=complex)
    err[: min(keep, len(noise.coefficients))] = noise.coefficients[:keep]
    tail = truth.coefficients[keep:]
    err[keep : keep + len(tail)] -= tail
    return ModalSpectrum(truth.n_dim, truth.k, err)


# ---------------------------------------------------------------------------
# Half-space continuation error (calculator only)
# ---------------------------------------------------------------------------


def halfspace_continuation_bound(
    eta1: float, k: float, m_tilde: float, c2: float, c3: float
) -> float:
    """(C2^2 k^2 eta1^2 + C3^2 k^2 M~^2 / (-log((C2/C3) eta1/M~) + k)^(1/8))^(1/2).

    Requires eta1 <= (C3/C2) M~; no continuation algorithm is attached, the
    value only quantifies the half-space step's error.
    """
    if eta1 <= 0 or m_tilde <= 0 or c2 <= 0 or c3 <= 0 or k <= 0:
        raise ValueError("all arguments must be > 0")
    ratio = (c2 / c3) * eta1 / m_tilde
    if ratio > 1.0 + 1e-15:
        raise ValueError(f"precondition eta1 <= (C3/C2) M~ fails (ratio {ratio:.6g})")
    denom = (-math.log(min(ratio, 1.0)) + k) ** 0.125
    return math.sqrt((c2 * k * eta1) ** 2 + (c3 * k * m_tilde) ** 2 / denom)
