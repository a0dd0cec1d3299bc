"""Instability radii for the inverse obstacle problem, explicit in k.

For obstacles in X(m, beta, R0, delta0) the far-field kernel coefficients
decay super-exponentially past degree ~ e z(k), z(k) = max(1, k (R+1)).
Counting an eps-net of such kernels against the delta-discrete packings of
the class produces, for every 0 < eps < 1/e, a distance

    delta(eps, k) ~ delta0 (1+T)^(-2m) [log(C5 (1+T)^(2s+N-1/2)/eps)]^(-m/(N-1))

(T = Z(k) when eps is above the crossover eps~(k), else the root t~ of the
decay equation) at which two obstacles exist whose far-field kernels differ
by at most 2 eps in H^s.  Everything here is a pure calculator, evaluated
in log scale end to end: the quantities involve double exponentials in k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


LARGE = "large"
SMALL = "small"


def default_decay_base() -> float:
    """a = 1 + sqrt(e^2 - 1)/e ~ 1.9299 (the parse with e log a > 1)."""
    return 1.0 + math.sqrt(math.e**2 - 1.0) / math.e


def alternate_decay_base() -> float:
    """(1 + sqrt(e^2 - 1))/e ~ 1.2978: the other reading of the same display."""
    return (1.0 + math.sqrt(math.e**2 - 1.0)) / math.e


@dataclass(frozen=True)
class InstabilityConfig:
    """Class parameters and constants for the instability calculators.

    c_tilde_norm is the kernel-coefficient cap constant (fitted >= 2);
    c_small is the threshold multiplier c (1 for N = 2, 3 when e log a > 1,
    which holds for the default a); c4 = 4 is the fixed embedding constant.
    """

    s: float
    n_dim: int
    m: int
    beta: float
    r0: float
    delta0: float
    k0: float
    c_tilde_norm: float = 2.0
    a_decay: float = 0.0  # 0 -> default_decay_base()
    c_small: float = 1.0
    c4: float = 4.0

    def __post_init__(self) -> None:
        if self.s < 0 or self.n_dim < 2 or self.m < 1:
            raise ValueError("need s >= 0, N >= 2, m >= 1")
        if self.c_tilde_norm < 2.0:
            raise ValueError("the coefficient cap constant must be >= 2")
        if self.c4 != 4.0:
            raise ValueError("the H^s embedding constant is 4")
        if self.a_decay == 0.0:
            object.__setattr__(self, "a_decay", default_decay_base())
        if self.a_decay <= 1.0:
            raise ValueError("decay base a must exceed 1")
        if self.c_small < 1.0:
            raise ValueError("c_small must be >= 1")
        if self.c_small == 1.0 and math.e * math.log(self.a_decay) <= 1.0:
            raise ValueError(
                "c_small = 1 needs e log(a) > 1; supply a larger c_small for this a"
            )

    @property
    def radius(self) -> float:
        """R = R0 + delta0 (the class's outer radius)."""
        return self.r0 + self.delta0

    @property
    def r_tilde(self) -> float:
        return self.radius + 1.0

    @property
    def c5(self) -> float:
        return 2.0 * self.c4 * (2.0 * self.c_tilde_norm + 1.0)


def z_of_k(k: float, r_tilde: float) -> float:
    """z(k) = max(1, k R~)."""
    if k <= 0:
        raise ValueError("wavenumber must be > 0")
    return max(1.0, k * r_tilde)


def b_tilde_s(cfg: InstabilityConfig) -> float:
    """B~(s) = max(c e^2, 4 s + 3N/2 + 1)."""
    return max(cfg.c_small * math.e**2, 4.0 * cfg.s + 1.5 * cfg.n_dim + 1.0)


def big_z(k: float, cfg: InstabilityConfig) -> float:
    """Z(k) = B~(s) max(1, (R+1) k)."""
    return b_tilde_s(cfg) * z_of_k(k, cfg.r_tilde)


def log_f_decay(t: float, k: float, cfg: InstabilityConfig) -> float:
    """log of f(t) = (1+t)^(2s+N-1/2) (a t/(e z(k)))^(-(t+(N-3)/2)).

    Domain: t >= max(c e z(k), 2s + N), where f is strictly decreasing.
    """
    z = z_of_k(k, cfg.r_tilde)
    t_min = max(cfg.c_small * math.e * z, 2.0 * cfg.s + cfg.n_dim)
    if t < t_min * (1.0 - 1e-12):
        raise ValueError(f"t={t} below the decay domain floor {t_min}")
    return (2.0 * cfg.s + cfg.n_dim - 0.5) * math.log1p(t) - (
        t + (cfg.n_dim - 3.0) / 2.0
    ) * math.log(cfg.a_decay * t / (math.e * z))


def log_eps_tilde(k: float, cfg: InstabilityConfig) -> float:
    """log of the branch crossover eps~(k) = 2 C4 C~ z^((N-1)/2) f(B~(s) z)."""
    z = z_of_k(k, cfg.r_tilde)
    return (
        math.log(2.0 * cfg.c4 * cfg.c_tilde_norm)
        + 0.5 * (cfg.n_dim - 1) * math.log(z)
        + log_f_decay(b_tilde_s(cfg) * z, k, cfg)
    )


def eps_tilde(k: float, cfg: InstabilityConfig) -> float:
    """The crossover itself; underflows to 0.0 for large k (use the log)."""
    lv = log_eps_tilde(k, cfg)
    return math.exp(lv) if lv > -745.0 else 0.0


def solve_t_tilde(eps: float, k: float, cfg: InstabilityConfig) -> float:
    """Root t~ > Z(k) of 2 C4 C~ z^((N-1)/2) f(t~) = eps (small branch)."""
    z = z_of_k(k, cfg.r_tilde)
    target = math.log(eps) - math.log(2.0 * cfg.c4 * cfg.c_tilde_norm) - 0.5 * (
        cfg.n_dim - 1
    ) * math.log(z)
    lo = big_z(k, cfg)
    if log_f_decay(lo, k, cfg) < target:
        raise ValueError("eps is above the crossover; the large branch applies")
    hi = 2.0 * lo
    while log_f_decay(hi, k, cfg) > target:
        hi *= 2.0
        if hi > 1e12:
            raise ArithmeticError("t~ bracket exceeded 1e12")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if log_f_decay(mid, k, cfg) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def log_b_small(k: float, cfg: InstabilityConfig) -> float:
    """log of b~(k, s) = 2 C4 C~ (3e/(2a))^(2s+N-1/2) z(k)^(2s+3N/2-1)."""
    z = z_of_k(k, cfg.r_tilde)
    return (
        math.log(2.0 * cfg.c4 * cfg.c_tilde_norm)
        + (2.0 * cfg.s + cfg.n_dim - 0.5) * math.log(1.5 * math.e / cfg.a_decay)
        + (2.0 * cfg.s + 1.5 * cfg.n_dim - 1.0) * math.log(z)
    )


def t_hat(eps: float, k: float, cfg: InstabilityConfig) -> float:
    """Closed-form upper substitute for t~: 2 log(b~(k,s)/eps)."""
    return 2.0 * (log_b_small(k, cfg) - math.log(eps))


def _log_delta_at(t_value: float, eps: float, cfg: InstabilityConfig, scale: float) -> float:
    """log of delta0 2^(-m(N+3)/(N-1)) (1+t)^(-2m) [log(scale C5 (1+t)^p / eps)]^(-m/(N-1))."""
    n, m = cfg.n_dim, cfg.m
    p = 2.0 * cfg.s + n - 0.5
    inner = math.log(scale * cfg.c5) + p * math.log1p(t_value) - math.log(eps)
    if inner <= 0:
        raise ArithmeticError("instability log factor must be positive")
    return (
        math.log(cfg.delta0)
        - m * (n + 3.0) / (n - 1.0) * math.log(2.0)
        - 2.0 * m * math.log1p(t_value)
        - m / (n - 1.0) * math.log(inner)
    )


@dataclass(frozen=True)
class InstabilityReport:
    eps: float
    k: float
    branch: str
    log_eps_tilde_k: float
    t_tilde: float | None
    t_effective: float
    log_delta: float
    delta: float
    log_dh_lower: float
    net_log_size: float
    t_hat: float
    log_delta_hat: float


def epsnet_log_size(
    eps: float, k: float, cfg: InstabilityConfig, t_override: float | None = None
) -> float:
    """log cardinality cap of the eps-net: 4 (1+T)^(2N-2) log(C5 (1+T)^p / eps).

    T = Z(k) on the large branch (requires eps >= eps~(k)); the small branch
    substitutes t~ via t_override.
    """
    t_value = big_z(k, cfg) if t_override is None else t_override
    if t_override is None and math.log(eps) < log_eps_tilde(k, cfg) - 1e-9:
        raise ValueError("eps below the crossover: pass the small-branch t~")
    p = 2.0 * cfg.s + cfg.n_dim - 0.5
    inner = math.log(cfg.c5) + p * math.log1p(t_value) - math.log(eps)
    return 4.0 * (1.0 + t_value) ** (2.0 * cfg.n_dim - 2.0) * inner


def delta_of_eps(eps: float, k: float, cfg: InstabilityConfig) -> InstabilityReport:
    """Instability radius delta(eps, k) and its certificate quantities."""
    if not (0.0 < eps < 1.0 / math.e):
        raise ValueError("need 0 < eps < 1/e")
    let = log_eps_tilde(k, cfg)
    if math.log(eps) >= let:
        branch = LARGE
        t_tilde_val = None
        t_eff = big_z(k, cfg)
    else:
        branch = SMALL
        t_tilde_val = solve_t_tilde(eps, k, cfg)
        t_eff = t_tilde_val
    log_delta = _log_delta_at(t_eff, eps, cfg, scale=1.0)
    log_dh = _log_delta_at(t_eff, 2.0 * eps, cfg, scale=2.0)
    th = t_hat(eps, k, cfg)
    # the relaxed t never undercuts the exact root, so its delta is a valid
    # (smaller) radius
    log_delta_hat = _log_delta_at(max(th, t_eff), eps, cfg, scale=1.0)
    net = epsnet_log_size(eps, k, cfg, t_override=None if branch == LARGE else t_eff)
    return InstabilityReport(
        eps=eps,
        k=k,
        branch=branch,
        log_eps_tilde_k=let,
        t_tilde=t_tilde_val,
        t_effective=t_eff,
        log_delta=log_delta,
        delta=math.exp(log_delta) if log_delta > -745.0 else 0.0,
        log_dh_lower=log_dh,
        net_log_size=net,
        t_hat=th,
        log_delta_hat=log_delta_hat,
    )


def coeff_decay_log_bound(gamma_max: int, k: float, cfg: InstabilityConfig) -> float:
    """log cap on |b_il(k)| at max degree gamma: the flat cap log C~ below
    the threshold c e z(k), the super-exponential formula above it."""
    if gamma_max < 0:
        raise ValueError("degree must be >= 0")
    z = z_of_k(k, cfg.r_tilde)
    if gamma_max < cfg.c_small * math.e * z:
        return math.log(cfg.c_tilde_norm)
    return (
        math.log(cfg.c_tilde_norm)
        + 0.5 * (cfg.n_dim - 1) * math.log(z)
        - (gamma_max + (cfg.n_dim - 3.0) / 2.0)
        * math.log(cfg.a_decay * gamma_max / (math.e * z))
    )


def first_k_at_crossover(eps: float, cfg: InstabilityConfig, k_hi: float = 1e6) -> float:
    """First k >= k0 with eps~(k) <= eps (the regime threshold k(eps))."""
    if not (0.0 < eps < 1.0 / math.e):
        raise ValueError("need 0 < eps < 1/e")
    target = math.log(eps)
    lo = cfg.k0
    if log_eps_tilde(lo, cfg) <= target:
        return lo
    hi = lo * 2.0
    while log_eps_tilde(hi, cfg) > target:
        hi *= 2.0
        if hi > k_hi:
            raise ArithmeticError("crossover wavenumber exceeds the search cap")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if log_eps_tilde(mid, cfg) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
