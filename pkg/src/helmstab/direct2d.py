"""2D sound-soft direct scattering via the combined-field integral equation.

The scattered field is represented as a combined double/single layer with
coupling k,

    u_s(x) = int_Gamma psi(y) [dPhi/dnu(y) - i k Phi(x,y)] ds(y),

where Phi_k(x,y) = (i/4) H^(1)_0(k|x-y|), and the density solves

    (I + K - i k S) psi = -2 u_inc      on Gamma,

with K, S the double/single-layer boundary operators carrying a factor 2.
Discretization: global trigonometric Nystrom scheme with the classical
log-singularity splitting

    kernel = K1(t,tau) ln(4 sin^2((t-tau)/2)) + K2(t,tau)

integrated by the exact product quadrature for the log factor and the
trapezoid rule for the smooth part; spectrally accurate on analytic star
profiles.  All Bessel evaluations go through the package's own routines.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .geometry import StarBoundary
from .modal import ModalSpectrum, degree_count
from .specfun import besseljy, jy01

_EULER_GAMMA = 0.5772156649015329


class CoarseGridWarning(UserWarning):
    """Fewer quadrature points than the points-per-wavelength floor."""


class NearBoundaryWarning(UserWarning):
    """Field evaluation too close to the boundary for full quadrature accuracy."""


@dataclass(frozen=True)
class IncidentWave:
    """Plane wave exp(i k omega . x) with unit direction omega."""

    k: float
    omega: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.omega, dtype=float)
        if abs(np.linalg.norm(w) - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector")
        object.__setattr__(self, "omega", w)

    @staticmethod
    def from_angle(k: float, angle: float) -> "IncidentWave":
        return IncidentWave(k, np.array([math.cos(angle), math.sin(angle)]))

    def field(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return np.exp(1j * self.k * (points @ self.omega))


@dataclass(frozen=True)
class BoundaryGrid:
    """Uniform parametric grid on a star boundary with derived geometry."""

    boundary: StarBoundary
    theta: np.ndarray
    points: np.ndarray  # (n, 2)
    dpoints: np.ndarray  # x'(theta)
    ddpoints: np.ndarray  # x''(theta)
    speed: np.ndarray  # |x'|
    normal_raw: np.ndarray  # (x2', -x1'), outward, length |x'|

    @staticmethod
    def build(boundary: StarBoundary, n_points: int) -> "BoundaryGrid":
        if n_points % 2 != 0 or n_points < 8:
            raise ValueError("n_points must be even and >= 8")
        theta = 2.0 * math.pi * np.arange(n_points) / n_points
        g = boundary.profile.derivative(theta, 0)
        g1 = boundary.profile.derivative(theta, 1)
        g2 = boundary.profile.derivative(theta, 2)
        c, s = np.cos(theta), np.sin(theta)
        pts = np.stack([g * c, g * s], axis=-1)
        d1 = np.stack([g1 * c - g * s, g1 * s + g * c], axis=-1)
        d2 = np.stack(
            [g2 * c - 2.0 * g1 * s - g * c, g2 * s + 2.0 * g1 * c - g * s], axis=-1
        )
        speed = np.linalg.norm(d1, axis=-1)
        if speed.min() <= 0.0:
            raise ValueError("degenerate parametrization: |x'| vanishes")
        normal = np.stack([d1[:, 1], -d1[:, 0]], axis=-1)
        return BoundaryGrid(boundary, theta, pts, d1, d2, speed, normal)

    @property
    def n_points(self) -> int:
        return len(self.theta)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid arc-length weights (2 pi / n) |x'|."""
        return 2.0 * math.pi / self.n_points * self.speed

    def perimeter(self) -> float:
        return float(self.weights.sum())


@dataclass
class NystromSystem:
    grid: BoundaryGrid
    k: float
    matrix: np.ndarray
    _lu: tuple = field(default=None, repr=False)

    def factor(self):
        if self._lu is None:
            self._lu = lu_factor(self.matrix)
        return self._lu


@dataclass(frozen=True)
class Density:
    """Boundary density psi at the grid nodes."""

    grid: BoundaryGrid
    k: float
    psi: np.ndarray
    residual_inf: float


# ---------------------------------------------------------------------------
# Fundamental solution
# ---------------------------------------------------------------------------


def fundamental_solution(k: float, x: np.ndarray, y: np.ndarray) -> complex:
    """Phi_k(x, y) = (i/4) H^(1)_0(k |x - y|) for distinct points."""
    r = float(np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)))
    if r == 0.0:
        raise ValueError("fundamental solution is singular at coincident points")
    rec = besseljy(0.0, k * r)
    return 0.25j * complex(rec.j.to_float(), rec.y.to_float())


def fundamental_gradient_y(k: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """grad_y Phi_k(x,y) = -(i k/4) H^(1)_1(k|x-y|) (y-x)/|y-x|."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = y - x
    r = float(np.linalg.norm(d))
    if r == 0.0:
        raise ValueError("fundamental solution is singular at coincident points")
    rec = besseljy(1.0, k * r)
    h1 = complex(rec.j.to_float(), rec.y.to_float())
    return -0.25j * k * h1 * d / r


# ---------------------------------------------------------------------------
# Quadrature and assembly
# ---------------------------------------------------------------------------


def log_quadrature_weights(n_points: int) -> np.ndarray:
    """Exact product-quadrature weights for the periodic log kernel.

    R[l] approximates int f(tau) ln(4 sin^2((t - tau)/2)) dtau at t - tau_j =
    2 pi l / n; exact for trigonometric polynomials of degree < n/2.
    """
    n = n_points
    m = np.arange(1, n // 2)
    l = np.arange(n)
    phase = 2.0 * math.pi * np.outer(l, m) / n
    r = -(4.0 * math.pi / n) * (np.cos(phase) / m).sum(axis=1)
    r -= (4.0 * math.pi / n**2) * np.cos(math.pi * l)
    return r


def _kernel_blocks(grid: BoundaryGrid, k: float):
    """(L1, L2, M1, M2) matrices of the split double/single-layer kernels."""
    pts = grid.points
    n = grid.n_points
    diff = pts[:, None, :] - pts[None, :, :]
    r = np.linalg.norm(diff, axis=-1)
    iu = np.triu_indices(n, 1)
    kr = k * r[iu]
    j0 = np.empty((n, n))
    y0 = np.empty((n, n))
    j1 = np.empty((n, n))
    y1 = np.empty((n, n))
    a, b, c, d = jy01(kr)
    for mat, vals in ((j0, a), (y0, b), (j1, c), (y1, d)):
        mat[iu] = vals
        mat.T[iu] = vals
        np.fill_diagonal(mat, 0.0)

    # D_ij = (x_i - x_j) . n_raw_j  (raw normal carries the Jacobian)
    dmat = np.einsum("ijk,jk->ij", diff, grid.normal_raw)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_r = np.where(r > 0, 1.0 / r, 0.0)
    h1 = j1 + 1j * y1
    h0 = j0 + 1j * y0

    L = 0.5j * k * h1 * dmat * inv_r
    L1 = -(k / (2.0 * math.pi)) * j1 * dmat * inv_r
    M = 0.5j * h0 * grid.speed[None, :]
    M1 = -(1.0 / (2.0 * math.pi)) * j0 * grid.speed[None, :]

    tdiff = grid.theta[:, None] - grid.theta[None, :]
    log_sin = np.zeros((n, n))
    off = ~np.eye(n, dtype=bool)
    log_sin[off] = np.log(4.0 * np.sin(0.5 * tdiff[off]) ** 2)

    L2 = L - L1 * log_sin
    M2 = M - M1 * log_sin
    # diagonal limits
    cross = grid.ddpoints[:, 0] * grid.dpoints[:, 1] - grid.ddpoints[:, 1] * grid.dpoints[:, 0]
    np.fill_diagonal(L2, cross / (2.0 * math.pi * grid.speed**2))
    np.fill_diagonal(L1, 0.0)
    diag_m2 = (
        0.5j - _EULER_GAMMA / math.pi - np.log(0.5 * k * grid.speed) / math.pi
    ) * grid.speed
    np.fill_diagonal(M2, diag_m2)
    np.fill_diagonal(M1, -grid.speed / (2.0 * math.pi))
    return L1, L2, M1, M2


def assemble_cfie(boundary: StarBoundary, k: float, n_points: int) -> NystromSystem:
    """Dense Nystrom matrix of A = I + K - i k S on the given boundary."""
    r_max = boundary.obstacle_class.r0 + boundary.obstacle_class.delta
    floor = max(32, int(math.ceil(10.0 * k * r_max)))
    if n_points < floor:
        warnings.warn(
            f"n_points={n_points} below the resolution floor {floor} "
            f"(10 points per wavelength on the circumscribed circle)",
            CoarseGridWarning,
            stacklevel=2,
        )
    grid = BoundaryGrid.build(boundary, n_points)
    L1, L2, M1, M2 = _kernel_blocks(grid, k)
    ck1 = L1 - 1j * k * M1
    ck2 = L2 - 1j * k * M2
    n = grid.n_points
    rw = log_quadrature_weights(n)
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    rmat = rw[idx]
    a = rmat * ck1 + (2.0 * math.pi / n) * ck2
    a[np.arange(n), np.arange(n)] += 1.0
    return NystromSystem(grid=grid, k=k, matrix=a)


def solve_density(system: NystromSystem, wave: IncidentWave) -> Density:
    """LU solve of A psi = -2 u_inc, with an infinity-norm residual check."""
    if abs(wave.k - system.k) > 1e-12:
        raise ValueError("incident wavenumber differs from the assembled system")
    rhs = -2.0 * wave.field(system.grid.points)
    psi = lu_solve(system.factor(), rhs)
    residual = np.abs(system.matrix @ psi - rhs).max()
    scale = np.abs(rhs).max()
    if residual > 1e-12 * scale:
        raise ArithmeticError(f"Nystrom solve residual {residual:.2e} exceeds 1e-12 * |rhs|")
    return Density(grid=system.grid, k=system.k, psi=psi, residual_inf=residual)


# ---------------------------------------------------------------------------
# Field evaluation
# ---------------------------------------------------------------------------


def eval_scattered(density: Density, points: np.ndarray) -> np.ndarray:
    """Scattered field at exterior points via the representation quadrature."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    grid = density.grid
    k = density.k
    diff = pts[:, None, :] - grid.points[None, :, :]
    r = np.linalg.norm(diff, axis=-1)
    spacing = 2.0 * math.pi / grid.n_points * grid.speed.max()
    if r.min() < 5.0 * spacing:
        warnings.warn(
            f"evaluation point within 5 grid spacings of the boundary "
            f"(dist={r.min():.3e}); quadrature accuracy degrades there",
            NearBoundaryWarning,
            stacklevel=2,
        )
    h0, h1 = _hankel01_matrix(k * r)
    dn = np.einsum("pjk,jk->pj", diff, grid.normal_raw)  # (x - y) . n_raw(y)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_r = np.where(r > 0, 1.0 / r, 0.0)
    # dPhi/dnu(y) = (i k / 4) H1(k r) ((x - y) . nu(y)) / r ; nu = n_raw/|x'|
    kernel = 0.25j * k * h1 * dn * inv_r - 1j * k * 0.25j * h0 * grid.speed[None, :]
    values = (2.0 * math.pi / grid.n_points) * (kernel @ density.psi)
    return values if values.shape != (1,) else values


def _hankel01_matrix(kr: np.ndarray):
    shape = kr.shape
    j0, y0, j1, y1 = jy01(kr.ravel())
    return (j0 + 1j * y0).reshape(shape), (j1 + 1j * y1).reshape(shape)


def eval_farfield(density: Density, angles: np.ndarray) -> np.ndarray:
    """Far-field pattern of the combined layer at the given angles.

    u_inf(xhat) = e^{-i pi/4} sqrt(k/(8 pi)) *
                  int (xhat . nu(y) + 1) e^{-i k xhat . y} psi(y) ds(y).
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    grid = density.grid
    k = density.k
    xhat = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    phase = np.exp(-1j * k * (xhat @ grid.points.T))
    dir_term = xhat @ grid.normal_raw.T + grid.speed[None, :]
    pref = cmath.exp(-0.25j * math.pi) * math.sqrt(k / (8.0 * math.pi))
    return pref * (2.0 * math.pi / grid.n_points) * ((phase * dir_term) @ density.psi)


def scattering_farfield(
    boundary: StarBoundary,
    k: float,
    omega_angle: float,
    n_points: int,
    angles: np.ndarray,
) -> np.ndarray:
    """Convenience: assemble, solve, and evaluate the far-field pattern."""
    system = assemble_cfie(boundary, k, n_points)
    density = solve_density(system, IncidentWave.from_angle(k, omega_angle))
    return eval_farfield(density, angles)


# ---------------------------------------------------------------------------
# Separation-of-variables reference for the disc
# ---------------------------------------------------------------------------


def mie_reflection(m: int, k: float, a: float) -> complex:
    """Sound-soft disc reflection coefficient J_m(ka)/H^(1)_m(ka)."""
    rec = besseljy(abs(m), k * a)
    h = complex(rec.j.to_float(), rec.y.to_float())
    return rec.j.to_float() / h


def mie_mode_count(k: float, a: float) -> int:
    """Modes needed for super-exponentially converged disc series."""
    ka = k * a
    return int(math.ceil(ka + 10.0 * ka ** (1.0 / 3.0) + 20))


def mie_farfield(a: float, k: float, omega_angle: float, angles: np.ndarray) -> np.ndarray:
    """Exact far-field pattern of the sound-soft disc of radius a."""
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    m_max = mie_mode_count(k, a)
    pref = -math.sqrt(2.0 / (math.pi * k)) * cmath.exp(-0.25j * math.pi)
    out = np.zeros(angles.shape, dtype=complex)
    rel = angles - omega_angle
    for m in range(-m_max, m_max + 1):
        out += mie_reflection(m, k, a) * np.exp(1j * m * rel)
    return pref * out


def mie_spectrum(a: float, k: float, omega_angle: float, degree: int | None = None) -> ModalSpectrum:
    """Disc far-field as a ModalSpectrum in the real circle basis."""
    if degree is None:
        degree = mie_mode_count(k, a)
    pref = -math.sqrt(2.0 / (math.pi * k)) * cmath.exp(-0.25j * math.pi)
    coeffs = np.zeros(degree_count(degree, 2), dtype=complex)
    c0 = pref * mie_reflection(0, k, a)
    coeffs[0] = math.sqrt(2.0 * math.pi) * c0
    for j in range(1, degree + 1):
        cj = pref * mie_reflection(j, k, a) * cmath.exp(-1j * j * omega_angle)
        cmj = pref * mie_reflection(-j, k, a) * cmath.exp(1j * j * omega_angle)
        coeffs[2 * j - 1] = math.sqrt(math.pi) * (cj + cmj)
        coeffs[2 * j] = 1j * math.sqrt(math.pi) * (cj - cmj)
    return ModalSpectrum(2, k, coeffs)


def disc_cfie_eigenvalue(m: int, k: float, a: float) -> complex:
    """Analytic eigenvalue of A on the disc Fourier mode exp(i m theta).

    By the addition theorem and the exterior jump relation the combined
    operator acts diagonally with

        lambda_m = i pi k a (J'_m(ka) - i J_m(ka)) H^(1)_m(ka)

    (the identity's +1 cancels against the -1 in the principal-value
    double-layer eigenvalue i pi k a J'_m H_m - 1).  Signs for negative m
    cancel between the J/J' and H factors.
    """
    rec = besseljy(abs(m), k * a)
    j = rec.j.to_float()
    jp = rec.jp.to_float()
    h = complex(rec.j.to_float(), rec.y.to_float())
    return 1j * math.pi * k * a * (jp - 1j * j) * h


# ---------------------------------------------------------------------------
# Validation identities and probes
# ---------------------------------------------------------------------------


def farfield_l2_norm(samples: np.ndarray) -> float:
    """L2(S^1) norm from uniform samples (periodic trapezoid rule)."""
    samples = np.asarray(samples)
    return math.sqrt(2.0 * math.pi / len(samples) * float(np.sum(np.abs(samples) ** 2)))


def optical_theorem_residual(samples: np.ndarray, forward_value: complex, k: float) -> float:
    """| ||u_inf||^2 - 2 sqrt(2 pi/k) Im(e^{-i pi/4} u_inf(omega)) | for N=2."""
    lhs = farfield_l2_norm(samples) ** 2
    rhs = 2.0 * math.sqrt(2.0 * math.pi / k) * (cmath.exp(-0.25j * math.pi) * forward_value).imag
    return abs(lhs - rhs)


def reciprocity_residual(
    boundary: StarBoundary,
    k: float,
    pairs: list[tuple[float, float]],
    n_points: int,
) -> float:
    """max |A(xhat, omega) - A(-omega, -xhat)| over (xhat, omega) angle pairs."""
    system = assemble_cfie(boundary, k, n_points)
    worst = 0.0
    for xhat_angle, omega_angle in pairs:
        d1 = solve_density(system, IncidentWave.from_angle(k, omega_angle))
        v1 = eval_farfield(d1, np.array([xhat_angle]))[0]
        d2 = solve_density(system, IncidentWave.from_angle(k, xhat_angle + math.pi))
        v2 = eval_farfield(d2, np.array([omega_angle + math.pi]))[0]
        worst = max(worst, abs(v1 - v2))
    return worst


def inverse_norm_probe(system: NystromSystem, n_iter: int = 200, seed: int = 0) -> float:
    """1/sigma_min of the arc-weighted matrix (power iteration on the inverse).

    The grid matrix is symmetrized by W^(1/2) A W^(-1/2), W the arc-length
    weights, so its 2-norm approximates the L2(Gamma) operator norm.
    """
    w = system.grid.weights
    sq = np.sqrt(w)
    b = (sq[:, None] * system.matrix) / sq[None, :]
    lu = lu_factor(b)
    rng = np.random.default_rng(seed)
    v = rng.normal(size=len(w)) + 1j * rng.normal(size=len(w))
    v /= np.linalg.norm(v)
    probe = 0.0
    for _ in range(n_iter):
        u = lu_solve(lu, v, trans=2)  # B^-H v
        u = lu_solve(lu, u, trans=0)  # B^-1 B^-H v
        lam = np.linalg.norm(u)  # -> 1/sigma_min^2
        probe_new = math.sqrt(lam)
        v = u / lam
        if probe > 0.0 and abs(probe_new - probe) <= 1e-10 * probe_new:
            return probe_new
        probe = probe_new
    return probe


def apriori_farfield_table(
    boundary: StarBoundary, k_values, n_points_for=lambda k: None
) -> list[dict]:
    """||u_inf||_{L2} per wavenumber plus the layer-potential cap check."""
    rows = []
    r_max = boundary.obstacle_class.r0 + boundary.obstacle_class.delta
    for k in k_values:
        n = n_points_for(k) or max(64, int(math.ceil(12.0 * k * r_max / 2.0)) * 2 + 64)
        system = assemble_cfie(boundary, k, n)
        density = solve_density(system, IncidentWave.from_angle(k, 0.0))
        angles = 2.0 * math.pi * np.arange(256) / 256
        ff = eval_farfield(density, angles)
        norm = farfield_l2_norm(ff)
        psi_norm = math.sqrt(float(np.sum(system.grid.weights * np.abs(density.psi) ** 2)))
        per = system.grid.perimeter()
        single_cap = k ** (-0.5) / (2.0 * math.sqrt(2.0 * math.pi)) * math.sqrt(per) * psi_norm
        rows.append(
            {
                "k": k,
                "farfield_l2": norm,
                "psi_l2": psi_norm,
                "single_layer_cap": single_cap,
                "n_points": n,
            }
        )
    return rows
