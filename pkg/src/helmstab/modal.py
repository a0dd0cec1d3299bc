"""Modal (separated-variables) representation of outgoing waves.

An outgoing field is stored by its far-field Fourier coefficients b_i with
respect to the real orthonormal basis of the unit sphere; for N = 2 the
basis is fixed as

    v_0 = (2 pi)^(-1/2),
    v_{(j,1)} = pi^(-1/2) cos(j theta),   v_{(j,2)} = pi^(-1/2) sin(j theta),

ordered degree-major with cosine before sine.  The radial continuation of
mode degree j multiplies the coefficient by

    (pi k / 2)^(1/2) i^(j + (N-1)/2) H^(1)_{j+(N-2)/2}(k r) / r^((N-2)/2),

so the squared near-field norm on the circle of radius r is the plain
weighted coefficient sum computed by :func:`nearfield_norm` (in log scale:
evanescent-regime weights overflow doubles long before they stop mattering).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .specfun import besseljy

_LOG_MAX = 709.0


class ModalOverflowError(OverflowError):
    """A mode contribution exceeds the double range even after log-scaling."""


class AliasingWarning(UserWarning):
    """Projection requested beyond the Nyquist degree of the sample grid."""


# ---------------------------------------------------------------------------
# Mode counting
# ---------------------------------------------------------------------------


def mode_dimension(j: int, n_dim: int) -> int:
    """Dimension p_j of the space of degree-j spherical harmonics in R^N."""
    if j < 0 or n_dim < 2:
        raise ValueError("need j >= 0 and N >= 2")
    if j == 0:
        return 1
    return (2 * j + n_dim - 2) * factorial(j + n_dim - 3) // (
        factorial(j) * factorial(n_dim - 2)
    )


def degree_count(n: int, n_dim: int) -> int:
    """Number of basis functions of degree <= n (equals sum of p_j)."""
    return sum(mode_dimension(j, n_dim) for j in range(n + 1))


def degree_of_flat_index(i: int, n_dim: int) -> int:
    """Degree gamma(v_i) of the i-th basis function in the flat ordering."""
    if i < 0:
        raise ValueError("flat index must be >= 0")
    if n_dim == 2:
        return 0 if i == 0 else (i + 1) // 2
    j = 0
    total = 0
    while True:
        total += mode_dimension(j, n_dim)
        if i < total:
            return j
        j += 1


# ---------------------------------------------------------------------------
# Spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModalSpectrum:
    """Finite mode-coefficient sequence of an outgoing wave.

    ``coefficients[i]`` is the far-field coefficient against v_i; entries
    beyond ``truncation_degree`` are implicitly zero.
    """

    n_dim: int
    k: float
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n_dim < 2:
            raise ValueError("N must be >= 2")
        if self.k <= 0.0:
            raise ValueError("wavenumber must be > 0")
        coeffs = np.asarray(self.coefficients, dtype=complex)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def truncation_degree(self) -> int:
        n = len(self.coefficients)
        return 0 if n == 0 else degree_of_flat_index(n - 1, self.n_dim)

    def degree_of(self, i: int) -> int:
        return degree_of_flat_index(i, self.n_dim)

    def truncated(self, degree: int) -> "ModalSpectrum":
        """Spectral cutoff: drop every mode of degree > ``degree``."""
        keep = degree_count(degree, self.n_dim)
        return ModalSpectrum(self.n_dim, self.k, self.coefficients[:keep].copy())

    def scaled(self, factor: complex) -> "ModalSpectrum":
        return ModalSpectrum(self.n_dim, self.k, self.coefficients * factor)

    def minus(self, other: "ModalSpectrum") -> "ModalSpectrum":
        if other.n_dim != self.n_dim or other.k != self.k:
            raise ValueError("spectra live on different (N, k)")
        n = max(len(self.coefficients), len(other.coefficients))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coefficients)] = self.coefficients
        a[: len(other.coefficients)] -= other.coefficients
        return ModalSpectrum(self.n_dim, self.k, a)


def farfield_norm(spectrum: ModalSpectrum) -> float:
    """L2 norm of the far-field pattern: the plain coefficient 2-norm."""
    return float(np.linalg.norm(spectrum.coefficients))


def _mode_log_weight(n_dim: int, k: float, j: int, r: float) -> float:
    """log of (pi/2) k r |H_{j+(N-2)/2}(k r)|^2, the near-field mode weight."""
    nu = j + (n_dim - 2) / 2.0
    log_h = besseljy(nu, k * r).hankel_log_abs()
    return math.log(math.pi / 2.0) + math.log(k * r) + 2.0 * log_h


def nearfield_norm(spectrum: ModalSpectrum, r: float) -> float:
    """L2 norm of the field on the sphere/circle of radius r.

    The caller guarantees r exceeds the radius enclosing all sources.  The
    weighted sum runs in log scale; raises ModalOverflowError if the norm
    itself exceeds the double range.
    """
    if r <= 0.0:
        raise ValueError("radius must be > 0")
    coeffs = spectrum.coefficients
    if len(coeffs) == 0:
        return 0.0
    log_terms = []
    for i, b in enumerate(coeffs):
        if b == 0:
            continue
        j = spectrum.degree_of(i)
        log_terms.append(2.0 * math.log(abs(b)) + _mode_log_weight(spectrum.n_dim, spectrum.k, j, r))
    if not log_terms:
        return 0.0
    top = max(log_terms)
    if not math.isfinite(top):
        raise ModalOverflowError("mode weight overflows even in log scale")
    acc = sum(math.exp(t - top) for t in log_terms)
    log_norm = 0.5 * (top + math.log(acc))
    if log_norm > _LOG_MAX:
        raise ModalOverflowError(f"near-field norm overflows: log value {log_norm:.1f}")
    return math.exp(log_norm)


def radial_factor(n_dim: int, k: float, j: int, r: float) -> complex:
    """Multiplier taking the far-field coefficient of degree j to radius r."""
    nu = j + (n_dim - 2) / 2.0
    rec = besseljy(nu, k * r)
    log_mag = 0.5 * math.log(math.pi * k / 2.0) + rec.hankel_log_abs() - (
        (n_dim - 2) / 2.0
    ) * math.log(r)
    phase = rec.hankel_phase() + math.pi / 2.0 * (j + (n_dim - 1) / 2.0)
    if log_mag > _LOG_MAX:
        raise ModalOverflowError(f"radial factor overflows for degree {j} at r={r}")
    return cmath.exp(complex(log_mag, phase))


def basis_values(n_dim: int, n_modes: int, theta: float) -> np.ndarray:
    """Values v_i(theta) of the first n_modes basis functions (N = 2 only)."""
    if n_dim != 2:
        raise NotImplementedError("pointwise synthesis is implemented for N = 2")
    out = np.empty(n_modes)
    inv_sqrt_pi = 1.0 / math.sqrt(math.pi)
    for i in range(n_modes):
        if i == 0:
            out[i] = 1.0 / math.sqrt(2.0 * math.pi)
        else:
            j = (i + 1) // 2
            if i % 2 == 1:  # cosine comes first within each degree
                out[i] = math.cos(j * theta) * inv_sqrt_pi
            else:
                out[i] = math.sin(j * theta) * inv_sqrt_pi
    return out


def evaluate_field(spectrum: ModalSpectrum, r: float, theta: float) -> complex:
    """Partial-sum field value at radius r and angle theta (N = 2)."""
    coeffs = spectrum.coefficients
    if len(coeffs) == 0:
        return 0.0 + 0.0j
    basis = basis_values(spectrum.n_dim, len(coeffs), theta)
    total = 0.0 + 0.0j
    factors: dict[int, complex] = {}
    for i, b in enumerate(coeffs):
        if b == 0:
            continue
        j = spectrum.degree_of(i)
        if j not in factors:
            factors[j] = radial_factor(spectrum.n_dim, spectrum.k, j, r)
        total += b * factors[j] * basis[i]
    return total


def synthesize_farfield(spectrum: ModalSpectrum, theta: np.ndarray) -> np.ndarray:
    """Far-field pattern values sum_i b_i v_i(theta) on an angle array (N=2)."""
    theta = np.asarray(theta, dtype=float)
    coeffs = spectrum.coefficients
    out = np.zeros(theta.shape, dtype=complex)
    for i, b in enumerate(coeffs):
        if b == 0:
            continue
        if i == 0:
            out += b / math.sqrt(2.0 * math.pi)
        else:
            j = (i + 1) // 2
            if i % 2 == 1:
                out += b * np.cos(j * theta) / math.sqrt(math.pi)
            else:
                out += b * np.sin(j * theta) / math.sqrt(math.pi)
    return out


def project_farfield(
    samples: np.ndarray, k: float, degree: int | None = None
) -> ModalSpectrum:
    """Discrete Fourier analysis of far-field samples on a uniform grid (N=2).

    Exact (to roundoff) on band-limited data when the grid has at least
    2*degree + 1 points; warns about aliasing otherwise.
    """
    samples = np.asarray(samples, dtype=complex)
    n = len(samples)
    if n < 1:
        raise ValueError("need at least one sample")
    nyquist = (n - 1) // 2
    if degree is None:
        degree = nyquist
    if degree > nyquist:
        warnings.warn(
            f"requested degree {degree} exceeds the grid Nyquist degree {nyquist}",
            AliasingWarning,
            stacklevel=2,
        )
    theta = 2.0 * math.pi * np.arange(n) / n
    weight = 2.0 * math.pi / n
    coeffs = np.empty(degree_count(degree, 2), dtype=complex)
    coeffs[0] = weight * samples.sum() / math.sqrt(2.0 * math.pi)
    for j in range(1, degree + 1):
        cosv = np.cos(j * theta)
        sinv = np.sin(j * theta)
        coeffs[2 * j - 1] = weight * (samples * cosv).sum() / math.sqrt(math.pi)
        coeffs[2 * j] = weight * (samples * sinv).sum() / math.sqrt(math.pi)
    return ModalSpectrum(2, k, coeffs)


# ---------------------------------------------------------------------------
# Coefficient conventions
# ---------------------------------------------------------------------------


def tilde_from_hat(hat: np.ndarray, k: float, n_dim: int) -> np.ndarray:
    """Far-field coefficients from radial-expansion coefficients.

    b_i = (pi/2)^(-1/2) k^(-(N-1)/2) (-i)^(gamma(v_i)+(N-1)/2) bhat_i.
    """
    hat = np.asarray(hat, dtype=complex)
    out = np.empty_like(hat)
    for i, value in enumerate(hat):
        j = degree_of_flat_index(i, n_dim)
        phase = (-1j) ** complex(j + (n_dim - 1) / 2.0)
        out[i] = (math.pi / 2.0) ** -0.5 * k ** (-(n_dim - 1) / 2.0) * phase * value
    return out


def hat_from_tilde(tilde: np.ndarray, k: float, n_dim: int) -> np.ndarray:
    """Inverse of :func:`tilde_from_hat` (round trip is the identity)."""
    tilde = np.asarray(tilde, dtype=complex)
    out = np.empty_like(tilde)
    for i, value in enumerate(tilde):
        j = degree_of_flat_index(i, n_dim)
        phase = (-1j) ** complex(j + (n_dim - 1) / 2.0)
        out[i] = (math.pi / 2.0) ** 0.5 * k ** ((n_dim - 1) / 2.0) * value / phase
    return out


# ---------------------------------------------------------------------------
# Sobolev-scale norms on far-field kernels (bi-indexed coefficients)
# ---------------------------------------------------------------------------


def sobolev_norm(bicoefficients: dict[tuple[int, int], complex], s: float, n_dim: int = 2) -> float:
    """H^s norm: (sum (1 + gamma_i + gamma_l)^(2s) |a_il|^2)^(1/2)."""
    if s < 0:
        raise ValueError("s must be >= 0")
    total = 0.0
    for (i, l), a in bicoefficients.items():
        gi = degree_of_flat_index(i, n_dim)
        gl = degree_of_flat_index(l, n_dim)
        total += (1.0 + gi + gl) ** (2.0 * s) * abs(a) ** 2
    return math.sqrt(total)


def ys_norm(bicoefficients: dict[tuple[int, int], complex], s: float, n_dim: int = 2) -> float:
    """sup (1 + max(gamma_i, gamma_l))^(2s + N - 1/2) |a_il|."""
    if s < 0:
        raise ValueError("s must be >= 0")
    sup = 0.0
    for (i, l), a in bicoefficients.items():
        gi = degree_of_flat_index(i, n_dim)
        gl = degree_of_flat_index(l, n_dim)
        sup = max(sup, (1.0 + max(gi, gl)) ** (2.0 * s + n_dim - 0.5) * abs(a))
    return sup


# ---------------------------------------------------------------------------
# Spectrum files: header "N k degree", then lines "j p re im"
# ---------------------------------------------------------------------------


def save_spectrum(path, spectrum: ModalSpectrum) -> None:
    lines = [f"{spectrum.n_dim} {spectrum.k!r} {spectrum.truncation_degree}"]
    position = 0
    for j in range(spectrum.truncation_degree + 1):
        for p in range(1, mode_dimension(j, spectrum.n_dim) + 1):
            if position >= len(spectrum.coefficients):
                break
            c = spectrum.coefficients[position]
            lines.append(f"{j} {p} {float(c.real)!r} {float(c.imag)!r}")
            position += 1
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_spectrum(path) -> ModalSpectrum:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError("spectrum file must start with 'N k degree'")
        n_dim = int(header[0])
        k = float(header[1])
        degree = int(header[2])
        coeffs = np.zeros(degree_count(degree, n_dim), dtype=complex)
        position = 0
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            j, p = int(parts[0]), int(parts[1])
            if not 1 <= p <= mode_dimension(j, n_dim):
                raise ValueError(f"multiplicity {p} out of range for degree {j}")
            idx = degree_count(j - 1, n_dim) + (p - 1) if j > 0 else 0
            if idx != position:
                raise ValueError("spectrum lines out of order")
            coeffs[idx] = complex(float(parts[2]), float(parts[3]))
            position += 1
    return ModalSpectrum(n_dim, k, coeffs)
