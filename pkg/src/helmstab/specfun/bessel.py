"""Public Bessel/Hankel evaluations, scalar and vectorized.

Overflow policy: plain-float entry points emit :class:`UnderflowWarning` /
:class:`OverflowWarning` and return 0.0 / +-inf when a value leaves the
double range; :func:`helmstab.specfun.besseljy` always carries the full
scaled representation, and :func:`hankel1_log_abs` / :func:`hankel1_polar`
never overflow.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .core import BesselJY, Scaled, besseljy

_W_EPS = 1.0e-16
_FPMIN = 1.0e-290
_XMIN = 2.0
_MAXIT = 200000


class RangeWarning(UserWarning):
    """A requested plain-float value left the double range."""


class UnderflowWarning(RangeWarning):
    pass


class OverflowWarning(RangeWarning):
    pass


def _signaled_float(value: Scaled, label: str, nu: float, z: float) -> float:
    if value.underflows:
        warnings.warn(
            f"{label}(nu={nu}, z={z}) underflows the double range; returning 0.0 "
            "(use besseljy for the scaled representation)",
            UnderflowWarning,
            stacklevel=3,
        )
        return math.copysign(0.0, value.man)
    if value.overflows:
        warnings.warn(
            f"{label}(nu={nu}, z={z}) overflows the double range; returning inf "
            "(use besseljy for the scaled representation)",
            OverflowWarning,
            stacklevel=3,
        )
        return math.inf if value.man > 0 else -math.inf
    return value.to_float()


def bessel_j(nu: float, z: float) -> float:
    """Bessel function of the first kind J_nu(z), nu >= 0, z > 0."""
    return _signaled_float(besseljy(nu, z).j, "J", nu, z)


def bessel_y(nu: float, z: float) -> float:
    """Bessel function of the second kind Y_nu(z), nu >= 0, z > 0."""
    return _signaled_float(besseljy(nu, z).y, "Y", nu, z)


def hankel1(nu: float, z: float) -> complex:
    """Hankel function of the first kind H^(1)_nu(z) = J_nu(z) + i Y_nu(z)."""
    r = besseljy(nu, z)
    return complex(_signaled_float(r.j, "J", nu, z), _signaled_float(r.y, "Y", nu, z))


def hankel1_log_abs(nu: float, z: float) -> float:
    """log |H^(1)_nu(z)|, finite for every nu >= 0, z > 0."""
    return besseljy(nu, z).hankel_log_abs()


def hankel1_polar(nu: float, z: float) -> tuple[float, float]:
    """(log |H^(1)_nu(z)|, arg H^(1)_nu(z)), both overflow-safe."""
    r = besseljy(nu, z)
    return r.hankel_log_abs(), r.hankel_phase()


# ---------------------------------------------------------------------------
# Vectorized orders 0 and 1 (the only orders the boundary solver needs).
# Same algorithm as the scalar path, with lane masking for the convergence
# tests; falls back to the scalar routine on near-zero lanes.
# ---------------------------------------------------------------------------


def _cf1_vec(nu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    xi = 1.0 / x
    h = np.full_like(x, nu) * xi
    np.copyto(h, _FPMIN, where=np.abs(h) < _FPMIN)
    b = 2.0 * nu * xi
    d = np.zeros_like(x)
    c = h.copy()
    isign = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    min_iter = np.where(x > nu, (x - nu).astype(int) + 2, 1)
    for i in range(1, _MAXIT):
        b = b + 2.0 * xi
        d = np.where(active, b - d, d)
        np.copyto(d, _FPMIN, where=active & (np.abs(d) < _FPMIN))
        c = np.where(active, b - 1.0 / c, c)
        np.copyto(c, _FPMIN, where=active & (np.abs(c) < _FPMIN))
        dinv = np.where(active, 1.0 / d, d)
        delta = np.where(active, c * dinv, 1.0)
        h = np.where(active, h * delta, h)
        isign = np.where(active & (dinv < 0.0), -isign, isign)
        d = dinv
        done = (np.abs(delta - 1.0) <= _W_EPS) & (i >= min_iter)
        active &= ~done
        if not active.any():
            return h, isign
    raise ArithmeticError("vectorized CF1 did not converge")


def _cf2_vec(xmu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    xi = 1.0 / x
    a0 = 0.25 - xmu * xmu
    p = -0.5 * xi
    q = np.ones_like(x)
    br = 2.0 * x
    bi = np.full_like(x, 2.0)
    fact = a0 * xi / (p * p + q * q)
    cr = br + q * fact
    ci = bi + p * fact
    den = br * br + bi * bi
    dr = br / den
    di = -bi / den
    dlr = cr * dr - ci * di
    dli = cr * di + ci * dr
    temp = p * dlr - q * dli
    q = p * dli + q * dlr
    p = temp
    a = np.full_like(x, a0)
    active = np.ones(x.shape, dtype=bool)
    for i in range(2, _MAXIT):
        a = a + np.where(active, 2.0 * (i - 1), 0.0)
        bi = bi + np.where(active, 2.0, 0.0)
        dr = np.where(active, a * dr + br, dr)
        di = np.where(active, a * di + bi, di)
        small = active & (np.abs(dr) + np.abs(di) < _FPMIN)
        np.copyto(dr, _FPMIN, where=small)
        fact = np.where(active, a / (cr * cr + ci * ci), 0.0)
        cr = np.where(active, br + cr * fact, cr)
        ci = np.where(active, bi - ci * fact, ci)
        small = active & (np.abs(cr) + np.abs(ci) < _FPMIN)
        np.copyto(cr, _FPMIN, where=small)
        den = dr * dr + di * di
        dr2 = np.where(active, dr / den, dr)
        di2 = np.where(active, -di / den, di)
        dlr = cr * dr2 - ci * di2
        dli = cr * di2 + ci * dr2
        temp = p * dlr - q * dli
        q = np.where(active, p * dli + q * dlr, q)
        p = np.where(active, temp, p)
        dr, di = dr2, di2
        done = np.abs(dlr - 1.0) + np.abs(dli) <= _W_EPS
        active &= ~done
        if not active.any():
            return p, q
    raise ArithmeticError("vectorized CF2 did not converge")


def _temme_y0_vec(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(Y_0(x), Y_1(x)) for 0 < x < 2, vectorized Temme series at mu = 0."""
    from .core import _recip_gamma_pair

    gam1, gam2, _, _ = _recip_gamma_pair(0.0)
    x2 = 0.5 * x
    d = -np.log(x2)
    ff = 2.0 / math.pi * (gam1 + gam2 * d)
    p = np.full_like(x, 1.0 / math.pi)
    q = np.full_like(x, 1.0 / math.pi)
    c = np.ones_like(x)
    dd = -x2 * x2
    total = ff.copy()  # r = 0 at mu = 0
    total1 = p.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, _MAXIT):
        ff = (i * ff + p + q) / (i * i)
        c = np.where(active, c * dd / i, c)
        p = np.where(active, p / i, p)
        q = np.where(active, q / i, q)
        delta = c * ff
        total = np.where(active, total + delta, total)
        delta1 = c * p - i * delta
        total1 = np.where(active, total1 + delta1, total1)
        done = np.abs(delta) < (1.0 + np.abs(total)) * _W_EPS
        active &= ~done
        if not active.any():
            break
    else:  # pragma: no cover
        raise ArithmeticError("vectorized Temme series did not converge")
    return -total, -total1 * (2.0 / x)


def jy01(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(J_0, Y_0, J_1, Y_1) for an array of positive arguments.

    Vectorized Steed/Temme path, consistent with the scalar besseljy to
    ~1e-13; near-zero lanes of J_1/Y_1 are recomputed through the scalar
    routine.  Used by the boundary-integral assembly where millions of
    fixed-order evaluations are needed.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("arguments must be > 0")
    flat = x.ravel()
    j0 = np.empty_like(flat)
    y0 = np.empty_like(flat)
    j1 = np.empty_like(flat)
    y1 = np.empty_like(flat)

    small = flat < _XMIN
    if small.any():
        xs = flat[small]
        w = 2.0 / (math.pi * xs)
        f0, _ = _cf1_vec(0.0, xs)
        y0s, y1s = _temme_y0_vec(xs)
        y0p = -y1s  # Y'_0 = -Y_1
        j0s = w / (y0p - f0 * y0s)
        j1s = -f0 * j0s  # J_1 = -J'_0
        j0[small], y0[small], j1[small], y1[small] = j0s, y0s, j1s, y1s

    large = ~small
    if large.any():
        xl = flat[large]
        w = 2.0 / (math.pi * xl)
        f1, isign = _cf1_vec(1.0, xl)
        p, q = _cf2_vec(1.0, xl)
        gam = (p - f1) / q
        j1l = np.sign(isign) * np.sqrt(w / ((p - f1) * gam + q))
        y1l = j1l * gam
        j1p = f1 * j1l
        y1p = y1l * (p + q / gam)
        xi = 1.0 / xl
        j0l = j1p + xi * j1l  # J_0 = J'_1 + J_1/x
        y0l = y1p + xi * y1l
        # near-zero lanes of J_1 or Y_1: redo through the scalar safeguards
        bad = (np.abs(f1) > 4.0 * (1.0 + xi)) | (np.abs(gam) < 0.25)
        if bad.any():
            for idx in np.nonzero(bad)[0]:
                r = besseljy(1.0, float(xl[idx]))
                j1l[idx] = r.j.to_float()
                y1l[idx] = r.y.to_float()
                j0l[idx] = r.jp.to_float() + xi[idx] * j1l[idx]
                y0l[idx] = r.yp.to_float() + xi[idx] * y1l[idx]
        j0[large], y0[large], j1[large], y1[large] = j0l, y0l, j1l, y1l

    shape = x.shape
    return j0.reshape(shape), y0.reshape(shape), j1.reshape(shape), y1.reshape(shape)


def hankel1_01(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(H^(1)_0, H^(1)_1) for an array of positive arguments."""
    j0, y0, j1, y1 = jy01(x)
    return j0 + 1j * y0, j1 + 1j * y1
