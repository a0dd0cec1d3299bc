"""Star-shaped obstacle class, Hausdorff distance, packings, hulls, visibility.

Obstacles are radial subgraphs Sigma(g) = {rho*omega : 0 <= rho <= g(omega)}
of a positive profile g on the circle.  The admissible class is

    X(m, beta, R0, delta) = { Sigma(g) : ||g||_{C^m} <= beta,
                              R0 <= g <= R0 + delta },

with ||g||_{C^m} = max over 0 <= i <= m of sup |g^(i)| (checked on a dense
grid with exact analytic derivatives).  Profiles come in two flavours: trig
polynomials (direct solver shapes) and sums of compactly supported
polynomial bumps on disjoint arcs (the packing construction, whose C^m
norms are exactly computable from the bump polynomial).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, cKDTree


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrigProfile:
    """g(theta) = a0 + sum_j (a_j cos j theta + b_j sin j theta)."""

    cos_coeffs: np.ndarray  # a_0 .. a_J
    sin_coeffs: np.ndarray  # b_1 .. b_J

    def __post_init__(self) -> None:
        a = np.atleast_1d(np.asarray(self.cos_coeffs, dtype=float))
        b = np.atleast_1d(np.asarray(self.sin_coeffs, dtype=float))
        if len(b) != max(0, len(a) - 1):
            raise ValueError("sin coefficients must be one shorter than cos")
        object.__setattr__(self, "cos_coeffs", a)
        object.__setattr__(self, "sin_coeffs", b)

    def derivative(self, theta: np.ndarray, order: int = 0) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        if order == 0:
            out += self.cos_coeffs[0]
        for j in range(1, len(self.cos_coeffs)):
            jn = float(j) ** order
            phase = order * math.pi / 2.0
            out += jn * self.cos_coeffs[j] * np.cos(j * theta + phase)
            out += jn * self.sin_coeffs[j - 1] * np.sin(j * theta + phase)
        return out

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        return self.derivative(theta, 0)


def _bump_poly(power: int) -> np.polynomial.Polynomial:
    """psi(u) = (1 - u^2)^power on [-1, 1]; vanishes to order `power` at +-1."""
    base = np.polynomial.Polynomial([1.0, 0.0, -1.0])
    return base**power


@dataclass(frozen=True)
class BumpProfile:
    """g = base + amplitude * sum over active cells of psi((theta-c)/w).

    psi(u) = (1 - u^2)^power, supported on |u| <= 1; cells are disjoint arcs,
    so suprema of derivatives are single-bump suprema.  power >= m + 1 makes
    the profile C^m across the cell edges.
    """

    base: float
    centers: np.ndarray
    half_width: float
    amplitude: float
    power: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "centers", np.asarray(self.centers, dtype=float))
        if self.half_width <= 0:
            raise ValueError("half_width must be > 0")

    def derivative(self, theta: np.ndarray, order: int = 0) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.base if order == 0 else 0.0)
        poly = _bump_poly(self.power).deriv(order)
        for c in self.centers:
            u = (theta - c + math.pi) % (2.0 * math.pi) - math.pi
            u /= self.half_width
            mask = np.abs(u) < 1.0
            if mask.any():
                out[mask] += (
                    self.amplitude * self.half_width ** (-order) * poly(u[mask])
                )
        return out

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        return self.derivative(theta, 0)


def bump_derivative_sup(power: int, order: int) -> float:
    """Exact sup over [-1, 1] of |d^order/du^order (1-u^2)^power|."""
    poly = _bump_poly(power).deriv(order)
    crit = [-1.0, 1.0]
    dpoly = poly.deriv(1)
    roots = dpoly.roots()
    crit.extend(float(r.real) for r in roots if abs(r.imag) < 1e-12 and -1 <= r.real <= 1)
    return max(abs(float(poly(c))) for c in crit)


# ---------------------------------------------------------------------------
# Obstacle class and boundary
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObstacleClass:
    m: int
    beta: float
    r0: float
    delta: float

    def __post_init__(self) -> None:
        if self.m < 1 or self.beta <= 0 or self.r0 <= 0 or self.delta <= 0:
            raise ValueError("need m >= 1 and positive beta, R0, delta")
        if self.r0 + self.delta > self.beta + 1e-12:
            raise ValueError("class requires R0 + delta <= beta")


@dataclass(frozen=True)
class StarBoundary:
    """Boundary of the radial subgraph Sigma(g) with its class parameters."""

    profile: object  # TrigProfile or BumpProfile
    obstacle_class: ObstacleClass

    @staticmethod
    def circle(radius: float, obstacle_class: ObstacleClass | None = None) -> "StarBoundary":
        cls = obstacle_class or ObstacleClass(m=2, beta=2.0 * radius, r0=radius, delta=radius / 2.0)
        return StarBoundary(TrigProfile(np.array([radius]), np.array([])), cls)

    def radius(self, theta: np.ndarray) -> np.ndarray:
        return self.profile(theta)

    def points(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        g = self.profile(theta)
        return np.stack([g * np.cos(theta), g * np.sin(theta)], axis=-1)

    def cm_norm(self, n_grid: int = 8192) -> float:
        """max over 0 <= i <= m of sup |g^(i)| on a dense grid."""
        theta = 2.0 * math.pi * np.arange(n_grid) / n_grid
        worst = 0.0
        for order in range(self.obstacle_class.m + 1):
            worst = max(worst, float(np.abs(self.profile.derivative(theta, order)).max()))
        return worst

    def in_class(self, n_grid: int = 8192, tol: float = 1e-9) -> bool:
        cls = self.obstacle_class
        theta = 2.0 * math.pi * np.arange(n_grid) / n_grid
        g = self.profile(theta)
        if g.min() < cls.r0 - tol or g.max() > cls.r0 + cls.delta + tol:
            return False
        return self.cm_norm(n_grid) <= cls.beta + tol


# ---------------------------------------------------------------------------
# Hausdorff distance between radial subgraphs
# ---------------------------------------------------------------------------


def radial_sup_distance(s1: StarBoundary, s2: StarBoundary, n_grid: int = 8192) -> float:
    """sup |g1 - g2|: cheap upper bound for d_H of co-centred star shapes."""
    theta = 2.0 * math.pi * np.arange(n_grid) / n_grid
    return float(np.abs(s1.radius(theta) - s2.radius(theta)).max())


def _feature_angles(boundary: StarBoundary) -> np.ndarray:
    """Angles that uniform sampling may miss (narrow packing bump supports)."""
    profile = boundary.profile
    if isinstance(profile, BumpProfile) and len(profile.centers):
        offsets = profile.half_width * np.linspace(-1.0, 1.0, 33)
        return (profile.centers[:, None] + offsets[None, :]).ravel()
    return np.empty(0)


def _directed_sup(
    s_from: StarBoundary, s_to: StarBoundary, n_coarse: int, n_dense: int
) -> float:
    """sup over x on boundary of s_from of dist(x, Sigma(s_to))."""
    extra = np.concatenate([_feature_angles(s_from), _feature_angles(s_to)])
    theta_d = 2.0 * math.pi * np.arange(n_dense) / n_dense
    if len(extra):
        theta_d = np.concatenate([theta_d, extra])
    cloud = s_to.points(theta_d)
    tree = cKDTree(cloud)

    def directed(theta: np.ndarray) -> np.ndarray:
        pts = s_from.points(theta)
        g_from = s_from.radius(theta)
        g_to = s_to.radius(theta)
        d, _ = tree.query(pts)
        # the radial gap is also an upper bound on the point-to-set distance
        # and is exact where the cloud's finite spacing dominates (e.g. the
        # hairline bumps of small-delta packings)
        d = np.minimum(np.asarray(d), np.maximum(g_from - g_to, 0.0))
        d[g_from <= g_to] = 0.0
        return d

    theta_c = 2.0 * math.pi * np.arange(n_coarse) / n_coarse
    if len(extra):
        theta_c = np.concatenate([theta_c, extra])
    d = directed(theta_c)
    best = float(d.max())
    # refinement pass around the maximizer
    centre = theta_c[int(d.argmax())]
    width = 2.0 * math.pi / n_coarse
    for _ in range(6):
        local = np.linspace(centre - width, centre + width, 33)
        dl = directed(local)
        centre = float(local[int(dl.argmax())])
        best = max(best, float(dl.max()))
        width /= 8.0
    return best


def hausdorff_distance(
    s1: StarBoundary, s2: StarBoundary, n_coarse: int = 4096, n_dense: int = 65536
) -> float:
    """Hausdorff distance between the solid radial subgraphs.

    The sup of dist(., other set) over each solid is attained on its
    boundary, so dense boundary samples with a local refinement pass around
    the maximizer reach ~1e-6 accuracy (validated against a brute-force
    point-cloud oracle in the tests).  Packing-bump supports narrower than
    the sample spacing are covered by targeted extra angles.
    """
    return max(
        _directed_sup(s1, s2, n_coarse, n_dense),
        _directed_sup(s2, s1, n_coarse, n_dense),
    )


# ---------------------------------------------------------------------------
# Packing construction (delta-discrete subsets)
# ---------------------------------------------------------------------------


class PackingInfeasible(ValueError):
    pass


@dataclass(frozen=True)
class Packing:
    members: list
    n_cells: int
    bump_peak: float  # = separation scale c_bump * delta
    log_family_size: float  # log of 2**n_cells
    delta: float


def packing_lower_bound(delta: float, delta0: float, n_dim: int, m: int) -> float:
    """log of the guaranteed packing count: 2^-N (delta0/delta)^((N-1)/m)."""
    if not 0 < delta <= delta0:
        raise PackingInfeasible(f"need 0 < delta <= delta0, got {delta} > {delta0}")
    return 2.0 ** (-n_dim) * (delta0 / delta) ** ((n_dim - 1) / m)


def build_delta_discrete(
    delta: float,
    obstacle_class: ObstacleClass,
    target_count: int,
    n_cells: int | None = None,
) -> Packing:
    """Materialize pairwise-separated class members differing by arc bumps.

    Profiles are g = R0 + delta * c_bump * sum_c sigma_c psi_c with sigma in
    {0,1}^n_cells and disjoint bump arcs; distinct sign vectors give
    d_H >= delta * c_bump.  c_bump <= 1 is the largest factor keeping every
    member inside the C^m ball; the construction is infeasible when
    delta > delta0 or when no positive c_bump fits.
    """
    cls = obstacle_class
    if not 0 < delta <= cls.delta:
        raise PackingInfeasible(f"delta={delta} outside (0, {cls.delta}]")
    if target_count < 1:
        raise ValueError("target_count must be >= 1")
    if n_cells is None:
        # enough cells for the requested member count and for the guaranteed
        # packing count at this delta
        needed = packing_lower_bound(delta, cls.delta, 2, cls.m) / math.log(2.0)
        n_cells = max(1, int(math.ceil(math.log2(max(2, target_count)))), int(math.ceil(needed)))
    power = cls.m + 1
    half_width = 0.9 * math.pi / n_cells
    sups = [bump_derivative_sup(power, i) for i in range(cls.m + 1)]
    c_bump = 1.0
    for order in range(1, cls.m + 1):
        bound = cls.beta / (delta * half_width ** (-order) * sups[order])
        c_bump = min(c_bump, 0.999 * bound)
    if c_bump <= 0.0 or (cls.r0 + delta > cls.beta):
        raise PackingInfeasible("no admissible bump amplitude for these parameters")
    centers = 2.0 * math.pi * (np.arange(n_cells) + 0.5) / n_cells
    count = min(target_count, 2**min(n_cells, 62))
    members = []
    for code in range(count):
        active = [c for c in range(min(n_cells, 62)) if (code >> c) & 1]
        profile = BumpProfile(
            base=cls.r0,
            centers=centers[active],
            half_width=half_width,
            amplitude=delta * c_bump,
            power=power,
        )
        members.append(StarBoundary(profile, cls))
    return Packing(
        members=members,
        n_cells=n_cells,
        bump_peak=delta * c_bump,
        log_family_size=n_cells * math.log(2.0),
        delta=delta,
    )


# ---------------------------------------------------------------------------
# Convex hull of a union and the visibility measure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HullK:
    """Convex hull of sampled boundaries, as a CCW vertex polygon.

    The hull contains the origin (it contains B_{R0}), so vertex angles are
    strictly increasing along the CCW traversal and the radial exit edge of
    any direction is a binary search away.
    """

    vertices: np.ndarray  # (n, 2), counterclockwise, rolled to min angle

    def __post_init__(self) -> None:
        v = np.asarray(self.vertices, dtype=float)
        area2 = float(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))
        if area2 < 0:
            v = v[::-1]
        ang = np.arctan2(v[:, 1], v[:, 0])
        v = np.roll(v, -int(np.argmin(ang)), axis=0)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "_angles", np.arctan2(v[:, 1], v[:, 0]))
        object.__setattr__(self, "_edges", np.roll(v, -1, axis=0) - v)

    @staticmethod
    def of_union(s1: StarBoundary, s2: StarBoundary, n_samples: int = 65536) -> "HullK":
        theta = 2.0 * math.pi * np.arange(n_samples) / n_samples
        pts = np.vstack([s1.points(theta), s2.points(theta)])
        hull = ConvexHull(pts)
        return HullK(vertices=pts[hull.vertices])

    def support(self, direction: np.ndarray) -> float:
        """Support function h(d) = max over vertices of d . v."""
        return float(np.max(self.vertices @ np.asarray(direction, dtype=float)))

    def contains(self, point: np.ndarray, tol: float = 0.0) -> bool:
        v = self.vertices
        edge = self._edges
        rel = np.asarray(point, dtype=float) - v
        cross = edge[:, 0] * rel[:, 1] - edge[:, 1] * rel[:, 0]
        return bool(np.all(cross >= -tol))

    def beyond_support_line(self, x: np.ndarray, phi: np.ndarray) -> np.ndarray:
        """Whether x lies strictly past the supporting line at the radial
        exit point P(phi), vectorized over an array of directions."""
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        ang = self._angles
        base = ang[0]
        rel = (phi - base) % (2.0 * math.pi) + base
        idx = np.searchsorted(ang, rel, side="right") - 1
        idx = np.clip(idx, 0, len(ang) - 1)
        v = self.vertices[idx]
        e = self._edges[idx]
        normal = np.stack([e[:, 1], -e[:, 0]], axis=-1)
        flip = np.einsum("ij,ij->i", normal, v) < 0
        normal[flip] = -normal[flip]
        x = np.asarray(x, dtype=float)
        return np.einsum("ij,ij->i", normal, x[None, :] - v) > 0.0


def visibility_measure(hull: HullK, x: np.ndarray, n_initial: int = 4096) -> float:
    """Arc measure of ray directions whose supporting half-plane contains x.

    f(x) = |{phi : x strictly beyond the supporting line at the radial exit
    point P(phi)}|; zero inside K (interior points are rejected).  The
    indicator transitions are refined by bisection to ~1e-10, so the result
    is accurate to the hull's own polygonal resolution.
    """
    x = np.asarray(x, dtype=float)
    if hull.contains(x, tol=1e-12):
        raise ValueError("visibility measure is zero inside the hull; exterior point required")
    width = 2.0 * math.pi / n_initial
    phis = width * np.arange(n_initial)
    flags = hull.beyond_support_line(x, phis)
    measure = float(flags.sum()) * width
    correction = 0.0
    transitions = np.nonzero(flags != np.roll(flags, -1))[0]
    for i in transitions:
        lo, hi = phis[i], phis[i] + width
        f_lo = bool(flags[i])
        for _ in range(34):
            mid = 0.5 * (lo + hi)
            if bool(hull.beyond_support_line(x, mid)[0]) == f_lo:
                lo = mid
            else:
                hi = mid
        boundary = 0.5 * (lo + hi)
        if f_lo:
            correction += boundary - (phis[i] + width)
        else:
            correction += (phis[i] + width) - boundary
    return measure + correction
