import math

import numpy as np
import pytest
from mpmath import mp

from helmstab import geometry as geo


CLS = geo.ObstacleClass(m=2, beta=3.0, r0=1.0, delta=0.5)


def trig_boundary(a0, pairs, cls=CLS):
    degree = max(j for j, _, _ in pairs) if pairs else 0
    a = np.zeros(degree + 1)
    b = np.zeros(degree)
    a[0] = a0
    for j, aj, bj in pairs:
        a[j] = aj
        b[j - 1] = bj
    return geo.StarBoundary(geo.TrigProfile(a, b), cls)


def brute_hausdorff(s1, s2, n_cloud=100000, n_probe=4096):
    """Point-cloud double-sup oracle: chunked exhaustive min-distance."""
    theta_cloud = 2.0 * math.pi * np.arange(n_cloud) / n_cloud
    theta_probe = 2.0 * math.pi * np.arange(n_probe) / n_probe

    def directed(sa, sb):
        pa = sa.points(theta_probe)
        ga = sa.radius(theta_probe)
        cloud = sb.points(theta_cloud)
        pa_sq = (pa**2).sum(1)
        mins = np.full(n_probe, np.inf)
        for start in range(0, n_cloud, 16384):
            block = cloud[start : start + 16384]
            d2 = pa_sq[:, None] + (block**2).sum(1)[None, :] - 2.0 * pa @ block.T
            mins = np.minimum(mins, d2.min(axis=1))
        mins = np.sqrt(np.maximum(mins, 0.0))
        mins[ga <= sb.radius(theta_probe)] = 0.0
        return mins.max()

    return max(directed(s1, s2), directed(s2, s1))


# ---------------------------------------------------------------------------
# Profiles and class membership
# ---------------------------------------------------------------------------


def test_trig_profile_derivatives():
    prof = geo.TrigProfile(np.array([1.0, 0.2]), np.array([0.1]))
    theta = np.linspace(0, 2 * math.pi, 7)
    h = 1e-6
    num = (prof(theta + h) - prof(theta - h)) / (2 * h)
    assert np.abs(num - prof.derivative(theta, 1)).max() <= 1e-8


def test_bump_profile_smoothness_and_derivatives():
    prof = geo.BumpProfile(base=1.0, centers=np.array([0.5]), half_width=0.3, amplitude=0.1, power=3)
    theta = np.linspace(0.1, 0.9, 33)
    h = 1e-6
    num = (prof(theta + h) - prof(theta - h)) / (2 * h)
    assert np.abs(num - prof.derivative(theta, 1)).max() <= 1e-7
    # compact support
    assert prof(np.array([1.5]))[0] == 1.0
    assert prof(np.array([0.5]))[0] == 1.1


def test_class_membership_checks():
    assert geo.StarBoundary.circle(1.0, CLS).in_class()
    wavy = trig_boundary(1.2, [(3, 0.1, 0.0)])
    assert wavy.in_class()
    spiky = trig_boundary(1.2, [(9, 0.2, 0.0)])  # |g''| ~ 16 > beta
    assert not spiky.in_class()


# ---------------------------------------------------------------------------
# Hausdorff distance
# ---------------------------------------------------------------------------


def test_hausdorff_identical_and_concentric():
    c1 = geo.StarBoundary.circle(1.0, CLS)
    c2 = trig_boundary(1.2, [])
    assert geo.hausdorff_distance(c1, c1) == 0.0
    assert abs(geo.hausdorff_distance(c1, c2) - 0.2) <= 1e-6


def test_hausdorff_vs_brute_force_oracle():
    s1 = trig_boundary(1.2, [(2, 0.08, -0.03), (3, 0.0, 0.05)])
    s2 = trig_boundary(1.15, [(1, 0.05, 0.0), (4, -0.04, 0.02)])
    ours = geo.hausdorff_distance(s1, s2)
    oracle = brute_hausdorff(s1, s2)
    assert abs(ours - oracle) <= 1e-6


def test_hausdorff_metric_properties():
    rng = np.random.default_rng(7)
    shapes = []
    for _ in range(3):
        pairs = [(j, 0.05 * rng.standard_normal(), 0.05 * rng.standard_normal()) for j in (1, 2, 3)]
        shapes.append(trig_boundary(1.2, pairs))
    d01 = geo.hausdorff_distance(shapes[0], shapes[1])
    d10 = geo.hausdorff_distance(shapes[1], shapes[0])
    assert d01 == d10  # symmetric by construction
    d12 = geo.hausdorff_distance(shapes[1], shapes[2])
    d02 = geo.hausdorff_distance(shapes[0], shapes[2])
    assert d02 <= d01 + d12 + 1e-6


def test_radial_sup_upper_bounds_hausdorff():
    s1 = trig_boundary(1.2, [(2, 0.08, 0.0)])
    s2 = trig_boundary(1.25, [(3, 0.0, 0.06)])
    assert geo.hausdorff_distance(s1, s2) <= geo.radial_sup_distance(s1, s2) + 1e-7


# ---------------------------------------------------------------------------
# Packing construction
# ---------------------------------------------------------------------------


def test_packing_lower_bound_values(mp50):
    assert abs(geo.packing_lower_bound(0.5, 0.5, 2, 2) - 0.25) == 0.0
    assert abs(geo.packing_lower_bound(0.5 / 4, 0.5, 2, 2) - 0.5) <= 1e-15
    rng = np.random.default_rng(0)
    from formula_oracles import packing_log

    for _ in range(100):
        delta0 = float(rng.uniform(0.1, 2.0))
        delta = float(rng.uniform(0.001, 1.0)) * delta0
        n_dim = int(rng.integers(2, 4))
        m = int(rng.integers(1, 5))
        ours = geo.packing_lower_bound(delta, delta0, n_dim, m)
        ref = float(packing_log(delta, delta0, n_dim, m))
        assert abs(ours / ref - 1.0) <= 1e-12
    with pytest.raises(geo.PackingInfeasible):
        geo.packing_lower_bound(0.6, 0.5, 2, 2)


def test_one_cell_packing():
    packing = geo.build_delta_discrete(0.3, CLS, target_count=2, n_cells=1)
    assert len(packing.members) == 2
    flat, bumped = packing.members
    d = geo.hausdorff_distance(flat, bumped)
    assert abs(d - packing.bump_peak) <= 1e-6
    assert packing.bump_peak >= 0.3 * 0.5  # c_bump stays macroscopic here
    assert all(m.in_class() for m in packing.members)


def test_sixteen_member_packing_separation():
    packing = geo.build_delta_discrete(0.2, CLS, target_count=16, n_cells=4)
    assert len(packing.members) == 16
    assert all(m.in_class() for m in packing.members)
    worst = math.inf
    for i in range(16):
        for j in range(i + 1, 16):
            d = geo.hausdorff_distance(
                packing.members[i], packing.members[j], n_coarse=512, n_dense=8192
            )
            worst = min(worst, d)
    assert worst >= packing.bump_peak * (1.0 - 1e-6)
    assert packing.log_family_size == 4 * math.log(2.0)


def test_packing_infeasible_above_delta0():
    with pytest.raises(geo.PackingInfeasible):
        geo.build_delta_discrete(0.7, CLS, target_count=2)


def test_microscopic_delta_packing_still_separates():
    packing = geo.build_delta_discrete(1e-10, CLS, target_count=4, n_cells=2000)
    d = geo.hausdorff_distance(packing.members[0], packing.members[1])
    assert abs(d - packing.bump_peak) <= 1e-3 * packing.bump_peak
    assert all(m.in_class() for m in packing.members[:2])


# ---------------------------------------------------------------------------
# Convex hull and visibility
# ---------------------------------------------------------------------------


def test_hull_of_two_identical_discs_is_the_disc():
    disc = geo.StarBoundary.circle(1.0, CLS)
    hull = geo.HullK.of_union(disc, disc, n_samples=2048)
    radii = np.linalg.norm(hull.vertices, axis=1)
    assert abs(radii - 1.0).max() <= 1e-6
    assert hull.contains(np.array([0.3, -0.4]))
    assert not hull.contains(np.array([1.2, 0.0]))


def test_hull_contains_both_sample_sets_and_support_is_max():
    disc = geo.StarBoundary.circle(1.0, CLS)
    egg = trig_boundary(1.15, [(2, 0.1, 0.0)])
    hull = geo.HullK.of_union(disc, egg, n_samples=4096)
    theta = 2.0 * math.pi * np.arange(64) / 64
    for pts in (disc.points(theta), egg.points(theta)):
        assert all(hull.contains(p, tol=1e-9) for p in pts)
    rng = np.random.default_rng(1)
    for _ in range(12):
        d = rng.standard_normal(2)
        d /= np.linalg.norm(d)
        brute = float(np.max(hull.vertices @ d))
        assert abs(hull.support(d) - brute) == 0.0


def test_visibility_matches_disc_closed_form():
    disc = geo.StarBoundary.circle(1.0, CLS)
    hull = geo.HullK.of_union(disc, disc, n_samples=1 << 17)
    for d in (1e-3, 1e-2, 0.1, 1.0):
        f = geo.visibility_measure(hull, np.array([1.0 + d, 0.0]))
        assert abs(f - 2.0 * math.acos(1.0 / (1.0 + d))) <= 1e-4


def test_visibility_sqrt_scaling_and_far_limit():
    disc = geo.StarBoundary.circle(1.0, CLS)
    hull = geo.HullK.of_union(disc, disc, n_samples=1 << 16)
    ds = [1e-3, 1e-2, 0.1, 1.0]
    fitted = min(
        geo.visibility_measure(hull, np.array([1.0 + d, 0.0])) / min(math.sqrt(d), 1.0)
        for d in ds
    )
    assert fitted > 0.0
    far = geo.visibility_measure(hull, np.array([5e4, 0.0]))
    assert abs(far - math.pi) <= 1e-3


def test_visibility_rejects_interior_points():
    disc = geo.StarBoundary.circle(1.0, CLS)
    hull = geo.HullK.of_union(disc, disc, n_samples=1024)
    with pytest.raises(ValueError):
        geo.visibility_measure(hull, np.array([0.2, 0.1]))
