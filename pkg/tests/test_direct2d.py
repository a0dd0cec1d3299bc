import cmath
import math
import warnings

import numpy as np
import pytest

from helmstab import direct2d as d2
from helmstab import modal
from helmstab.geometry import ObstacleClass, StarBoundary, TrigProfile
from helmstab.specfun import besseljy

DISC = StarBoundary.circle(1.0)
STAR_CLS = ObstacleClass(m=2, beta=4.0, r0=0.7, delta=0.65)
# star shape with no rotation/reflection symmetry
STAR = StarBoundary(
    TrigProfile(np.array([1.0, 0.0, 0.2, 0.0]), np.array([0.0, 0.0, 0.1])), STAR_CLS
)
ANGLES_256 = 2.0 * math.pi * np.arange(256) / 256


@pytest.fixture(scope="module")
def disc_k5():
    system = d2.assemble_cfie(DISC, 5.0, 256)
    density = d2.solve_density(system, d2.IncidentWave.from_angle(5.0, 0.0))
    return system, density


@pytest.fixture(scope="module")
def star_k4():
    return d2.assemble_cfie(STAR, 4.0, 384)


def hankel_value(nu, z):
    rec = besseljy(nu, z)
    return complex(rec.j.to_float(), rec.y.to_float())


def mie_field(a, k, omega_angle, point):
    """Scattered field of the sound-soft disc by the separation series."""
    r = np.linalg.norm(point)
    theta = math.atan2(point[1], point[0])
    total = 0.0 + 0.0j
    for m in range(-d2.mie_mode_count(k, a), d2.mie_mode_count(k, a) + 1):
        h = hankel_value(abs(m), k * r)
        if m < 0 and (-m) % 2 == 1:
            h = -h
        total += -((1j) ** m) * d2.mie_reflection(m, k, a) * h * cmath.exp(1j * m * (theta - omega_angle))
    return total


# ---------------------------------------------------------------------------
# Fundamental solution
# ---------------------------------------------------------------------------


def test_fundamental_solution_symmetry_and_value():
    x, y, k = np.array([0.3, 0.4]), np.array([-0.2, 0.9]), 2.0
    assert d2.fundamental_solution(k, x, y) == d2.fundamental_solution(k, y, x)
    expected = 0.25j * hankel_value(0.0, k * float(np.linalg.norm(x - y)))
    assert abs(d2.fundamental_solution(k, x, y) - expected) <= 1e-15
    with pytest.raises(ValueError):
        d2.fundamental_solution(k, x, x)


def test_fundamental_solution_satisfies_helmholtz():
    k, y, x = 3.0, np.array([0.1, -0.2]), np.array([1.1, 0.7])
    h = 1e-4
    centre = d2.fundamental_solution(k, x, y)
    stencil = -4.0 * centre
    for dx in ((h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)):
        stencil += d2.fundamental_solution(k, x + np.array(dx), y)
    residual = stencil / h**2 + k**2 * centre
    # O(h^2) discretization of an O(1) fourth derivative
    assert abs(residual) <= 1e-4


def test_fundamental_gradient_matches_finite_differences():
    k, x, y = 2.5, np.array([0.9, 0.2]), np.array([-0.1, 0.5])
    g = d2.fundamental_gradient_y(k, x, y)
    h = 1e-6
    for axis in range(2):
        e = np.zeros(2)
        e[axis] = h
        fd = (d2.fundamental_solution(k, x, y + e) - d2.fundamental_solution(k, x, y - e)) / (2 * h)
        assert abs(g[axis] - fd) <= 1e-8


# ---------------------------------------------------------------------------
# Quadrature and assembly
# ---------------------------------------------------------------------------


def test_log_quadrature_exact_on_trig_polynomials():
    n = 64
    w = d2.log_quadrature_weights(n)
    t = 2.0 * math.pi * np.arange(n) / n
    # int ln(4 sin^2((t - tau)/2)) dtau = 0
    assert abs(w.sum()) <= 1e-12
    # against cos(m tau): exact value -(2 pi / m) cos(m t) at t = 0
    for m in (1, 2, 5, 11):
        quad = (w * np.cos(m * t)).sum()
        assert abs(quad + 2.0 * math.pi / m) <= 1e-12


def test_disc_matrix_diagonalizes_on_fourier_modes(disc_k5):
    system, _ = disc_k5
    t = system.grid.theta
    for m in (0, 1, 4, 9, -3):
        vec = np.exp(1j * m * t)
        lam = (system.matrix @ vec) / vec
        spread = np.abs(lam - lam[0]).max()
        assert spread <= 1e-11
        assert abs(lam[0] - d2.disc_cfie_eigenvalue(m, 5.0, 1.0)) <= 1e-11


def test_assembly_self_consistency_as_n_grows():
    coarse = d2.assemble_cfie(DISC, 2.0, 64)
    fine = d2.assemble_cfie(DISC, 2.0, 128)
    t = coarse.grid.theta
    vec_c = np.exp(1j * 3 * t)
    vec_f = np.exp(1j * 3 * fine.grid.theta)
    lam_c = (coarse.matrix @ vec_c)[0] / vec_c[0]
    lam_f = (fine.matrix @ vec_f)[0] / vec_f[0]
    assert abs(lam_c - lam_f) <= 1e-10


def test_coarse_grid_warning():
    with pytest.warns(d2.CoarseGridWarning):
        d2.assemble_cfie(DISC, 20.0, 64)


def test_s_kernel_symmetry():
    grid = d2.BoundaryGrid.build(STAR, 128)
    pts = grid.points
    r = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    assert np.abs(r - r.T).max() == 0.0


# ---------------------------------------------------------------------------
# Solve and fields
# ---------------------------------------------------------------------------


def test_solver_linearity_and_rotation_equivariance(disc_k5):
    system, density = disc_k5
    doubled = d2.solve_density(system, d2.IncidentWave(5.0, np.array([2.0, 0.0]) / 2.0))
    rhs2 = -2.0 * 2.0 * d2.IncidentWave.from_angle(5.0, 0.0).field(system.grid.points)
    psi2 = np.linalg.solve(system.matrix, rhs2)
    assert np.abs(psi2 - 2.0 * density.psi).max() <= 1e-10
    # rotating the incidence rotates the density (grid is rotation-invariant)
    shift = 8  # 8 * (2 pi / 256) rotation
    rotated = d2.solve_density(
        system, d2.IncidentWave.from_angle(5.0, 2.0 * math.pi * shift / 256)
    )
    assert np.abs(np.roll(density.psi, shift) - rotated.psi).max() <= 1e-9


def test_farfield_matches_mie_at_reference_orders(disc_k5):
    _, density = disc_k5
    ours = d2.eval_farfield(density, ANGLES_256)
    mie = d2.mie_farfield(1.0, 5.0, 0.0, ANGLES_256)
    rel = np.linalg.norm(ours - mie) / np.linalg.norm(mie)
    assert rel <= 1e-10


def test_scattered_field_matches_mie_series(disc_k5):
    _, density = disc_k5
    for point in (np.array([2.0, 0.0]), np.array([-1.1, 1.7]), np.array([0.0, 3.0])):
        ours = d2.eval_scattered(density, point[None, :])[0]
        assert abs(ours - mie_field(1.0, 5.0, 0.0, point)) <= 1e-11


def test_modal_synthesis_cross_check(disc_k5):
    _, density = disc_k5
    spec = d2.mie_spectrum(1.0, 5.0, 0.0)
    for r, theta in ((2.0, 0.4), (1.5, 2.2)):
        point = np.array([[r * math.cos(theta), r * math.sin(theta)]])
        solver_value = d2.eval_scattered(density, point)[0]
        modal_value = modal.evaluate_field(spec, r, theta)
        assert abs(solver_value - modal_value) <= 1e-8


def test_sound_soft_trace_extrapolates_to_zero():
    # offsets stay above the near-boundary quadrature floor (~e^(-n d));
    # a degree-5 fit in the offset extrapolates the vanishing total trace
    k = 5.0
    system = d2.assemble_cfie(DISC, k, 768)
    density = d2.solve_density(system, d2.IncidentWave.from_angle(k, 0.0))
    wave = d2.IncidentWave.from_angle(k, 0.0)
    offsets = np.linspace(0.025, 0.065, 6)
    theta = 1.1
    values = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", d2.NearBoundaryWarning)
        for off in offsets:
            pt = np.array([[(1.0 + off) * math.cos(theta), (1.0 + off) * math.sin(theta)]])
            values.append(d2.eval_scattered(density, pt)[0] + wave.field(pt)[0])
    values = np.array(values)
    trace = complex(
        np.polyfit(offsets, values.real, 5)[-1], np.polyfit(offsets, values.imag, 5)[-1]
    )
    assert abs(trace) <= 1e-6
    assert np.all(np.diff(np.abs(values)) > 0)


def test_sommerfeld_decay_rate(disc_k5):
    _, density = disc_k5
    ff = d2.eval_farfield(density, np.array([0.4]))[0]
    gaps = []
    for r in (30.0, 60.0, 120.0):
        pt = np.array([[r * math.cos(0.4), r * math.sin(0.4)]])
        u = d2.eval_scattered(density, pt)[0]
        gaps.append(abs(math.sqrt(r) * u - cmath.exp(1j * 5.0 * r) * ff))
    assert 1.8 <= gaps[0] / gaps[1] <= 2.2
    assert 1.8 <= gaps[1] / gaps[2] <= 2.2


def test_near_boundary_warning(disc_k5):
    _, density = disc_k5
    with pytest.warns(d2.NearBoundaryWarning):
        d2.eval_scattered(density, np.array([[1.001, 0.0]]))


# ---------------------------------------------------------------------------
# Validation identities
# ---------------------------------------------------------------------------


def test_optical_theorem_on_disc(disc_k5):
    _, density = disc_k5
    samples = d2.eval_farfield(density, ANGLES_256)
    forward = d2.eval_farfield(density, np.array([0.0]))[0]
    assert d2.optical_theorem_residual(samples, forward, 5.0) <= 1e-10
    assert d2.optical_theorem_residual(np.zeros(8, dtype=complex), 0.0, 5.0) == 0.0


def test_optical_theorem_on_star(star_k4):
    density = d2.solve_density(star_k4, d2.IncidentWave.from_angle(4.0, 0.7))
    samples = d2.eval_farfield(density, ANGLES_256)
    forward = d2.eval_farfield(density, np.array([0.7]))[0]
    assert d2.optical_theorem_residual(samples, forward, 4.0) <= 1e-6


def test_reciprocity_disc_and_star():
    pairs = [(0.0, 0.0), (0.3, 1.9), (2.5, 0.8), (4.0, 5.2)]
    assert d2.reciprocity_residual(DISC, 5.0, pairs, 256) <= 1e-8
    assert d2.reciprocity_residual(STAR, 4.0, pairs, 384) <= 1e-6


def test_inverse_norm_probe_basics(disc_k5):
    system, _ = disc_k5
    probe = d2.inverse_norm_probe(system)
    # scaling: doubling the matrix halves the probe
    doubled = d2.NystromSystem(grid=system.grid, k=system.k, matrix=2.0 * system.matrix)
    assert abs(d2.inverse_norm_probe(doubled) - probe / 2.0) <= 1e-6 * probe
    identity = d2.NystromSystem(
        grid=system.grid, k=system.k, matrix=np.eye(system.grid.n_points, dtype=complex)
    )
    assert abs(d2.inverse_norm_probe(identity) - 1.0) <= 1e-9


def test_apriori_farfield_table_and_layer_caps():
    rows = d2.apriori_farfield_table(DISC, [1.0, 2.0, 4.0])
    norms = [row["farfield_l2"] for row in rows]
    assert max(norms) <= 10.0  # uniformly capped on the disc
    for row in rows:
        assert row["psi_l2"] > 0.0
        assert row["single_layer_cap"] > 0.0


def test_single_layer_farfield_cap(disc_k5):
    # |w_inf| <= k^(-1/2)/(2 sqrt(2 pi)) sqrt(per) ||psi|| for the pure
    # single layer with the solved density
    system, density = disc_k5
    grid = system.grid
    k = 5.0
    psi_norm = math.sqrt(float(np.sum(grid.weights * np.abs(density.psi) ** 2)))
    cap = k**-0.5 / (2.0 * math.sqrt(2.0 * math.pi)) * math.sqrt(grid.perimeter()) * psi_norm
    # single-layer far field: (i/2) e^{-i pi/4} (2 pi)^{-1/2} k^{-1/2} int psi e^{-ik xhat.y}
    for angle in (0.0, 1.0, 2.5):
        xhat = np.array([math.cos(angle), math.sin(angle)])
        phase = np.exp(-1j * k * (grid.points @ xhat))
        w_inf = (
            0.5j
            * cmath.exp(-0.25j * math.pi)
            / math.sqrt(2.0 * math.pi)
            * k**-0.5
            * np.sum(grid.weights * density.psi * phase)
        )
        assert abs(w_inf) <= cap * (1.0 + 1e-12)


def test_interior_single_layer_decay_cap(disc_k5):
    # |w(x)| <= (1/4) sqrt(per) ||psi|| |H_0(k d)| at exterior points
    system, density = disc_k5
    grid = system.grid
    k = 5.0
    psi_norm = math.sqrt(float(np.sum(grid.weights * np.abs(density.psi) ** 2)))
    for radius in (1.5, 2.5, 6.0):
        x = np.array([radius, 0.0])
        diff = x[None, :] - grid.points
        r = np.linalg.norm(diff, axis=-1)
        h0 = np.array([hankel_value(0.0, k * float(v)) for v in r])
        w = 0.25j * np.sum(grid.weights * density.psi * h0)
        d = radius - 1.0
        cap = 0.25 * math.sqrt(grid.perimeter()) * psi_norm * abs(hankel_value(0.0, k * d))
        assert abs(w) <= cap * (1.0 + 1e-12)


# ---------------------------------------------------------------------------
# Mie spectrum consistency
# ---------------------------------------------------------------------------


def test_mie_spectrum_matches_projected_farfield():
    k = 3.0
    samples = d2.mie_farfield(1.0, k, 0.3, ANGLES_256)
    projected = modal.project_farfield(samples, k, degree=40)
    direct = d2.mie_spectrum(1.0, k, 0.3, degree=40)
    assert np.abs(projected.coefficients - direct.coefficients).max() <= 1e-12
