import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helmstab import modal
from helmstab.specfun import besseljy


def random_spectrum(rng, degree=5, k=1.0, n_dim=2):
    n = modal.degree_count(degree, n_dim)
    return modal.ModalSpectrum(n_dim, k, rng.normal(size=n) + 1j * rng.normal(size=n))


# ---------------------------------------------------------------------------
# Mode counting
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "j,n_dim,expected",
    [(0, 3, 1), (3, 2, 2), (2, 3, 5), (0, 2, 1), (1, 2, 2), (4, 4, 25)],
)
def test_mode_dimension(j, n_dim, expected):
    assert modal.mode_dimension(j, n_dim) == expected


@pytest.mark.parametrize("n,n_dim,expected", [(0, 2, 1), (0, 5, 1), (4, 2, 9), (3, 3, 16)])
def test_degree_count(n, n_dim, expected):
    assert modal.degree_count(n, n_dim) == expected


@given(n=st.integers(min_value=0, max_value=100), n_dim=st.integers(min_value=2, max_value=3))
@settings(max_examples=60, deadline=None)
def test_mode_counting_growth_caps(n, n_dim):
    assert modal.mode_dimension(n, n_dim) <= 2 * (n + 1) ** (n_dim - 2)
    assert modal.degree_count(n, n_dim) <= 2 * (n + 1) ** (n_dim - 1)


def test_degree_of_flat_index_ordering():
    degrees = [modal.degree_of_flat_index(i, 2) for i in range(9)]
    assert degrees == [0, 1, 1, 2, 2, 3, 3, 4, 4]
    degrees3 = [modal.degree_of_flat_index(i, 3) for i in range(9)]
    assert degrees3 == [0, 1, 1, 1, 2, 2, 2, 2, 2]


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


def test_farfield_norm_basics():
    zero = modal.ModalSpectrum(2, 1.0, np.zeros(0, dtype=complex))
    assert modal.farfield_norm(zero) == 0.0
    single = modal.ModalSpectrum(2, 1.0, np.array([3.0 + 4.0j]))
    assert modal.farfield_norm(single) == 5.0


def test_nearfield_norm_single_mode_n2():
    k, r = 2.0, 3.0
    spec = modal.ModalSpectrum(2, k, np.array([1.0 + 0.0j]))
    rec = besseljy(0.0, k * r)
    h = abs(complex(rec.j.to_float(), rec.y.to_float()))
    expected = math.sqrt(math.pi / 2.0 * k * r) * h
    assert abs(modal.nearfield_norm(spec, r) - expected) <= 1e-12 * expected


def test_nearfield_norm_n3_monopole_is_radius_free():
    spec = modal.ModalSpectrum(3, 2.0, np.array([3.0 + 4.0j]))
    for r in [0.5, 2.0, 17.0]:
        assert abs(modal.nearfield_norm(spec, r) - 5.0) <= 1e-12


def test_nearfield_norm_zero_and_overflow_signal():
    zero = modal.ModalSpectrum(2, 1.0, np.zeros(3, dtype=complex))
    assert modal.nearfield_norm(zero, 2.0) == 0.0
    coeffs = np.zeros(modal.degree_count(400, 2), dtype=complex)
    coeffs[-1] = 1e300
    spiky = modal.ModalSpectrum(2, 1.0, coeffs)
    with pytest.raises(modal.ModalOverflowError):
        modal.nearfield_norm(spiky, 1.5)


def test_parseval_against_quadrature():
    rng = np.random.default_rng(0)
    spec = random_spectrum(rng, degree=12)
    theta = 2.0 * math.pi * np.arange(128) / 128
    samples = modal.synthesize_farfield(spec, theta)
    quad = 2.0 * math.pi / len(theta) * np.sum(np.abs(samples) ** 2)
    assert abs(quad - modal.farfield_norm(spec) ** 2) <= 1e-10


def test_norm_homogeneity():
    rng = np.random.default_rng(1)
    spec = random_spectrum(rng, degree=6, k=2.0)
    scaled = spec.scaled(-2.5j)
    assert abs(modal.farfield_norm(scaled) - 2.5 * modal.farfield_norm(spec)) <= 1e-12
    a = modal.nearfield_norm(scaled, 3.0)
    b = 2.5 * modal.nearfield_norm(spec, 3.0)
    assert abs(a - b) <= 1e-12 * b
    u = modal.evaluate_field(scaled, 3.0, 0.9)
    v = -2.5j * modal.evaluate_field(spec, 3.0, 0.9)
    assert abs(u - v) <= 1e-12 * abs(v)


# ---------------------------------------------------------------------------
# Synthesis, projection, conventions
# ---------------------------------------------------------------------------


def test_evaluate_field_of_zero_spectrum():
    zero = modal.ModalSpectrum(2, 1.0, np.zeros(5, dtype=complex))
    assert modal.evaluate_field(zero, 2.0, 1.0) == 0.0


def test_near_to_far_consistency_rate():
    rng = np.random.default_rng(2)
    spec = random_spectrum(rng, degree=5, k=3.0)
    ff = modal.synthesize_farfield(spec, np.array([0.7]))[0]
    gaps = []
    for r in [50.0, 100.0, 200.0, 400.0]:
        u = modal.evaluate_field(spec, r, 0.7)
        gaps.append(abs(u * math.sqrt(r) * cmath.exp(-1j * 3.0 * r) - ff))
    for a, b in zip(gaps, gaps[1:]):
        assert 1.7 <= a / b <= 2.3  # O(1/r)


def test_point_source_reconstruction():
    # far field of the outgoing point source at x0: project it, resynthesize
    # the near field, compare with the fundamental solution.  The cutoff
    # degree balances the modal tail against the roundoff floor of the
    # samples, which the radial factors amplify by |H_j(k r)| (the
    # instability at the heart of the far-to-near problem).
    k = 2.0
    x0 = np.array([0.3, -0.2])
    r_eval = 2.0
    theta = 2.0 * math.pi * np.arange(256) / 256
    xhat = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    pref = 0.25j * math.sqrt(2.0 / (math.pi * k)) * cmath.exp(-0.25j * math.pi)
    samples = pref * np.exp(-1j * k * (xhat @ x0))
    spec = modal.project_farfield(samples, k, degree=14)
    rec = besseljy(0.0, k * float(np.linalg.norm(r_eval * xhat[5] - x0)))
    phi = 0.25j * complex(rec.j.to_float(), rec.y.to_float())
    u = modal.evaluate_field(spec, r_eval, float(theta[5]))
    assert abs(u - phi) <= 1e-9


def test_projection_basics_and_exactness():
    rng = np.random.default_rng(3)
    # constant samples -> single j=0 coefficient c sqrt(2 pi)
    c = 1.3 - 0.4j
    spec = modal.project_farfield(np.full(32, c), 1.0, degree=3)
    assert abs(spec.coefficients[0] - c * math.sqrt(2.0 * math.pi)) <= 1e-12
    assert np.abs(spec.coefficients[1:]).max() <= 1e-12
    # synthesized band-limited data recovers exactly
    truth = random_spectrum(rng, degree=7)
    theta = 2.0 * math.pi * np.arange(64) / 64
    samples = modal.synthesize_farfield(truth, theta)
    back = modal.project_farfield(samples, 1.0, degree=7)
    assert np.abs(back.coefficients - truth.coefficients).max() <= 1e-12


def test_projection_aliasing_warning():
    with pytest.warns(modal.AliasingWarning):
        modal.project_farfield(np.ones(8, dtype=complex), 1.0, degree=6)


def test_tilde_hat_round_trip_and_n3_factor():
    rng = np.random.default_rng(4)
    hat = rng.normal(size=9) + 1j * rng.normal(size=9)
    tilde = modal.tilde_from_hat(hat, 2.5, 2)
    assert np.abs(modal.hat_from_tilde(tilde, 2.5, 2) - hat).max() <= 1e-14
    assert np.abs(modal.tilde_from_hat(np.zeros(4, dtype=complex), 2.0, 2)).max() == 0.0
    t3 = modal.tilde_from_hat(np.array([1.0 + 0.0j]), 1.0, 3)
    expected = (math.pi / 2.0) ** -0.5 * (-1j)
    assert abs(t3[0] - expected) <= 1e-15


# ---------------------------------------------------------------------------
# Sobolev-scale norms
# ---------------------------------------------------------------------------


def test_sobolev_single_entry_and_l2():
    a = {(0, 0): 2.0 - 1.0j}
    assert abs(modal.sobolev_norm(a, 1.5) - abs(2.0 - 1.0j)) <= 1e-15
    assert abs(modal.ys_norm(a, 1.5) - abs(2.0 - 1.0j)) <= 1e-15
    entries = {(0, 0): 1.0, (1, 2): 2.0j, (4, 3): -1.0}
    l2 = math.sqrt(sum(abs(v) ** 2 for v in entries.values()))
    assert abs(modal.sobolev_norm(entries, 0.0) - l2) <= 1e-14


@given(
    data=st.lists(
        st.tuples(
            st.integers(min_value=0, max_value=30),
            st.integers(min_value=0, max_value=30),
            st.floats(min_value=-5, max_value=5),
            st.floats(min_value=-5, max_value=5),
        ),
        min_size=1,
        max_size=25,
    ),
    s=st.floats(min_value=0.0, max_value=3.0),
    n_dim=st.integers(min_value=2, max_value=3),
)
@settings(max_examples=80, deadline=None)
def test_hs_embeds_in_ys_with_constant_four(data, s, n_dim):
    entries = {}
    for i, l, re, im in data:
        entries[(i, l)] = complex(re, im)
    hs = modal.sobolev_norm(entries, s, n_dim)
    ys = modal.ys_norm(entries, s, n_dim)
    assert hs <= 4.0 * ys + 1e-12


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------


def test_spectrum_file_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    spec = random_spectrum(rng, degree=4, k=3.5)
    path = tmp_path / "spec.txt"
    modal.save_spectrum(path, spec)
    lines = path.read_text().splitlines()
    assert lines[0].split()[0] == "2" and lines[0].split()[2] == "4"
    back = modal.load_spectrum(path)
    assert back.n_dim == 2 and back.k == 3.5
    assert np.abs(back.coefficients - spec.coefficients).max() == 0.0
