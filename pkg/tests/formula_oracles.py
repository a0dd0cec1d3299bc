"""Independent 50-digit evaluations of every closed-form bound.

Each function re-types its formula directly in mpmath arithmetic, sharing
no code with the implementation; the tests compare the two routes at 1e-12
relative on random inputs.
"""

from mpmath import mp


def eta2(nu, z):
    nu, z = mp.mpf(nu), mp.mpf(z)
    t = nu / z
    return nu * mp.log(t + mp.sqrt(t * t - 1)) - z * mp.sqrt(t * t - 1)


def bounded_bound(a_tilde, b_big, m_bound, log_ratio, a1_tilde, k1, r0, alpha, c_alpha):
    a_tilde, b_big, m_bound = mp.mpf(a_tilde), mp.mpf(b_big), mp.mpf(m_bound)
    inner = (mp.e**mp.mpf(a1_tilde) * k1 * r0 / 2) ** mp.mpf(alpha) * mp.mpf(log_ratio) / mp.mpf(c_alpha)
    return mp.sqrt(2 * a_tilde) * b_big * m_bound * mp.exp(-mp.log(b_big) * inner ** (1 / (1 + mp.mpf(alpha))))


def high_bound(big_a, b1, b0, m_bound, log_ratio, a1, k, r, alpha, c_alpha):
    big_a, b1, b0, m_bound = mp.mpf(big_a), mp.mpf(b1), mp.mpf(b0), mp.mpf(m_bound)
    inner = (b0 * mp.e**mp.mpf(a1) * mp.mpf(k) * mp.mpf(r) / 2) ** mp.mpf(alpha) * mp.mpf(log_ratio) / mp.mpf(c_alpha)
    return (
        mp.sqrt(2 * big_a * b1)
        / b0
        * m_bound
        * mp.exp(-mp.log(1 / b0) * inner ** (1 / (1 + mp.mpf(alpha))))
    )


def extreme_bound(a_tilde, b1, eps, m_bound, k, r, c0_tilde):
    a_tilde, b1, eps, m_bound = (mp.mpf(v) for v in (a_tilde, b1, eps, m_bound))
    x = mp.mpf(k) * mp.mpf(r) / mp.mpf(c0_tilde)
    return mp.sqrt(a_tilde * b1) * mp.sqrt(eps**2 + m_bound**2 * x * (mp.mpf(2) / 3) ** (2 * x))


def lipschitz_bound(a_tilde, b1, c2, c0_tilde, b0r0, tau, eps):
    a_tilde, b1, c2, eps = (mp.mpf(v) for v in (a_tilde, b1, c2, eps))
    p = 2 * mp.mpf(tau) + 1
    c3 = (p / (2 * mp.e * mp.log(mp.mpf(9) / 8))) ** p
    return mp.sqrt(a_tilde * b1 * (1 + c2**2 * (mp.mpf(c0_tilde) / mp.mpf(b0r0)) ** (2 * mp.mpf(tau)) * c3)) * eps


def halfspace_bound(eta1, k, m_tilde, c2, c3):
    eta1, k, m_tilde, c2, c3 = (mp.mpf(v) for v in (eta1, k, m_tilde, c2, c3))
    ratio = (c2 / c3) * eta1 / m_tilde
    return mp.sqrt((c2 * k * eta1) ** 2 + (c3 * k * m_tilde) ** 2 / (-mp.log(ratio) + k) ** mp.mpf("0.125"))


def z_of_k(k, r_tilde):
    return max(mp.mpf(1), mp.mpf(k) * mp.mpf(r_tilde))


def log_f_decay(t, k, s, n_dim, a, r_tilde):
    t, s, a = mp.mpf(t), mp.mpf(s), mp.mpf(a)
    z = z_of_k(k, r_tilde)
    return (2 * s + n_dim - mp.mpf("0.5")) * mp.log(1 + t) - (t + (n_dim - 3) / mp.mpf(2)) * mp.log(
        a * t / (mp.e * z)
    )


def b_tilde_s(s, n_dim, c_small):
    return max(mp.mpf(c_small) * mp.e**2, 4 * mp.mpf(s) + mp.mpf(3 * n_dim) / 2 + 1)


def log_eps_tilde(k, s, n_dim, a, r_tilde, c_tilde, c4, c_small):
    z = z_of_k(k, r_tilde)
    bt = b_tilde_s(s, n_dim, c_small)
    return (
        mp.log(2 * mp.mpf(c4) * mp.mpf(c_tilde))
        + (n_dim - 1) / mp.mpf(2) * mp.log(z)
        + log_f_decay(bt * z, k, s, n_dim, a, r_tilde)
    )


def log_delta_large(eps, t_value, delta0, m, n_dim, s, c5):
    eps, t_value, delta0 = mp.mpf(eps), mp.mpf(t_value), mp.mpf(delta0)
    p = 2 * mp.mpf(s) + n_dim - mp.mpf("0.5")
    inner = mp.log(mp.mpf(c5) * (1 + t_value) ** p / eps)
    return (
        mp.log(delta0)
        - mp.mpf(m) * (n_dim + 3) / (n_dim - 1) * mp.log(2)
        - 2 * m * mp.log(1 + t_value)
        - mp.mpf(m) / (n_dim - 1) * mp.log(inner)
    )


def log_b_small(k, s, n_dim, a, r_tilde, c_tilde, c4):
    z = z_of_k(k, r_tilde)
    return mp.log(2 * mp.mpf(c4) * mp.mpf(c_tilde)) + (
        2 * mp.mpf(s) + n_dim - mp.mpf("0.5")
    ) * mp.log(3 * mp.e / (2 * mp.mpf(a))) + (2 * mp.mpf(s) + 3 * mp.mpf(n_dim) / 2 - 1) * mp.log(z)


def epsnet_log_size(eps, t_value, s, n_dim, c5):
    eps, t_value = mp.mpf(eps), mp.mpf(t_value)
    p = 2 * mp.mpf(s) + n_dim - mp.mpf("0.5")
    return 4 * (1 + t_value) ** (2 * n_dim - 2) * mp.log(mp.mpf(c5) * (1 + t_value) ** p / eps)


def packing_log(delta, delta0, n_dim, m):
    return mp.mpf(2) ** (-n_dim) * (mp.mpf(delta0) / mp.mpf(delta)) ** (mp.mpf(n_dim - 1) / m)
