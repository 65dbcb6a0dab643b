"""Independent high-precision oracles for the frozen values in tests/unit/golden.hpp.

Run once with mpmath; the printed constants are pasted into golden.hpp.
Nothing here shares code with the C++ implementation.
"""
from mpmath import (mp, mpf, mpc, gamma, loggamma, sqrt, pi, sinh, cosh, exp,
                    quad, cos, sin, tanh, legenp, diff, log, inf, fabs)

mp.dps = 40


def phi_legendre(lam, r, n):
    n = mpf(n)
    return (2 ** (n / 2 - 1) * gamma(n / 2) * sinh(r) ** (1 - n / 2)
            * legenp(-mpf(1) / 2 + 1j * lam, 1 - n / 2, cosh(r), type=3)).real


def phi_eq22(lam, r, n):
    n = mpf(n)
    rho = (n - 1) / 2
    c = gamma(n / 2) / (sqrt(pi) * gamma((n - 1) / 2))
    return (c * quad(lambda s: (cosh(r) - cos(s) * sinh(r)) ** (1j * lam - rho)
                     * sin(s) ** (n - 2), [0, pi / 8, pi / 2, pi])).real


def conical(mu, lam, t):
    """P^{-mu}_{-1/2+i lam}(cosh t)."""
    return legenp(-mpf(1) / 2 + 1j * lam, -mu, cosh(t), type=3)


def symbol(alpha, lam, t, n):
    n = mpf(n)
    return (2 ** ((n - 2) / 2 + alpha) * gamma(n / 2) * exp(alpha * t)
            / (exp(t) - 1) ** (2 * alpha) * sinh(t) ** ((2 - n) / 2 + alpha)
            * legenp(-mpf(1) / 2 + 1j * lam, (2 - n) / 2 - alpha, cosh(t), type=3))


def show(name, v):
    if isinstance(v, mpc):
        print(f"{name} = {{{mp.nstr(v.real, 20)}, {mp.nstr(v.imag, 20)}}}")
    else:
        print(f"{name} = {mp.nstr(v, 20)}")


# log-gamma
show("lgamma_half_euler", log(quad(lambda x: x ** (-mpf(1) / 2) * exp(-x), [0, 1, inf])))
show("abs_gamma_i_sq", fabs(gamma(1j)) ** 2)
for z in [mpc(3.7, -2.1), mpc(0.3, 15), mpc(-2.5, 0.5), mpc(120, 250), mpc(0, 256), mpc(1e-3, 0)]:
    show(f"loggamma({z})", loggamma(z))

# spherical function, two independent representations
for (lam, r, n) in [(1, 1, 3), (1, 1, 2), (7.5, 3, 2), (2, 0.5, 4), (0, 5, 2), (30, 8, 4), (50, 2, 3)]:
    a = phi_legendre(lam, r, n)
    show(f"phi(l={lam},r={r},n={n})", a)
    if lam < 20:
        show("   eq22 cross-check", phi_eq22(lam, r, n))

# conical Legendre
for (mu, lam, t) in [(mpf('0.3'), 2, 1.5), (mpc(1, 0.5), 0.7, 0.4), (mpf(0), 10, 3)]:
    show(f"conical(mu={mu},l={lam},t={t})", conical(mu, lam, t))

# Mehler integral alpha=1, n=2, lambda=0, via s = t - u^2
for t in [1, 2]:
    v = quad(lambda u: 2 * u * sqrt(cosh(t) - cosh(t - u * u)), [0, sqrt(t)])
    show(f"mehler_a1_n2_t{t}", v)

# symbols
for (alpha, lam, t, n) in [(mpc(0.5, 1), 2, 1.5, 3), (1, 3, 0.25, 2), (mpf('-0.4'), 20, 0.5, 3),
                           (mpf('0.1'), 100, 0.05, 2), (2, 0.5, 6, 2), (mpc(0.5, 1), 150, 2.0 ** -6, 2)]:
    show(f"m(a={alpha},l={lam},t={t},n={n})", symbol(alpha, lam, t, n))
    show("   dm/dl", diff(lambda L: symbol(alpha, L, t, n), lam))

# Plancherel density closed forms
show("density_n2_l1", pi * tanh(pi))
show("density_n4_l2", pi / 16 * (mpf(1) / 4 + 4) * 2 * tanh(2 * pi))

# Kunze-Stein weighted integral of 1_[0,1], n=2, p=3/2
show("ks_rhs_indicator", quad(lambda r: exp(-r / 3) * 2 * pi * sinh(r), [0, 1]))
