"""Reference computations that do not touch the package under test.

Everything here uses scipy/numpy directly: Bessel functions from
scipy.special, ODE shooting with solve_ivp, and a Rayleigh-Ritz
discretization of the Robin form on the disk.
"""

import math

import numpy as np
from numpy.polynomial import legendre as L
from scipy.integrate import solve_ivp
from scipy.linalg import eigh
from scipy.optimize import brentq
from scipy.special import jv, jvp, roots_legendre


def bracket_roots(f, a, b, n=4000):
    xs = np.linspace(a, b, n + 1)
    ys = np.array([f(x) for x in xs])
    out = []
    for i in range(n):
        if ys[i] == 0.0:
            out.append(xs[i])
        elif ys[i] * ys[i + 1] < 0:
            r = brentq(f, xs[i], xs[i + 1], xtol=1e-15, rtol=1e-15)
            # a sign change across a pole leaves a large residual
            if abs(f(r)) < 1e-6 * max(1.0, abs(ys[i]), abs(ys[i + 1])):
                out.append(r)
    return out


def interval_robin_roots(alpha, a, b):
    """Eigenvalues in (a, b) of -f'' with f'(0) = alpha f(0), -f'(1) = alpha f(1).

    With f = cos kx + (alpha/k) sin kx the end condition becomes
    (k^2 - alpha^2) sin k - 2 alpha k cos k = 0; negative eigenvalues
    -kappa^2 solve (kappa^2 + alpha^2) sinh kappa + 2 alpha kappa cosh kappa = 0.
    k = 0 is a root of both forms; it is an eigenvalue (f = 1 + alpha x) only
    when alpha (alpha + 2) = 0.
    """

    def pos(k):
        return (k * k - alpha * alpha) * math.sin(k) - 2 * alpha * k * math.cos(k)

    def neg(kappa):
        return (kappa * kappa + alpha * alpha) * math.sinh(kappa) + 2 * alpha * kappa * math.cosh(kappa)

    out = []
    if b > 0:
        out += [k * k for k in bracket_roots(pos, 1e-3, math.sqrt(b), 20000)]
    if a < 0:
        out += [-k * k for k in bracket_roots(neg, 1e-3, math.sqrt(-a), 20000)]
    if abs(alpha * (alpha + 2)) < 1e-14 and a < 0 < b:
        out.append(0.0)
    return sorted(x for x in out if a < x < b)


def shooting_roots(alpha, a, b, n=2000):
    def miss(lam):
        sol = solve_ivp(lambda x, y: [y[1], -lam * y[0]], (0, 1), [1.0, alpha], method="DOP853", rtol=1e-13, atol=1e-15)
        return sol.y[1, -1] + alpha * sol.y[0, -1]

    return bracket_roots(miss, a, b, n)


def bessel_zeros(n, count):
    out = []
    k = max(n, 0.5)
    step = 0.05
    prev = jv(n, k)
    while len(out) < count:
        k2 = k + step
        cur = jv(n, k2)
        if prev * cur < 0:
            out.append(brentq(lambda x: jv(n, x), k, k2, xtol=1e-15))
        k, prev = k2, cur
    return np.array(out)


def disk_robin_roots(alpha, abs_modes, b):
    """Positive eigenvalues below ``b`` of the disk Robin problem as ``(lambda, |n|)``.

    Mode n: k J_n'(k) + alpha J_n(k) = 0 with lambda = k^2.
    """
    out = []
    for n in abs_modes:
        ks = bracket_roots(lambda k: k * jvp(n, k) + alpha * jv(n, k), 1e-8, math.sqrt(b), 6000)
        for k in ks:
            out.append((k * k, n))
    return sorted(out)


def disk_dirichlet_ground():
    return brentq(lambda x: jv(0, x), 2.0, 3.0, xtol=1e-15) ** 2


# --- Rayleigh-Ritz for the Robin form on the unit disk ---------------------------


def _radial_basis(n, degree, r):
    """Values and r-derivatives of r^n P_k(2 r^2 - 1), k < degree."""
    t = 2 * r * r - 1
    v = L.legvander(t, degree - 1)
    dv = np.zeros_like(v)
    for k in range(degree):
        c = np.zeros(k + 1)
        c[k] = 1.0
        dv[:, k] = L.legval(t, L.legder(c))
    rn = r**n
    drn = n * r ** (n - 1) if n > 0 else np.zeros_like(r)
    vals = v * rn[:, None]
    ders = dv * (4 * r * rn)[:, None] + v * drn[:, None]
    return vals, ders


def robin_ground_state_ritz(alpha_coef, modes, degree=24, quad=200):
    """Lowest eigenvalue of ``int |grad u|^2 + int alpha |u|^2`` over ``int |u|^2``.

    ``alpha_coef`` maps m to the Fourier coefficient a_m of alpha(theta) =
    sum_m a_m e^{i m theta}; ``modes`` are the angular modes n in the trial space.
    """
    x, w = roots_legendre(quad)
    r = 0.5 * (x + 1)
    w = 0.5 * w
    blocks = len(modes)
    size = blocks * degree
    stiff = np.zeros((size, size), dtype=complex)
    mass = np.zeros((size, size), dtype=complex)
    edge = np.zeros((blocks, degree))
    for bi, n in enumerate(modes):
        n_abs = abs(n)
        vals, ders = _radial_basis(n_abs, degree, r)
        sl = slice(bi * degree, (bi + 1) * degree)
        # angular factor e^{in theta}/sqrt(2 pi) integrates to one
        mass[sl, sl] = (vals * (w * r)[:, None]).T @ vals
        grad = (ders * (w * r)[:, None]).T @ ders
        if n_abs:
            grad += n_abs**2 * (vals * (w / r)[:, None]).T @ vals
        stiff[sl, sl] = grad
        edge[bi] = _radial_basis(n_abs, degree, np.array([1.0]))[0][0]
    for bi, n in enumerate(modes):
        for bj, m in enumerate(modes):
            a = alpha_coef.get(n - m, 0.0)
            if a == 0:
                continue
            si = slice(bi * degree, (bi + 1) * degree)
            sj = slice(bj * degree, (bj + 1) * degree)
            # (alpha u, u) on the circle: sum over modes of a_{n-m} u_m conj(u_n)
            stiff[si, sj] += a * np.outer(edge[bi], edge[bj])
    stiff = 0.5 * (stiff + stiff.conj().T)
    mass = 0.5 * (mass + mass.conj().T)
    return float(eigh(stiff, mass, eigvals_only=True)[0])


def interval_robin_resolvent_one(alpha, lam, x):
    """Solution of -g'' - lam g = 1 with g'(0) = a g(0), -g'(1) = a g(1) (real lam < 0)."""
    k = math.sqrt(-lam)
    # g = -1/lam + A cosh(kx) + B sinh(kx)
    c0 = -1.0 / lam
    mat = np.array(
        [
            [-alpha, k],
            [k * math.sinh(k) + alpha * math.cosh(k), k * math.cosh(k) + alpha * math.sinh(k)],
        ]
    )
    rhs = np.array([alpha * c0, -alpha * c0])
    a, b = np.linalg.solve(mat, rhs)
    return c0 + a * np.cosh(k * x) + b * np.sinh(k * x)
