"""Concrete boundary triples for -d^2/dx^2 on (0, 1) and -Laplace on the unit disk.

Interval: interior functions are shifted-Legendre coefficient vectors on
[0, 1]; trace0 f = (f(0), f(1)), trace1 f = (f'(0), -f'(1)); the
Dirichlet resolvent is applied through its Green function.

Disk: functions are truncated Fourier series ``sum_n u_n(r) e^{in theta}/sqrt(2 pi)``
with ``u_n(r) = r^|n| v_n(r^2)`` and ``v_n`` a Legendre series in ``s = r^2``.
This substitution makes the radial operator regular:
``-(u'' + u'/r - n^2 u / r^2) = -4 r^|n| (s v'' + (|n|+1) v')``.
trace0 is the Dirichlet trace, trace1 minus the normal derivative.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import _legendre as leg
from . import relations as rel
from .errors import DomainError, ModelError
from .numerics import bessel_j, bessel_ratio, find_roots, gauss_legendre, hermitian_eigen, principal_sqrt
from .triple_core import BoundaryTripleModel, DefectTripleModel, as_columns, weyl

__all__ = [
    "IntervalModel",
    "DiskModel",
    "CounterexampleModel",
    "make_interval_model",
    "make_disk_model",
    "make_counterexample",
    "model_from_config",
    "robin_extension",
    "robin_parameter",
    "robin_semibound",
    "robin_sup_norm",
    "multiplication_matrix",
    "regularity_estimate",
    "RegularityEstimate",
    "counterexample_truncation",
    "shooting_oracle",
]


def _small(k):
    return abs(k) < 1e-8


class IntervalModel(BoundaryTripleModel):
    name = "interval"

    def __init__(self, quad_size=512, degree=64, eta=-1.0):
        if quad_size < 16:
            raise ModelError("quadrature needs at least 16 nodes")
        if degree < 8 or degree > quad_size:
            raise ModelError("degree must lie in [8, quad_size]")
        self.boundary_dim = 2
        self.dim = degree
        self.eta = float(eta)
        self.quadrature = gauss_legendre(quad_size, 0.0, 1.0)
        self._v = leg.vander(self.quadrature.nodes, degree)
        # coefficients come from interpolation at a degree-sized Gauss rule;
        # the large rule is only used for inner products
        self.collocation = gauss_legendre(degree, 0.0, 1.0)
        self._proj = leg.projector(self.collocation, degree)
        d = leg.deriv_matrix(degree)
        self._T = -(d @ d)
        ends = leg.vander(np.array([0.0, 1.0]), degree)
        self._tr0 = ends
        self._tr1 = np.vstack([ends[0] @ d, -(ends[1] @ d)])
        # split Gauss rules for the Green-function integrals
        sub = gauss_legendre(degree, 0.0, 1.0)
        x = self.collocation.nodes
        self._yl = x[:, None] * sub.nodes[None, :]
        self._wl = x[:, None] * sub.weights[None, :]
        self._yr = x[:, None] + (1.0 - x[:, None]) * sub.nodes[None, :]
        self._wr = (1.0 - x[:, None]) * sub.weights[None, :]
        self._vl = leg.vander(self._yl.ravel(), degree).reshape(degree, degree, degree)
        self._vr = leg.vander(self._yr.ravel(), degree).reshape(degree, degree, degree)

    def describe(self):
        return {"model": "interval", "quad": len(self.quadrature), "degree": self.dim, "eta": self.eta}

    # samples <-> coefficients
    def values(self, f):
        return self._v @ f

    def project(self, samples):
        return leg.chop(self._proj @ samples)

    def from_callable(self, fn):
        return self.project(np.asarray(fn(self.collocation.nodes), dtype=complex))

    def evaluate(self, f, x):
        return leg.vander(np.asarray(x, dtype=float), self.dim) @ f

    def gram(self, f, g):
        fv = self._v @ f
        gv = self._v @ g
        return (gv.conj() * self.quadrature.weights[:, None]).T @ fv

    def apply_T(self, f):
        return self._T @ f

    def trace0(self, f):
        return self._tr0 @ f

    def trace1(self, f):
        return self._tr1 @ f

    @staticmethod
    def _phi(k, z):
        return z if _small(k) else np.sin(k * z) / k

    def resolvent_A0(self, lam, f):
        f, single = as_columns(np.asarray(f, dtype=complex))
        k = complex(principal_sqrt(lam))
        phi = self._phi
        x = self.collocation.nodes
        denom = phi(k, 1.0)
        fl = np.einsum("jmd,dc->jmc", self._vl, f)
        fr = np.einsum("jmd,dc->jmc", self._vr, f)
        il = np.einsum("jm,jmc->jc", self._wl * phi(k, self._yl), fl)
        ir = np.einsum("jm,jmc->jc", self._wr * phi(k, 1.0 - self._yr), fr)
        u = (phi(k, 1.0 - x)[:, None] * il + phi(k, x)[:, None] * ir) / denom
        out = leg.chop(self._proj @ u)
        return out[:, 0] if single else out

    def defect_basis(self, lam):
        k = complex(principal_sqrt(lam))
        x = self.collocation.nodes
        den = self._phi(k, 1.0)
        cols = np.stack([self._phi(k, 1.0 - x) / den, self._phi(k, x) / den], axis=1)
        return self.project(cols.astype(complex))

    def kernel_basis(self, lam):
        k = complex(principal_sqrt(lam))
        x = self.collocation.nodes
        cols = np.stack([np.cos(k * x), self._phi(k, x)], axis=1)
        return self.project(cols.astype(complex))

    def weyl_closed_form(self, lam):
        k = complex(principal_sqrt(lam))
        if _small(k):
            return np.array([[-1.0, 1.0], [1.0, -1.0]], dtype=complex)
        s = np.sin(k)
        diag = -k * np.cos(k) / s
        off = k / s
        return np.array([[diag, off], [off, diag]], dtype=complex)

    def dirichlet_spectrum(self, a, b):
        n = np.arange(max(1, math.floor(math.sqrt(max(a, 0.0)) / math.pi)), math.ceil(math.sqrt(max(b, 0.0)) / math.pi) + 2)
        ev = (n * math.pi) ** 2
        return ev[(ev >= a) & (ev <= b)]

    def neumann_spectrum(self, a, b):
        n = np.arange(0, math.ceil(math.sqrt(max(b, 0.0)) / math.pi) + 2)
        ev = (n * math.pi) ** 2
        return ev[(ev >= a) & (ev <= b)]

    def sample_functions(self, rng, count):
        decay = 0.6 ** np.arange(self.dim)
        c = rng.standard_normal((self.dim, count)) + 1j * rng.standard_normal((self.dim, count))
        return c * decay[:, None]

    def sample_dirichlet(self, rng, count):
        f = self.sample_functions(rng, count)
        ends = self.trace0(f)
        x = self.collocation.nodes
        lin = self.project(np.outer(1.0 - x, ends[0]) + np.outer(x, ends[1]))
        return f - lin


class DiskModel(BoundaryTripleModel):
    name = "disk"

    def __init__(self, modes=8, radial_quad=128, degree=40, eta=-1.0, mode_list=None):
        if mode_list is None:
            if modes < 0 or modes > 128:
                raise ModelError("modes must lie in [0, 128]")
            mode_list = list(range(-modes, modes + 1))
        mode_list = [int(n) for n in mode_list]
        if not mode_list or max(abs(n) for n in mode_list) > 128:
            raise ModelError("mode indices must satisfy |n| <= 128")
        if radial_quad < 16:
            raise ModelError("radial quadrature needs at least 16 nodes")
        self.modes = np.array(mode_list)
        self.abs_modes = np.abs(self.modes)
        self.blocks = len(mode_list)
        self.degree = degree
        self.boundary_dim = self.blocks
        self.dim = self.blocks * degree
        self.eta = float(eta)
        self.quadrature = gauss_legendre(radial_quad, 0.0, 1.0)
        s = self.quadrature.nodes
        self._v = leg.vander(s, degree)
        self.collocation = gauss_legendre(degree, 0.0, 1.0)
        self._proj = leg.projector(self.collocation, degree)
        d = leg.deriv_matrix(degree)
        st = leg.mult_t_matrix(degree)
        d2 = st @ (d @ d)
        self._T = np.stack([-4.0 * (d2 + (n + 1) * d) for n in self.abs_modes])
        self._d = d
        self._w = 0.5 * self.quadrature.weights[None, :] * s[None, :] ** self.abs_modes[:, None]
        self._one = np.ones(degree)
        self._dprime1 = self._one @ d

    def describe(self):
        return {
            "model": "disk",
            "modes": self.modes.tolist(),
            "quad": len(self.quadrature),
            "degree": self.degree,
            "eta": self.eta,
        }

    def _blocks(self, f):
        f, single = as_columns(np.asarray(f))
        return f.reshape(self.blocks, self.degree, f.shape[1]), single

    def _flat(self, b, single):
        out = b.reshape(self.dim, b.shape[-1])
        return out[:, 0] if single else out

    def block_values(self, f):
        """Samples of ``v_n`` on the radial nodes, shape (blocks, nodes, m)."""
        b, _ = self._blocks(f)
        return self._v @ b

    def mode_norms(self, f):
        """L2 norm of each Fourier component ``u_n``."""
        vals = self.block_values(np.asarray(f).reshape(self.dim, -1))[..., 0]
        return np.sqrt(np.sum(self._w * np.abs(vals) ** 2, axis=1))

    def gram(self, f, g):
        fv = self.block_values(f)
        gv = self.block_values(g) * self._w[:, :, None]
        return gv.reshape(-1, gv.shape[-1]).conj().T @ fv.reshape(-1, fv.shape[-1])

    def norm(self, f):
        f, _ = as_columns(f)
        vals = self.block_values(f)
        return np.sqrt(np.einsum("bq,bqm->m", self._w, np.abs(vals) ** 2))

    def apply_T(self, f):
        b, single = self._blocks(f)
        return self._flat(self._T @ b, single)

    def trace0(self, f):
        b, single = self._blocks(f)
        out = np.einsum("d,bdm->bm", self._one, b)
        return out[:, 0] if single else out

    def trace1(self, f):
        b, single = self._blocks(f)
        v1 = np.einsum("d,bdm->bm", self._one, b)
        dv1 = np.einsum("d,bdm->bm", self._dprime1, b)
        out = -(self.abs_modes[:, None] * v1 + 2.0 * dv1)
        return out[:, 0] if single else out

    def resolvent_A0(self, lam, f):
        b, single = self._blocks(np.asarray(f, dtype=complex))
        out = np.empty_like(b)
        eye = np.eye(self.degree)
        for i in range(self.blocks):
            a = self._T[i] - lam * eye
            rhs = b[i].copy()
            a = a.astype(complex)
            a[-1] = self._one
            rhs[-1] = 0.0
            out[i] = np.linalg.solve(a, rhs)
        return self._flat(out, single)

    def _radial_profile(self, n, k):
        """``J_n(k r)/r^n`` sampled at the collocation nodes in s = r^2."""
        s = self.collocation.nodes
        if _small(k):
            return np.ones_like(s, dtype=complex)
        r = np.sqrt(s)
        j, _ = bessel_j(n, k * r.astype(complex))
        return j / r**n

    def defect_basis(self, lam):
        k = complex(principal_sqrt(lam))
        out = np.zeros((self.blocks, self.degree, self.blocks), dtype=complex)
        for i, n in enumerate(self.abs_modes):
            prof = self._radial_profile(n, k)
            norm = 1.0 if _small(k) else bessel_j(n, complex(k))[0]
            out[i, :, i] = leg.chop(self._proj @ (prof / norm))
        return out.reshape(self.dim, self.blocks)

    def kernel_basis(self, lam):
        k = complex(principal_sqrt(lam))
        out = np.zeros((self.blocks, self.degree, self.blocks), dtype=complex)
        for i, n in enumerate(self.abs_modes):
            prof = self._radial_profile(n, k)
            out[i, :, i] = leg.chop(self._proj @ (prof / np.max(np.abs(prof))))
        return out.reshape(self.dim, self.blocks)

    def weyl_entries(self, lam):
        k = complex(principal_sqrt(lam))
        vals = np.empty(self.blocks, dtype=complex)
        for i, n in enumerate(self.abs_modes):
            if _small(k):
                vals[i] = -n
            elif n == 0:
                vals[i] = k / bessel_ratio(1, k)[0]
            else:
                vals[i] = n - k * bessel_ratio(n, k)[0]
        return vals

    def weyl_closed_form(self, lam):
        return np.diag(self.weyl_entries(lam))

    def dirichlet_spectrum(self, a, b):
        return _sorted_levels(self.abs_modes, a, b, _bessel_zeros)

    def neumann_spectrum(self, a, b):
        return _sorted_levels(self.abs_modes, a, b, _bessel_deriv_zeros)

    def sobolev_weights(self, s):
        return (1.0 + self.modes.astype(float) ** 2) ** (s / 2.0)

    def sample_functions(self, rng, count):
        shape = (self.blocks, self.degree, count)
        c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        c *= (0.5 ** np.arange(self.degree))[None, :, None]
        c *= (1.0 / (1.0 + self.abs_modes) ** 2)[:, None, None]
        return c.reshape(self.dim, count)

    def sample_dirichlet(self, rng, count):
        f = self.sample_functions(rng, count)
        b = f.reshape(self.blocks, self.degree, count).copy()
        b[:, 0, :] -= np.einsum("d,bdm->bm", self._one, b)
        return b.reshape(self.dim, count)

    def from_modes(self, profiles):
        """Build a function from callables ``v_n(s)`` keyed by mode index."""
        out = np.zeros((self.blocks, self.degree), dtype=complex)
        s = self.collocation.nodes
        for i, n in enumerate(self.modes):
            fn = profiles.get(int(n))
            if fn is not None:
                out[i] = leg.chop(self._proj @ np.asarray(fn(s), dtype=complex))
        return out.reshape(self.dim)


def _sorted_levels(abs_modes, a, b, zeros_fn):
    if b < 0:
        return np.zeros(0)
    top = math.sqrt(b)
    levels = []
    for n in abs_modes:
        z = zeros_fn(int(n), _ceil_bucket(top))
        z2 = z**2
        levels.extend(z2[(z2 >= a) & (z2 <= b)])
    return np.sort(np.array(levels))


def _ceil_bucket(x):
    # coarse cache key: the zero tables are computed on [0, bucket]
    return float(max(16.0, 2.0 ** math.ceil(math.log2(max(x, 1.0) + 1.0))))


@lru_cache(maxsize=None)
def _bessel_zeros(n, upper):
    # j_{n,1} > n, so the scan starts there
    lower = max(1e-3, float(n))
    if lower >= upper:
        return np.zeros(0)
    grid = max(64, int(8 * (upper - lower)))
    return find_roots(lambda x: bessel_j(n, x)[0], lower, upper, grid=grid, tol=1e-14)


@lru_cache(maxsize=None)
def _bessel_deriv_zeros(n, upper):
    # j'_{n,1} >= n for n >= 1
    lower = max(1e-3, n - 1e-3)
    if lower >= upper:
        return np.zeros(1) if n == 0 else np.zeros(0)
    grid = max(64, int(8 * (upper - lower)))
    z = find_roots(lambda x: bessel_j(n, x)[1], lower, upper, grid=grid, tol=1e-14)
    return np.concatenate([[0.0], z]) if n == 0 else z


class CounterexampleModel(BoundaryTripleModel):
    """Transformed defect triple with a boundary map whose closure has a kernel.

    ``base`` is the defect triple at ``eta`` of a disk restricted to the
    modes ``0..K-1``; ``gamma`` is ``I - w w^T`` on the first ``N``
    coordinates with ``w_k`` proportional to ``2^{-k}``.  The new traces are
    ``gamma^+ trace0`` and ``gamma^* trace1 + M gamma^+ trace0``.
    """

    name = "counterexample"

    def __init__(self, size, extra=20, degree=24, radial_quad=64, eta=-1.0, m_eta=None):
        if size < 1:
            raise ModelError("truncation size must be positive")
        total = size + extra
        disk = DiskModel(mode_list=list(range(total)), radial_quad=radial_quad, degree=degree, eta=eta)
        self.base = DefectTripleModel(disk, eta)
        k = np.arange(1, total + 1)
        w = 2.0 ** (-k.astype(float)) * math.sqrt(3.0)  # unit norm in l^2(N)
        full = np.eye(total) - np.outer(w, w)
        self.gamma = full[:, :size]
        self.gamma_pinv = np.linalg.pinv(self.gamma)
        self.m_matrix = np.diag(np.arange(1, size + 1, dtype=float)) if m_eta is None else np.asarray(m_eta)
        self.size = size
        self.boundary_dim = size
        self.dim = disk.dim
        self.eta = float(eta)
        # exact Gram of gamma on the infinite sequence space
        wn = w[:size]
        self.gamma_gram = np.eye(size) - np.outer(wn, wn)

    def describe(self):
        return {"model": "counterexample", "size": self.size, "eta": self.eta}

    def gram(self, f, g):
        return self.base.gram(f, g)

    def apply_T(self, f):
        return self.base.apply_T(f)

    def resolvent_A0(self, lam, f):
        return self.base.resolvent_A0(lam, f)

    def dirichlet_spectrum(self, a, b):
        return self.base.dirichlet_spectrum(a, b)

    def trace0(self, f):
        return self.gamma_pinv @ self.base.trace0(f)

    def trace1(self, f):
        t0 = self.gamma_pinv @ self.base.trace0(f)
        return self.gamma.T @ self.base.trace1(f) + self.m_matrix @ t0

    def defect_basis(self, lam):
        return self.base.defect_basis(lam) @ self.gamma

    def sample_dirichlet(self, rng, count):
        return self.base.sample_dirichlet(rng, count)

    def sample_functions(self, rng, count):
        f0 = self.sample_dirichlet(rng, count)
        x = rng.standard_normal((self.size, count)) + 1j * rng.standard_normal((self.size, count))
        return f0 + self.base.defect_basis(self.eta) @ (self.gamma @ x)


# --- factories -------------------------------------------------------------------


def make_interval_model(quad_size=512, degree=64, eta=-1.0):
    return IntervalModel(quad_size, degree, eta)


def make_disk_model(modes=8, radial_quad=128, degree=40, eta=-1.0):
    return DiskModel(modes, radial_quad, degree, eta)


def make_counterexample(size, **kw):
    return CounterexampleModel(size, **kw)


def model_from_config(config):
    """Build a model from a dict or a JSON file path."""
    if isinstance(config, str):
        with open(config) as fh:
            config = json.load(fh)
    kind = config.get("model")
    if kind == "interval":
        return make_interval_model(int(config.get("quad", 512)), int(config.get("degree", 64)), float(config.get("eta", -1.0)))
    if kind == "disk":
        return make_disk_model(int(config.get("modes", 8)), int(config.get("quad", 128)), int(config.get("degree", 40)), float(config.get("eta", -1.0)))
    if kind == "counterexample":
        return make_counterexample(int(config.get("modes", 4)))
    raise ModelError(f"unknown model {kind!r}")


# --- boundary conditions -----------------------------------------------------------


def multiplication_matrix(model, alpha, samples=512):
    """Matrix of multiplication by ``alpha(theta)`` on the disk boundary modes."""
    theta = 2.0 * np.pi * np.arange(samples) / samples
    coef = np.fft.fft(np.asarray(alpha(theta), dtype=complex)) / samples
    diff = model.modes[:, None] - model.modes[None, :]
    return coef[diff % samples]


def robin_parameter(model, alpha):
    """Boundary relation ``trace1 f = alpha trace0 f``."""
    g = model.boundary_dim
    if callable(alpha):
        if not isinstance(model, DiskModel):
            raise DomainError("variable Robin coefficients need the disk model")
        return rel.graph(multiplication_matrix(model, alpha))
    alpha = np.asarray(alpha)
    if alpha.ndim == 0:
        return rel.graph(complex(alpha) * np.eye(g))
    return rel.graph(alpha)


def robin_extension(model, alpha, eta=None, scale=None):
    """Extension with the Robin condition ``alpha trace_D f + trace_N f = 0``."""
    from .extensions import from_vartheta

    return from_vartheta(model, robin_parameter(model, alpha), eta=eta, scale=scale)


def robin_sup_norm(alpha, samples=512):
    """``||alpha||_inf`` for a constant, a matrix (spectral norm) or a boundary function."""
    if callable(alpha):
        theta = 2.0 * np.pi * np.arange(samples) / samples
        return float(np.max(np.abs(alpha(theta))))
    a = np.asarray(alpha)
    return float(abs(a)) if a.ndim == 0 else float(np.linalg.norm(a, 2))


def robin_semibound(alpha):
    """Constant ``c`` and the bound ``-c ||alpha||_inf`` below the disk Robin spectrum.

    On the unit disk ``int_boundary |f|^2 <= (2 + 1/e) ||f||^2 + e ||grad f||^2``
    (divergence theorem applied to ``x |f|^2``).  With ``e = 1/||alpha||`` the
    form ``||grad f||^2 + int alpha |f|^2`` is at least ``-(2 + ||alpha||) ||alpha|| ||f||^2``.
    """
    sup = robin_sup_norm(alpha)
    c = 2.0 + sup
    return c, -c * sup


# --- regularity -------------------------------------------------------------------


@dataclass(frozen=True)
class RegularityEstimate:
    index: float
    slope: float
    active_modes: int
    fit_residual: float


def regularity_estimate(model, f, min_modes=4, tail_fraction=0.5):
    """Sobolev index read off the decay of the Fourier-mode L2 norms.

    If ``a_n ~ n^{-p}`` the reported index is ``p - 1/2``.  The slope is
    fitted to the tail of the upper envelope ``max_{m >= n} a_m``, so
    symmetric functions whose odd or even modes vanish are not misread.
    Functions whose active modes stay well inside the truncation report
    ``inf``.
    """
    if not isinstance(model, DiskModel):
        raise DomainError("regularity estimates need the disk model")
    norms = model.mode_norms(f)
    if not np.any(norms > 0):
        raise DomainError("zero function")
    by_n = {}
    for n, a in zip(model.abs_modes, norms):
        by_n[int(n)] = max(by_n.get(int(n), 0.0), float(a))
    ns = np.array(sorted(by_n))
    amps = np.array([by_n[n] for n in ns])
    floor = 1e-13 * amps.max()
    active = amps > floor
    top = ns.max()
    if active.sum() == 1 or (ns[active].max() <= top // 2 and active.sum() < min_modes):
        return RegularityEstimate(math.inf, math.inf, int(active.sum()), 0.0)
    pos = (ns >= 1) & active
    if pos.sum() < min_modes:
        raise DomainError(f"too few active modes ({int(pos.sum())}) for a decay fit")
    env = np.maximum.accumulate(amps[::-1])[::-1]
    sel = (ns >= max(1, int((1.0 - tail_fraction) * top))) & (env > floor)
    if sel.sum() < 3:
        sel = (ns >= 1) & (env > floor)
    x = np.log(ns[sel].astype(float))
    y = np.log(env[sel])
    slope, icpt = np.polyfit(x, y, 1)
    fit = float(np.sqrt(np.mean((y - (slope * x + icpt)) ** 2)))
    p = -slope
    return RegularityEstimate(float(p - 0.5), float(p), int(active.sum()), fit)


# --- counterexample ---------------------------------------------------------------


def counterexample_truncation(sizes, **kw):
    """``(N, smallest eigenvalue of Im M_N(i))`` for each truncation size."""
    out = []
    for n in sizes:
        model = make_counterexample(int(n), **kw)
        m = weyl(model, 1j).matrix
        lam = (m - m.conj().T) / 2j
        w, _ = hermitian_eigen(lam, tol=1e-8)
        out.append((int(n), float(w[0])))
    return out


# --- shooting ----------------------------------------------------------------------


def _bc(kind):
    if kind == "dirichlet":
        return (0.0, 1.0), lambda y: y[0]
    if kind == "neumann":
        return (1.0, 0.0), lambda y: y[1]
    alpha = float(kind)
    # f'(0) = alpha f(0) and -f'(1) = alpha f(1)
    return (1.0, alpha), lambda y: y[1] + alpha * y[0]


def _mismatch(lam, start, end):
    sol = solve_ivp(
        lambda x, y: [y[1], -lam * y[0]],
        (0.0, 1.0),
        list(start),
        method="DOP853",
        rtol=1e-13,
        atol=1e-15,
    )
    return end(sol.y[:, -1])


def shooting_oracle(condition, a, b, grid=400):
    """Eigenvalues of -f'' = lam f on (0, 1) in ``[a, b]`` by shooting.

    ``condition`` is ``'dirichlet'``, ``'neumann'`` or a Robin coefficient
    ``alpha`` (meaning ``f'(0) = alpha f(0)`` and ``-f'(1) = alpha f(1)``).
    """
    start, end = _bc(condition)
    lams = np.linspace(a, b, grid + 1)
    vals = np.array([_mismatch(x, start, end) for x in lams])
    roots = []
    for i in range(grid):
        if vals[i] == 0.0:
            roots.append(lams[i])
        elif vals[i] * vals[i + 1] < 0:
            roots.append(brentq(_mismatch, lams[i], lams[i + 1], args=(start, end), xtol=1e-13, rtol=1e-15))
    if vals[-1] == 0.0:
        roots.append(lams[-1])
    return np.array(roots)
