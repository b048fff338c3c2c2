"""Quasi boundary triples on a truncated interior space.

A model supplies the interior Hilbert space (as coefficient vectors with an
inner product), the formal operator ``T``, the two trace maps and a way to
invert ``A0 - lam`` where ``A0 = T | ker trace0``.  Everything else in this
module -- gamma fields, Weyl functions, the scale of boundary spaces built
from ``Im M(i)`` and the passage to an ordinary triple -- is generic and
only talks to a model through that interface.

Conventions: a single interior function is a 1-D array of length
``model.dim``; a family of functions is a ``(model.dim, m)`` array whose
columns are the functions.  Inner products are linear in the first slot.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, PoleProximityError, ScaleDegenerateError
from .numerics import hermitian_eigen

__all__ = [
    "BoundaryTripleModel",
    "WeylSample",
    "GelfandScale",
    "OrdinaryTriple",
    "ExtendedTrace",
    "POLE_WINDOW",
    "pole_distance",
    "check_green",
    "gamma_field",
    "gamma_adjoint",
    "weyl",
    "weyl_identity_residual",
    "gelfand_scale",
    "extended_trace",
    "regularize",
    "transformed_weyl",
    "defect_triple",
    "DefectTripleModel",
    "range_decomposition_check",
]

POLE_WINDOW = 1e-6


def as_columns(f):
    f = np.asarray(f)
    return (f[:, None], True) if f.ndim == 1 else (f, False)


class BoundaryTripleModel(abc.ABC):
    """Interface every concrete or derived model implements."""

    boundary_dim: int
    dim: int
    eta: float
    name: str = "model"

    # interior space -----------------------------------------------------------
    @abc.abstractmethod
    def gram(self, f, g):
        """Matrix of inner products ``(f_j, g_i)`` at position ``[i, j]``."""

    def inner(self, f, g):
        return complex(self.gram(np.asarray(f)[:, None], np.asarray(g)[:, None])[0, 0])

    def norm(self, f):
        f, _ = as_columns(f)
        return np.sqrt(np.maximum(np.real(np.einsum("ii->i", self.gram(f, f))), 0.0))

    @abc.abstractmethod
    def apply_T(self, f):
        ...

    @abc.abstractmethod
    def trace0(self, f):
        ...

    @abc.abstractmethod
    def trace1(self, f):
        ...

    @abc.abstractmethod
    def resolvent_A0(self, lam, f):
        """``(A0 - lam)^{-1} f``."""

    @abc.abstractmethod
    def defect_basis(self, lam):
        """``(dim, g)`` array spanning ker(T - lam) with ``trace0 = identity``."""

    @abc.abstractmethod
    def dirichlet_spectrum(self, a, b):
        """Sorted eigenvalues of ``A0`` in ``[a, b]`` (with multiplicity)."""

    def neumann_spectrum(self, a, b):
        """Eigenvalues of ``A1 = T | ker trace1`` in ``[a, b]``; None if unknown."""
        return None

    def kernel_basis(self, lam):
        """Spanning set of ker(T - lam) inside dom T, valid also on the poles."""
        return self.defect_basis(lam)

    def weyl_closed_form(self, lam):
        return None

    @abc.abstractmethod
    def sample_functions(self, rng, count):
        """Random elements of dom T."""

    @abc.abstractmethod
    def sample_dirichlet(self, rng, count):
        """Random elements of dom A0."""

    def sobolev_weights(self, s):
        return None

    def describe(self):
        return {"model": self.name, "boundary_dim": self.boundary_dim, "eta": self.eta}


@dataclass(frozen=True)
class WeylSample:
    lam: complex
    matrix: np.ndarray
    pole_proximity: float


def pole_distance(model, lam):
    """Distance from ``lam`` to the Dirichlet spectrum and the local level gap."""
    x = float(np.real(lam))
    width = max(10.0, abs(x))
    for _ in range(12):
        pts = np.unique(np.round(model.dirichlet_spectrum(x - width, x + width), 12))
        if pts.size >= 2:
            break
        width *= 2.0
    if pts.size == 0:
        return math.inf, 1.0
    d = np.abs(pts - lam)
    i = int(np.argmin(d))
    neigh = []
    if i > 0:
        neigh.append(pts[i] - pts[i - 1])
    if i + 1 < pts.size:
        neigh.append(pts[i + 1] - pts[i])
    gap = min(neigh) if neigh else max(1.0, abs(pts[i]))
    return float(d[i]), float(gap)


def _check_pole(model, lam):
    dist, gap = pole_distance(model, lam)
    if dist < POLE_WINDOW * gap:
        raise PoleProximityError(f"lambda={lam} lies within {dist:.2e} of the Dirichlet spectrum", dist)
    return dist / gap


def check_green(model, f=None, g=None, rng=None, count=6):
    """Largest normalized defect of the abstract Green identity over all pairs.

    ``(Tf, g) - (f, Tg) = (trace1 f, trace0 g) - (trace0 f, trace1 g)``.
    """
    if f is None or g is None:
        rng = np.random.default_rng(0) if rng is None else rng
        f = model.sample_functions(rng, count) if f is None else f
        g = model.sample_functions(rng, count) if g is None else g
    f, _ = as_columns(f)
    g, _ = as_columns(g)
    tf, tg = model.apply_T(f), model.apply_T(g)
    lhs = model.gram(tf, g) - model.gram(f, tg)
    a0f, a1f = model.trace0(f), model.trace1(f)
    a0g, a1g = model.trace0(g), model.trace1(g)
    rhs = a0g.conj().T @ a1f - a1g.conj().T @ a0f
    nf, ng = model.norm(f), model.norm(g)
    ntf, ntg = model.norm(tf), model.norm(tg)
    scale = (
        np.outer(ng, ntf)
        + np.outer(ntg, nf)
        + np.outer(np.linalg.norm(a0g, axis=0), np.linalg.norm(a1f, axis=0))
        + np.outer(np.linalg.norm(a1g, axis=0), np.linalg.norm(a0f, axis=0))
    )
    return float(np.max(np.abs(lhs - rhs) / np.maximum(scale, 1e-300)))


def gamma_field(model, lam):
    """``gamma(lam)`` as a ``(dim, g)`` array."""
    _check_pole(model, lam)
    return model.defect_basis(lam)


def gamma_adjoint(model, lam, f):
    """``gamma(lam)^* f = trace1 (A0 - conj(lam))^{-1} f``."""
    _check_pole(model, lam)
    return model.trace1(model.resolvent_A0(np.conj(lam), f))


def weyl(model, lam, path="auto"):
    """Weyl function at ``lam``.

    ``path='closed'`` uses the model's explicit formula, ``'trace'``
    applies trace1 to the gamma field, ``'auto'`` prefers the former.
    """
    prox = _check_pole(model, lam)
    mat = None
    if path in ("auto", "closed"):
        mat = model.weyl_closed_form(lam)
        if mat is None and path == "closed":
            raise DomainError(f"{model.name} has no closed-form Weyl function")
    if mat is None:
        mat = model.trace1(model.defect_basis(lam))
    return WeylSample(complex(lam), np.asarray(mat, dtype=complex), prox)


def weyl_identity_residual(model, lam, mu):
    """Relative defects of ``M(lam) - M(mu)^* = (lam - conj mu) gamma(mu)^* gamma(lam)``
    and of ``M(conj lam) = M(lam)^*``."""
    m_lam = weyl(model, lam).matrix
    m_mu = weyl(model, mu).matrix
    g_lam = gamma_field(model, lam)
    g_mu = gamma_field(model, mu)
    rhs = (lam - np.conj(mu)) * model.gram(g_lam, g_mu)
    lhs = m_lam - m_mu.conj().T
    scale = max(1.0, np.linalg.norm(m_lam), np.linalg.norm(m_mu))
    m_bar = weyl(model, np.conj(lam)).matrix
    return {
        "difference": float(np.linalg.norm(lhs - rhs) / scale),
        "conjugate": float(np.linalg.norm(m_bar - m_lam.conj().T) / max(1.0, np.linalg.norm(m_lam))),
    }


@dataclass(frozen=True)
class GelfandScale:
    """Boundary-space scale generated by ``Lambda = Im M(i)``.

    ``iota_plus = Lambda^{-1/2}`` maps the space G1 isometrically onto the
    coordinate space, ``iota_minus = Lambda^{1/2}`` does the same for the
    dual G1'.
    """

    lam: np.ndarray
    sigma: np.ndarray
    iota_plus: np.ndarray
    iota_minus: np.ndarray
    eigenvalues: np.ndarray
    condition: float
    weights: Optional[np.ndarray] = None
    equivalence: Optional[tuple] = None

    def norm_g1(self, x):
        return float(np.linalg.norm(self.iota_plus @ x))

    def norm_g1_dual(self, x):
        return float(np.linalg.norm(self.iota_minus @ x))

    def pairing(self, xdual, x):
        """``<x', x>`` computed as ``(iota_minus x', iota_plus x)``."""
        return complex(np.vdot(self.iota_plus @ x, self.iota_minus @ xdual))


def gelfand_scale(model, condition_cap=1e12):
    m = weyl(model, 1j).matrix
    lam = (m - m.conj().T) / 2j
    w, v = hermitian_eigen(lam, tol=1e-8)
    smallest = float(w[0])
    cond = float(w[-1] / w[0]) if w[0] > 0 else math.inf
    if smallest <= 0 or cond > condition_cap:
        raise ScaleDegenerateError(
            f"Im M(i) numerically singular (smallest eigenvalue {smallest:.3e}, condition {cond:.3e})",
            smallest,
            cond,
        )
    minv = np.linalg.inv(m)
    sigma = (-minv - (-minv).conj().T) / 2j
    iplus = (v / np.sqrt(w)) @ v.conj().T
    iminus = (v * np.sqrt(w)) @ v.conj().T
    weights = model.sobolev_weights(0.5)
    equiv = None
    if weights is not None:
        # ||iota_plus x|| against the H^{1/2} weighted norm
        sv = np.linalg.svd(iplus / weights[None, :], compute_uv=False)
        equiv = (float(sv[-1]), float(sv[0]))
    return GelfandScale(0.5 * (lam + lam.conj().T), 0.5 * (sigma + sigma.conj().T), iplus, iminus, w, cond, weights, equiv)


@dataclass(frozen=True)
class ExtendedTrace:
    g0: np.ndarray
    g1: np.ndarray
    fit_residual: float


def _split(model, lam, f):
    """``f = f0 + f_lam`` with ``f0 in dom A0`` and ``f_lam`` in ker(T - lam)."""
    f0 = model.resolvent_A0(lam, model.apply_T(f) - lam * f)
    return f0, f - f0


def extended_trace(model, f, lam=None):
    """Boundary data of ``f`` reconstructed from its defect component.

    The defect part ``f_lam`` is expanded in the gamma field by an
    interior least-squares fit, which gives the first trace; the second
    is ``M(lam) x + trace1 f0``.
    """
    lam = model.eta if lam is None else lam
    f, single = as_columns(f)
    f0, fl = _split(model, lam, f)
    basis = gamma_field(model, lam)
    gram_bb = model.gram(basis, basis)
    rhs = model.gram(fl, basis)
    x = np.linalg.solve(gram_bb, rhs)
    fit = fl - basis @ x
    res = float(np.max(model.norm(fit) / np.maximum(model.norm(f), 1e-300)))
    y = weyl(model, lam).matrix @ x + model.trace1(f0)
    if single:
        x, y = x[:, 0], y[:, 0]
    return ExtendedTrace(x, y, res)


@dataclass
class OrdinaryTriple:
    """Regularized triple ``(ups0, ups1)`` built from a quasi triple."""

    model: BoundaryTripleModel
    scale: GelfandScale
    eta: float
    m_eta: np.ndarray
    _iminus_inv: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        # iota_minus^{-1} = Lambda^{-1/2} = iota_plus
        self._iminus_inv = self.scale.iota_plus

    @property
    def boundary_dim(self):
        return self.model.boundary_dim

    def ups0(self, f):
        x = extended_trace(self.model, f, self.eta).g0
        return self.scale.iota_minus @ x

    def ups1(self, f):
        f0, _ = _split(self.model, self.eta, as_columns(f)[0])
        out = self.scale.iota_plus @ self.model.trace1(f0)
        return out[:, 0] if np.asarray(f).ndim == 1 else out

    def beta(self, lam):
        return gamma_field(self.model, lam) @ self._iminus_inv

    def weyl(self, lam):
        m = weyl(self.model, lam).matrix
        return self.scale.iota_plus @ (m - self.m_eta) @ self._iminus_inv

    def to_vartheta_block(self):
        """Block map sending a relation for this triple to one for the quasi triple."""
        g = self.boundary_dim
        ip_inv = self.scale.iota_minus  # iota_plus^{-1}
        return self._iminus_inv, np.zeros((g, g)), self.m_eta @ self._iminus_inv, ip_inv


def regularize(model, scale=None, eta=None):
    """Ordinary triple from a quasi triple and a real regular point ``eta``."""
    eta = model.eta if eta is None else float(eta)
    scale = gelfand_scale(model) if scale is None else scale
    m_eta = weyl(model, eta).matrix
    if np.linalg.norm(m_eta - m_eta.conj().T) > 1e-8 * max(1.0, np.linalg.norm(m_eta)):
        raise DomainError("M(eta) is not Hermitian; eta must be real and regular")
    return OrdinaryTriple(model, scale, eta, 0.5 * (m_eta + m_eta.conj().T))


def transformed_weyl(triple: OrdinaryTriple, lam):
    """Weyl function of the regularized triple by definition and by formula."""
    direct = triple.ups1(triple.beta(lam))
    formula = triple.weyl(lam)
    res = float(np.linalg.norm(direct - formula) / max(1.0, np.linalg.norm(formula)))
    return direct, formula, res


class DefectTripleModel(BoundaryTripleModel):
    """Ordinary triple whose boundary space is the defect space at ``eta``.

    The first trace is the coordinate vector of the defect component of
    ``f`` in an orthonormal basis of ker(T - eta); the second is the same
    coordinate vector of ``(T - eta) f``.
    """

    def __init__(self, parent, eta=None):
        self.parent = parent
        self.eta = parent.eta if eta is None else float(eta)
        self.dim = parent.dim
        self.boundary_dim = parent.boundary_dim
        self.name = f"defect({parent.name})"
        basis = parent.defect_basis(self.eta)
        gm = parent.gram(basis, basis)
        w, v = hermitian_eigen(gm, tol=1e-8)
        self.onb = basis @ (v / np.sqrt(w)) @ v.conj().T

    def gram(self, f, g):
        return self.parent.gram(f, g)

    def apply_T(self, f):
        return self.parent.apply_T(f)

    def resolvent_A0(self, lam, f):
        return self.parent.resolvent_A0(lam, f)

    def dirichlet_spectrum(self, a, b):
        return self.parent.dirichlet_spectrum(a, b)

    def trace0(self, f):
        f, single = as_columns(f)
        _, fl = _split(self.parent, self.eta, f)
        out = self.parent.gram(fl, self.onb)
        return out[:, 0] if single else out

    def trace1(self, f):
        f, single = as_columns(f)
        out = self.parent.gram(self.parent.apply_T(f) - self.eta * f, self.onb)
        return out[:, 0] if single else out

    def defect_basis(self, lam):
        b = self.parent.defect_basis(lam)
        return b @ np.linalg.inv(self.trace0(b))

    def sample_functions(self, rng, count):
        return self.parent.sample_functions(rng, count)

    def sample_dirichlet(self, rng, count):
        return self.parent.sample_dirichlet(rng, count)


def defect_triple(model, eta=None):
    return DefectTripleModel(model, eta)


def range_decomposition_check(model, f, lam, scale=None):
    """Check ``trace1 f = M(lam) trace0 f + trace1 f0`` and measure the remainder in G1."""
    f, _ = as_columns(f)
    x = model.trace0(f)
    xp = model.trace1(f)
    m = weyl(model, lam).matrix
    y_formula = xp - m @ x
    f0 = f - gamma_field(model, lam) @ x
    y_direct = model.trace1(f0)
    res = float(np.linalg.norm(y_formula - y_direct) / max(1.0, np.linalg.norm(xp)))
    g1 = None
    if scale is not None:
        g1 = [float(np.linalg.norm(scale.iota_plus @ y_formula[:, j])) for j in range(f.shape[1])]
    return {"residual": res, "g1_norms": g1}
