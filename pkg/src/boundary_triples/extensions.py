"""Extensions of the minimal operator parameterized by boundary relations.

An extension is described either by a relation ``theta`` for the
regularized (ordinary) triple or by the relation ``vartheta`` it induces
on the original boundary data; the two are linked through

    vartheta = iota_plus^{-1} theta iota_minus + M(eta).

The extension acts as ``T`` on ``{f : (trace0 f, trace1 f) in vartheta}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from . import relations as rel
from .errors import DomainError, PoleProximityError, RelationError, SingularSystemError
from .numerics import find_branch_roots, hermitian_eigen
from .triple_core import (
    POLE_WINDOW,
    GelfandScale,
    OrdinaryTriple,
    as_columns,
    gamma_field,
    pole_distance,
    regularize,
    weyl,
)

__all__ = [
    "ExtensionHandle",
    "SpectralReport",
    "Eigenvalue",
    "build_extension",
    "from_vartheta",
    "krein_resolvent",
    "krein_residual",
    "classify_point",
    "eigenvalues_in",
    "krein_von_neumann",
    "selfadjointness_bound_test",
    "BoundTestResult",
    "compactness_diagnostic",
    "realize",
    "Realization",
    "adjoint_correspondence_check",
]

TRUNCATION_CAVEAT = "finite truncation: continuous spectrum cannot appear"
OUTSIDE_WEYL = "outside Weyl characterization"


@dataclass
class ExtensionHandle:
    model: object
    triple: OrdinaryTriple
    theta: rel.LinearRelation
    vartheta: rel.LinearRelation
    eta: float
    hypotheses: dict = field(default_factory=dict)
    classification: Optional[rel.Classification] = None

    def __post_init__(self):
        if self.classification is None:
            self.classification = rel.classify(self.theta, 1e-9)

    @property
    def scale(self) -> GelfandScale:
        return self.triple.scale

    @property
    def boundary_dim(self):
        return self.model.boundary_dim


def _hypotheses(model, eta):
    out = {"eta_in_resolvent_A0": True}
    neu = model.neumann_spectrum(eta - 1.0, eta + 1.0)
    if neu is None:
        out["eta_in_resolvent_A1"] = None
    else:
        out["eta_in_resolvent_A1"] = bool(np.all(np.abs(np.asarray(neu) - eta) > 1e-9))
    return out


def _triple(model, eta, scale):
    eta = model.eta if eta is None else float(eta)
    if abs(np.imag(eta)) > 0:
        raise DomainError("eta must be real")
    dist, gap = pole_distance(model, eta)
    if dist < POLE_WINDOW * gap:
        raise PoleProximityError(f"eta={eta} lies in the Dirichlet spectrum", dist)
    return regularize(model, scale, eta)


def build_extension(model, theta, eta=None, scale=None):
    """Extension for a relation ``theta`` in the coordinates of the regularized triple."""
    triple = _triple(model, eta, scale)
    if theta.g != model.boundary_dim:
        raise DomainError(f"relation acts in C^{theta.g}, model boundary has dimension {model.boundary_dim}")
    a, b, c, d = triple.to_vartheta_block()
    vartheta = rel.block_map(theta, a, b, c, d)
    return ExtensionHandle(model, triple, theta, vartheta, triple.eta, _hypotheses(model, triple.eta))


def from_vartheta(model, vartheta, eta=None, scale=None):
    """Extension with boundary condition ``(trace0 f, trace1 f) in vartheta``."""
    triple = _triple(model, eta, scale)
    if vartheta.g != model.boundary_dim:
        raise DomainError(f"relation acts in C^{vartheta.g}, model boundary has dimension {model.boundary_dim}")
    ip, im = triple.scale.iota_plus, triple.scale.iota_minus
    g = model.boundary_dim
    theta = rel.block_map(vartheta, im, np.zeros((g, g)), -ip @ triple.m_eta, ip)
    return ExtensionHandle(model, triple, theta, vartheta, triple.eta, _hypotheses(model, triple.eta))


def _minus_weyl(handle, lam):
    m = weyl(handle.model, lam).matrix
    g = handle.boundary_dim
    eye = np.eye(g)
    return rel.block_map(handle.vartheta, eye, np.zeros((g, g)), -m, eye), m


def krein_resolvent(handle, lam, f):
    """``(A_vartheta - lam)^{-1} f`` through the resolvent of ``A0`` and the Weyl function."""
    model = handle.model
    f, single = as_columns(np.asarray(f, dtype=complex))
    u = model.resolvent_A0(lam, f)  # also the pole guard through weyl below
    shifted, _ = _minus_weyl(handle, lam)
    point = rel.spectrum_point(shifted, 0.0)
    if point.kind != "resolvent":
        raise SingularSystemError(f"lambda={lam} is not in the resolvent set ({point.kind})")
    y = model.trace1(u)  # gamma(conj lam)^* f
    x = rel.apply(rel.inverse(shifted), y)
    g = u + gamma_field(model, lam) @ x
    return g[:, 0] if single else g


def krein_residual(handle, lam, f, g):
    """Relative defects of ``(T - lam) g = f`` and of the boundary condition."""
    model = handle.model
    f, _ = as_columns(f)
    g, _ = as_columns(g)
    interior = model.norm(model.apply_T(g) - lam * g - f) / np.maximum(model.norm(f), 1e-300)
    data = np.vstack([model.trace0(g), model.trace1(g)])
    q = handle.vartheta.basis
    miss = data - q @ (q.conj().T @ data)
    boundary = np.linalg.norm(miss, axis=0) / np.maximum(np.linalg.norm(data, axis=0), 1e-300)
    return {"interior": float(np.max(interior)), "boundary": float(np.max(boundary))}


@dataclass
class SpectralReport:
    lam: complex
    classification: str
    kernel_basis: np.ndarray
    residuals: dict
    caveats: list

    @property
    def kernel_dim(self):
        return int(self.kernel_basis.shape[1])

    def to_dict(self):
        return {
            "lambda": [float(np.real(self.lam)), float(np.imag(self.lam))],
            "class": self.classification,
            "kernel_dim": self.kernel_dim,
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "caveats": list(self.caveats),
        }


def classify_point(handle, lam, tol=1e-8):
    """Where ``lam`` sits relative to the spectrum of the extension."""
    model = handle.model
    dist, gap = pole_distance(model, lam)
    g = handle.boundary_dim
    if dist < POLE_WINDOW * gap:
        return SpectralReport(complex(lam), "excluded_pole", np.zeros((g, 0)), {"pole_distance": dist}, [OUTSIDE_WEYL])
    shifted, m = _minus_weyl(handle, lam)
    ip, im = handle.scale.iota_plus, handle.scale.iota_minus
    zero = np.zeros((g, g))
    # move to the regularized coordinates before judging the kernel
    transformed = rel.block_map(shifted, im, zero, zero, ip)
    point = rel.spectrum_point(rel.LinearRelation(g, transformed.basis, tol), 0.0, tol)
    kernel = ip @ point.kernel if point.kernel.shape[1] else np.zeros((g, 0), dtype=complex)
    if kernel.shape[1]:
        kernel = np.linalg.qr(kernel)[0]
    residuals = {"smallest_singular": point.smallest_singular}
    if kernel.shape[1]:
        data = np.vstack([kernel, m @ kernel])
        q = handle.vartheta.basis
        miss = data - q @ (q.conj().T @ data)
        residuals["boundary"] = float(np.linalg.norm(miss, 2) / max(1.0, np.linalg.norm(data, 2)))
        h = gamma_field(model, lam) @ kernel
        tr = model.apply_T(h) - lam * h
        residuals["interior"] = float(np.max(model.norm(tr) / model.norm(h)))
    return SpectralReport(complex(lam), point.kind, kernel, residuals, [TRUNCATION_CAVEAT])


@dataclass
class Eigenvalue:
    value: float
    multiplicity: int
    kernel: np.ndarray  # boundary vectors trace0 of the eigenfunctions
    tag: str = ""


def _secular_branches(handle):
    dec = rel.selfadjoint_decompose(handle.vartheta)
    h, q = dec.operator_part, dec.dom_basis

    def branches(lam):
        m = handle.model.weyl_closed_form(lam)
        if m is None:
            m = weyl(handle.model, lam).matrix
        s = h - q.conj().T @ m @ q
        return np.linalg.eigvalsh(0.5 * (s + s.conj().T))

    return branches, q.shape[1]


def _pole_oracle(handle, pole, tol=1e-8):
    model = handle.model
    k = model.kernel_basis(pole)
    data = np.vstack([model.trace0(k), model.trace1(k)])
    norms = np.linalg.norm(data, axis=0)
    keep = norms > 1e-12 * max(1.0, norms.max())
    if not np.any(keep):
        return None
    k, data = k[:, keep], data[:, keep] / norms[keep]
    q = handle.vartheta.basis
    miss = data - q @ (q.conj().T @ data)
    _, s, vh = np.linalg.svd(miss, full_matrices=True)
    rank = int(np.count_nonzero(s > tol))
    c = vh[rank:].conj().T
    if c.shape[1] == 0:
        return None
    boundary = data[: model.boundary_dim] @ c
    return Eigenvalue(float(pole), c.shape[1], boundary, OUTSIDE_WEYL)


def _distinct(values, rtol=1e-10):
    out = []
    for v in np.sort(np.asarray(values, dtype=float)):
        if not out or v - out[-1] > rtol * max(1.0, abs(v)):
            out.append(float(v))
    return np.array(out)


def eigenvalues_in(handle, a, b, grid=400, tol=1e-12, kernel_tol=1e-7):
    """Eigenvalues of a self-adjoint extension in ``[a, b]`` with multiplicities.

    Between consecutive Dirichlet eigenvalues every eigenvalue branch of
    ``H - Q^* M(lam) Q`` decreases strictly, so each branch crosses zero
    at most once there.  Dirichlet eigenvalues themselves are checked
    directly and tagged.  Non-self-adjoint parameters fall back to a scan
    of the smallest singular value.
    """
    if not b > a:
        raise DomainError("empty interval")
    model = handle.model
    if not rel.classify(handle.vartheta, 1e-9).self_adjoint:
        return _eigen_scan_general(handle, a, b, grid, kernel_tol)
    poles = _distinct(model.dirichlet_spectrum(a, b))
    found = []
    branches, width = _secular_branches(handle)
    if width:
        edges = [a] + [p for p in poles if a < p < b] + [b]
        for lo, hi in zip(edges[:-1], edges[1:]):
            lo_s, hi_s = lo, hi
            if lo in poles:
                lo_s = lo + 4 * POLE_WINDOW * pole_distance(model, lo)[1]
            if hi in poles:
                hi_s = hi - 4 * POLE_WINDOW * pole_distance(model, hi)[1]
            if hi_s <= lo_s:
                continue
            n = max(8, int(grid * (hi - lo) / (b - a)))
            for _, r in find_branch_roots(branches, lo_s, hi_s, grid=n, tol=tol, divergence=math.inf):
                found.append(r)
    found.sort()
    clusters = []
    for r in found:
        if clusters and abs(r - clusters[-1][-1]) <= 1e-9 * max(1.0, abs(r)):
            clusters[-1].append(r)
        else:
            clusters.append([r])
    out = []
    for cl in clusters:
        lam = float(np.mean(cl))
        rep = classify_point(handle, lam, tol=kernel_tol)
        mult = max(rep.kernel_dim, len(cl)) if rep.classification == "eigenvalue" else len(cl)
        out.append(Eigenvalue(lam, mult, rep.kernel_basis, ""))
    for p in poles:
        if a <= p <= b:
            ev = _pole_oracle(handle, p)
            if ev is not None:
                out.append(ev)
    return sorted(out, key=lambda e: e.value)


def _eigen_scan_general(handle, a, b, grid, kernel_tol):
    model = handle.model
    poles = _distinct(model.dirichlet_spectrum(a, b))

    def smin(lam):
        try:
            shifted, _ = _minus_weyl(handle, lam)
        except PoleProximityError:
            return math.inf
        _x, y = shifted.upper, shifted.lower
        return float(np.linalg.svd(y, compute_uv=False)[-1]) if y.shape[1] >= shifted.g else 0.0

    xs = np.linspace(a, b, grid + 1)
    vals = np.array([smin(x) for x in xs])
    out = []
    for i in range(1, grid):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            res = minimize_scalar(smin, bounds=(xs[i - 1], xs[i + 1]), method="bounded", options={"xatol": 1e-12})
            if res.fun < kernel_tol:
                rep = classify_point(handle, res.x, tol=kernel_tol)
                if rep.classification == "eigenvalue":
                    out.append(Eigenvalue(float(res.x), rep.kernel_dim, rep.kernel_basis, ""))
    for p in poles:
        ev = _pole_oracle(handle, p)
        if ev is not None:
            out.append(ev)
    return sorted(out, key=lambda e: e.value)


def krein_von_neumann(model, eta=None, scale=None):
    """Extension with ``theta = 0``; its kernel at ``eta`` is the whole defect space."""
    g = model.boundary_dim
    zero = rel.graph(np.zeros((g, g)))
    handle = build_extension(model, zero, eta, scale)
    return handle, classify_point(handle, handle.eta)


# --- self-adjointness by relative bounds ----------------------------------------


@dataclass(frozen=True)
class BoundTestResult:
    c1: float
    c2: float
    verdict: str
    tail_dim: int


def _operator_matrix(relation):
    p = rel.parts(relation)
    if p.mul.shape[1] or p.dom.shape[1] < relation.g:
        raise RelationError("relative bound test needs an everywhere defined operator")
    return relation.lower @ np.linalg.pinv(relation.upper)


def selfadjointness_bound_test(handle, tol=0.02, tail_fraction=0.5, rng=None):
    """Estimate ``c1, c2`` in ``||vartheta x||_G1 <= c1 ||x||_G1' + c2 ||M(eta) x||_G1``.

    At a fixed truncation every bounded ``vartheta`` satisfies such a
    bound for any ``c2`` once ``c1`` is large, so ``c2`` is taken as the
    worst ratio ``||vartheta x|| / ||M(eta) x||`` on the high-frequency half
    of the coordinates (where ``M(eta)`` is largest in the scaled norms).
    """
    theta_mat = _operator_matrix(handle.vartheta)
    ip = handle.scale.iota_plus
    p = ip @ theta_mat @ ip
    q = ip @ handle.triple.m_eta @ ip
    u, s, vh = np.linalg.svd(q)
    g = s.size
    k = max(1, int(round(tail_fraction * g)))
    v_tail = vh[:k].conj().T
    c2 = float(np.linalg.norm(p @ v_tail / s[:k][None, :], 2))
    rng = np.random.default_rng(0) if rng is None else rng
    probes = np.hstack([vh.conj().T, rng.standard_normal((g, 4 * g)) + 1j * rng.standard_normal((g, 4 * g))])
    probes /= np.linalg.norm(probes, axis=0)
    c1 = float(max(0.0, np.max(np.linalg.norm(p @ probes, axis=0) - c2 * np.linalg.norm(q @ probes, axis=0))))
    if c2 < 1.0 - tol:
        verdict = "self_adjoint_by_iii"
    elif abs(c2 - 1.0) <= tol:
        verdict = "essentially_sa_by_wuest"
    else:
        verdict = "inconclusive"
    return BoundTestResult(c1, c2, verdict, k)


def compactness_diagnostic(handles, tail_fraction=0.5, ratio=0.75):
    """Tail norms of ``vartheta`` from G0 to G1 across refinements.

    ``handles`` are extensions of the same problem at increasing
    truncation.  The tail is the high-frequency part of G0 (smallest
    eigenvalues of Sigma).  Decay by at least ``ratio`` per refinement is
    reported as consistent with compactness.
    """
    tails = []
    for h in handles:
        theta_mat = _operator_matrix(h.vartheta)
        w, v = hermitian_eigen(h.scale.sigma, tol=1e-8)
        w = np.maximum(w, 0.0)
        k = max(1, int(round(tail_fraction * w.size)))
        sig_half_tail = v[:, :k] * np.sqrt(w[:k])
        tails.append(float(np.linalg.norm(h.scale.iota_plus @ theta_mat @ sig_half_tail, 2)))
    tails = np.array(tails)
    decays = tails[1:] / np.maximum(tails[:-1], 1e-300)
    compact = bool(np.all((decays <= ratio) | (tails[1:] < 1e-12)))
    return {"tail_norms": tails.tolist(), "decay_ratios": decays.tolist(), "compact": compact}


# --- realization on the truncated interior space ----------------------------------


@dataclass
class Realization:
    domain: np.ndarray  # coefficient basis of dom A_theta inside the truncation
    compression: np.ndarray  # (T z_j, z_i) in an interior-orthonormal basis
    adjoint_domain: np.ndarray
    minimal_dim: int
    boundary_map: np.ndarray


def _interior_orthonormal(model, z):
    gm = model.gram(z, z)
    w, v = hermitian_eigen(gm, tol=1e-8)
    keep = w > 1e-12 * max(w.max(), 1e-300)
    return z @ (v[:, keep] / np.sqrt(w[keep]))


def _null_cols(a, tol):
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    rank = int(np.count_nonzero(s > tol * max(1.0, s[0] if s.size else 0.0)))
    return vh[rank:].conj().T


def realize(handle, tol=1e-9):
    """Matrix picture of the extension on the whole truncated interior space.

    The domain is cut out by the regularized boundary maps; the adjoint
    domain is computed from the interior form ``(Tf, g) - (f, Tg)`` alone.
    """
    model, triple = handle.model, handle.triple
    eye = np.eye(model.dim, dtype=complex)
    ups = np.vstack([triple.ups0(eye), triple.ups1(eye)])
    q = handle.theta.basis
    constraint = ups - q @ (q.conj().T @ ups)
    z = _null_cols(constraint, tol)
    z = _interior_orthonormal(model, z)
    tz = model.apply_T(z)
    k = model.gram(tz, z)
    # adjoint domain: coefficients c with (T z_i, c) - (z_i, T c) = 0 for all i
    t_all = model.apply_T(eye)
    a = model.gram(tz, eye) - model.gram(z, t_all)
    ad = _null_cols(a.conj().T, tol)
    minimal = _null_cols(ups, tol).shape[1]
    return Realization(z, k, ad, minimal, ups)


def realized_classification(handle, real=None, tol=1e-8):
    """Class of the extension read off its realization (not off theta)."""
    real = realize(handle) if real is None else real
    k = real.compression
    g = handle.boundary_dim
    scale = max(1.0, np.linalg.norm(k, 2))
    herm = np.linalg.norm(k - k.conj().T, 2) / scale
    sym = herm <= tol
    imag = (k - k.conj().T) / 2j
    w = np.linalg.eigvalsh(0.5 * (imag + imag.conj().T)) / scale if k.size else np.zeros(1)
    diss = bool(w.min() >= -tol)
    acc = bool(w.max() <= tol)
    extra = real.domain.shape[1] - real.minimal_dim
    full = extra == g
    same = _same_span(real.domain, real.adjoint_domain)
    return rel.Classification(
        symmetric=bool(sym),
        self_adjoint=bool(sym and same),
        dissipative=diss,
        accumulative=acc,
        maximal_dissipative=diss and full,
        maximal_accumulative=acc and full,
        im_form_min=float(w.min()),
        im_form_max=float(w.max()),
    )


def _same_span(a, b, tol=1e-7):
    if a.shape[1] != b.shape[1]:
        return False
    qa = np.linalg.qr(a)[0]
    qb = np.linalg.qr(b)[0]
    r1 = np.linalg.norm(qa - qb @ (qb.conj().T @ qa), 2)
    r2 = np.linalg.norm(qb - qa @ (qa.conj().T @ qb), 2)
    return max(r1, r2) <= tol


def adjoint_correspondence_check(handle, tol=1e-7):
    """Compare the adjoint domain from the interior form with the domain for ``theta^*``."""
    real = realize(handle)
    adj = build_extension(handle.model, rel.adjoint(handle.theta), handle.eta, handle.scale)
    real_adj = realize(adj)
    qa = np.linalg.qr(real.adjoint_domain)[0] if real.adjoint_domain.shape[1] else real.adjoint_domain
    qb = np.linalg.qr(real_adj.domain)[0] if real_adj.domain.shape[1] else real_adj.domain
    if qa.shape[1] != qb.shape[1]:
        return {"match": False, "residual": math.inf, "dims": (qa.shape[1], qb.shape[1])}
    r = 0.0
    if qa.shape[1]:
        r = max(
            np.linalg.norm(qa - qb @ (qb.conj().T @ qa), 2),
            np.linalg.norm(qb - qa @ (qa.conj().T @ qb), 2),
        )
    # the compression of the adjoint extension is the matrix adjoint on the common part
    return {"match": bool(r <= tol), "residual": float(r), "dims": (qa.shape[1], qb.shape[1])}
