"""Closed linear relations in C^g, i.e. subspaces of C^g x C^g.

A relation is stored as an orthonormal basis of its graph: a ``2g x d``
matrix whose upper ``g`` rows are the domain component and whose lower
rows are the range component.  Operators are relations with trivial
multivalued part; a boundary condition such as "Dirichlet" is the
purely multivalued relation ``{0} x C^g``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, RelationError
from .numerics import hermitian_eigen, svd_rank

__all__ = [
    "LinearRelation",
    "make_relation",
    "graph",
    "multivalued",
    "parts",
    "inverse",
    "relation_sum",
    "product",
    "adjoint",
    "shift",
    "block_map",
    "apply",
    "subspace_equal",
    "axiom_residuals",
    "contains",
    "classify",
    "Classification",
    "spectrum_point",
    "SpectralPoint",
    "selfadjoint_decompose",
    "load_relation",
    "save_relation",
    "relation_to_dict",
    "relation_from_dict",
]

DEFAULT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LinearRelation:
    g: int
    basis: np.ndarray
    tol: float = DEFAULT_TOL

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def upper(self):
        return self.basis[: self.g]

    @property
    def lower(self):
        return self.basis[self.g :]

    def __repr__(self):
        return f"LinearRelation(g={self.g}, dim={self.dim})"


def _orth(vectors, tol):
    """Orthonormal basis of the column span of ``vectors``.

    ``tol`` is relative to the largest singular value; vectors of norm
    below ``tol`` are treated as zero.
    """
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.shape[1] == 0 or not np.any(vectors):
        return np.zeros((vectors.shape[0], 0), dtype=complex)
    dec = svd_rank(vectors)
    smax = dec.singular_values[0]
    rank = int(np.count_nonzero(dec.singular_values > tol * max(smax, 1.0)))
    if rank == 0:
        return np.zeros((vectors.shape[0], 0), dtype=complex)
    u = np.linalg.svd(vectors, full_matrices=False)[0]
    return u[:, :rank]


def _null(a, tol):
    """Orthonormal basis of ker a (columns), tolerance relative to max(1, ||a||)."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[1]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if a.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    thresh = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.count_nonzero(s > thresh))
    return vh[rank:].conj().T


def make_relation(vectors, g=None, tol=DEFAULT_TOL):
    """Relation spanned by the columns of a ``2g x k`` array."""
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.ndim != 2:
        raise DimensionError("relation vectors must form a 2-D array")
    if g is None:
        if vectors.shape[0] % 2:
            raise DimensionError("odd number of rows; cannot split into (x, x')")
        g = vectors.shape[0] // 2
    if vectors.shape[0] != 2 * g:
        raise DimensionError(f"expected {2 * g} rows, got {vectors.shape[0]}")
    return LinearRelation(int(g), _orth(vectors, tol), tol)


def graph(h, tol=DEFAULT_TOL):
    """Graph ``{(x, h x)}`` of a square matrix."""
    h = np.atleast_2d(np.asarray(h, dtype=complex))
    if h.shape[0] != h.shape[1]:
        raise DimensionError("graph of a non-square matrix")
    g = h.shape[0]
    return make_relation(np.vstack([np.eye(g), h]), g, tol)


def multivalued(g, tol=DEFAULT_TOL):
    """The relation ``{0} x C^g``."""
    return make_relation(np.vstack([np.zeros((g, g)), np.eye(g)]), g, tol)


class RelationParts(NamedTuple):
    dom: np.ndarray
    ran: np.ndarray
    ker: np.ndarray
    mul: np.ndarray


def parts(rel: LinearRelation):
    """Orthonormal bases of dom, ran, ker and mul."""
    x, y = rel.upper, rel.lower
    tol = rel.tol
    dom = _orth(x, tol)
    ran = _orth(y, tol)
    ker = _orth(x @ _null(y, tol), tol)
    mul = _orth(y @ _null(x, tol), tol)
    return RelationParts(dom, ran, ker, mul)


def inverse(rel):
    return LinearRelation(rel.g, np.vstack([rel.lower, rel.upper]), rel.tol)


def _check_same(a, b):
    if a.g != b.g:
        raise DimensionError(f"boundary dimensions differ: {a.g} vs {b.g}")


def relation_sum(a, b):
    """Operator-style sum ``{(x, y + z) : (x, y) in a, (x, z) in b}``."""
    _check_same(a, b)
    tol = max(a.tol, b.tol)
    # pairs of coefficients with a.upper c1 = b.upper c2, i.e. a lift into C^{3g}
    c = _null(np.hstack([a.upper, -b.upper]), tol)
    c1, c2 = c[: a.dim], c[a.dim :]
    return make_relation(np.vstack([a.upper @ c1, a.lower @ c1 + b.lower @ c2]), a.g, tol)


def product(a, b):
    """Composition ``a b = {(x, z) : (x, y) in b, (y, z) in a}``."""
    _check_same(a, b)
    tol = max(a.tol, b.tol)
    c = _null(np.hstack([b.lower, -a.upper]), tol)
    cb, ca = c[: b.dim], c[b.dim :]
    return make_relation(np.vstack([b.upper @ cb, a.lower @ ca]), a.g, tol)


def adjoint(rel):
    """``{(y, y') : (x', y) = (x, y') for all (x, x') in rel}``."""
    j_basis = np.vstack([rel.lower, -rel.upper])
    comp = _null(j_basis.conj().T, rel.tol)
    return make_relation(comp, rel.g, rel.tol)


def shift(rel, lam):
    """``rel - lam = {(x, x' - lam x)}``."""
    return make_relation(np.vstack([rel.upper, rel.lower - lam * rel.upper]), rel.g, rel.tol)


def block_map(rel, a, b, c, d):
    """Image of ``rel`` under ``(x, x') -> (a x + b x', c x + d x')``."""
    x, y = rel.upper, rel.lower
    return make_relation(np.vstack([a @ x + b @ y, c @ x + d @ y]), rel.g, rel.tol)


def apply(rel, y):
    """Evaluate an operator-valued relation: the ``x'`` with ``(y, x') in rel``.

    Raises ``RelationError`` if ``y`` is not in the domain or the relation
    is multivalued.
    """
    y = np.asarray(y, dtype=complex)
    mul_part = parts(rel).mul
    if mul_part.shape[1]:
        raise RelationError("relation has a nontrivial multivalued part")
    coef, *_ = np.linalg.lstsq(rel.upper, y, rcond=None)
    miss = np.linalg.norm(rel.upper @ coef - y)
    if miss > 1e3 * rel.tol * max(1.0, np.linalg.norm(y)):
        raise RelationError(f"vector not in the domain (residual {miss:.2e})")
    return rel.lower @ coef


def _proj_residual(q_from, q_onto):
    if q_from.shape[1] == 0:
        return 0.0
    if q_onto.shape[1] == 0:
        return float(np.linalg.norm(q_from, 2))
    r = q_from - q_onto @ (q_onto.conj().T @ q_from)
    return float(np.linalg.norm(r, 2))


def contains(big, small, tol=None):
    """True if ``small`` is a subspace of ``big``."""
    _check_same(big, small)
    tol = max(big.tol, small.tol) * 10 if tol is None else tol
    return _proj_residual(small.basis, big.basis) <= tol


def subspace_equal(a, b, tol=None):
    """Mutual-projection test; returns ``(equal, residual)``."""
    _check_same(a, b)
    tol = max(a.tol, b.tol) * 10 if tol is None else tol
    if a.dim != b.dim:
        return False, float("inf")
    res = max(_proj_residual(a.basis, b.basis), _proj_residual(b.basis, a.basis))
    return res <= tol, res


def _imag_form(rel):
    """Hermitian matrix of ``c -> Im (x', x)`` on graph coefficients."""
    x, y = rel.upper, rel.lower
    p = x.conj().T @ y
    return (p - p.conj().T) / 2j


@dataclass(frozen=True)
class Classification:
    symmetric: bool
    self_adjoint: bool
    dissipative: bool
    accumulative: bool
    maximal_dissipative: bool
    maximal_accumulative: bool
    im_form_min: float
    im_form_max: float

    def label(self):
        if self.self_adjoint:
            return "self_adjoint"
        if self.symmetric:
            return "symmetric"
        if self.maximal_dissipative:
            return "maximal_dissipative"
        if self.maximal_accumulative:
            return "maximal_accumulative"
        if self.dissipative:
            return "dissipative"
        if self.accumulative:
            return "accumulative"
        return "none"

    def flags(self):
        return {
            k: getattr(self, k)
            for k in (
                "symmetric",
                "self_adjoint",
                "dissipative",
                "accumulative",
                "maximal_dissipative",
                "maximal_accumulative",
            )
        }


def classify(rel, tol=1e-10):
    """Symmetry, self-adjointness and dissipativity flags.

    A relation in C^g is maximal in either class exactly when its dimension
    equals ``g``.
    """
    sym = contains(adjoint(rel), rel, tol=max(tol, 10 * rel.tol))
    if rel.dim:
        w, _ = hermitian_eigen(_imag_form(rel))
        lo, hi = float(w[0]), float(w[-1])
    else:
        lo = hi = 0.0
    diss = lo >= -tol
    acc = hi <= tol
    full = rel.dim == rel.g
    return Classification(
        symmetric=sym,
        self_adjoint=sym and full,
        dissipative=diss,
        accumulative=acc,
        maximal_dissipative=diss and full,
        maximal_accumulative=acc and full,
        im_form_min=lo,
        im_form_max=hi,
    )


class SpectralPoint(NamedTuple):
    kind: str  # "eigenvalue" | "residual" | "resolvent"
    kernel: np.ndarray
    range_defect: int
    smallest_singular: float
    finite_dimensional: bool


def spectrum_point(rel, lam, tol=None):
    """Classify ``lam`` relative to ``rel``.

    In finite dimensions there is no continuous spectrum: either
    ``rel - lam`` has a kernel, a range defect, or a bounded inverse.
    """
    tol = rel.tol if tol is None else tol
    r = shift(rel, lam)
    x, y = r.upper, r.lower
    null_y = _null(y, tol)
    ker = _orth(x @ null_y, tol) if null_y.shape[1] else np.zeros((rel.g, 0), dtype=complex)
    ran_dim = _orth(y, tol).shape[1]
    if y.shape[1]:
        sv = np.linalg.svd(y, compute_uv=False)
        smallest = float(sv[-1]) if y.shape[1] >= rel.g and sv.size >= rel.g else 0.0
    else:
        smallest = 0.0
    if ker.shape[1]:
        kind = "eigenvalue"
    elif ran_dim < rel.g:
        kind = "residual"
    else:
        kind = "resolvent"
    return SpectralPoint(kind, ker, rel.g - ran_dim, smallest, True)


class SADecomposition(NamedTuple):
    operator_part: np.ndarray  # Hermitian matrix acting on dom_basis coordinates
    dom_basis: np.ndarray  # orthonormal basis of (mul)^perp
    mul_basis: np.ndarray


def selfadjoint_decompose(rel, tol=1e-9):
    """Split a self-adjoint relation into an operator part and ``{0} x mul``.

    Returns ``H`` with ``rel = {(Q c, Q H c + m) : m in mul}``, where ``Q``
    is an orthonormal basis of ``(mul rel)^perp``.
    """
    cls = classify(rel, tol)
    if not cls.self_adjoint:
        raise RelationError("relation is not self-adjoint")
    p = parts(rel)
    mul = p.mul
    g = rel.g
    if mul.shape[1]:
        q = _null(mul.conj().T, rel.tol)
    else:
        q = np.eye(g, dtype=complex)
    if q.shape[1] == 0:
        return SADecomposition(np.zeros((0, 0), dtype=complex), q, mul)
    # coefficients c with rel.upper c = q e_k
    x, y = rel.upper, rel.lower
    coef, *_ = np.linalg.lstsq(x, q, rcond=None)
    h = q.conj().T @ (y @ coef)
    h = 0.5 * (h + h.conj().T)
    return SADecomposition(h, q, mul)


# --- JSON ----------------------------------------------------------------------


def relation_to_dict(rel):
    return {
        "g": rel.g,
        "basis_real": rel.basis.real.tolist(),
        "basis_imag": rel.basis.imag.tolist(),
    }


def relation_from_dict(data, tol=DEFAULT_TOL):
    try:
        g = int(data["g"])
        re = np.asarray(data["basis_real"], dtype=float)
        im = np.asarray(data.get("basis_imag", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise RelationError(f"malformed relation record: {exc}") from exc
    if re.ndim == 1:
        if re.size % (2 * g):
            raise RelationError("flat basis length is not a multiple of 2g")
        re = re.reshape(2 * g, -1)
        im = im.reshape(2 * g, -1)
    if re.shape != im.shape or re.shape[0] != 2 * g:
        raise RelationError(f"basis must be 2g x d with g={g}, got {re.shape}")
    return make_relation(re + 1j * im, g, tol)


def save_relation(rel, path):
    with open(path, "w") as fh:
        json.dump(relation_to_dict(rel), fh, indent=1)


def load_relation(path, tol=DEFAULT_TOL):
    with open(path) as fh:
        return relation_from_dict(json.load(fh), tol)


def _span_residual(a, b):
    """Distance between the spans of two orthonormal bases (inf on a dimension mismatch)."""
    if a.shape[1] != b.shape[1]:
        return math.inf
    return max(_proj_residual(a, b), _proj_residual(b, a))


def axiom_residuals(rel):
    """Residuals of the identities every closed relation in C^g satisfies.

    ``double_adjoint``: rel** = rel; ``dimension``: dim rel + dim rel* - 2g;
    ``mul_adjoint``: mul rel* against (dom rel)^perp; ``double_inverse``.
    """
    star = adjoint(rel)
    dom = parts(rel).dom
    dom_perp = _null(dom.conj().T, rel.tol) if dom.shape[1] else np.eye(rel.g, dtype=complex)
    return {
        "double_adjoint": subspace_equal(adjoint(star), rel, tol=math.inf)[1],
        "dimension": float(abs(rel.dim + star.dim - 2 * rel.g)),
        "mul_adjoint": _span_residual(parts(star).mul, dom_perp),
        "double_inverse": subspace_equal(inverse(inverse(rel)), rel, tol=math.inf)[1],
    }
