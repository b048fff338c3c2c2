"""Dense linear algebra, Bessel functions, root finding and quadrature.

Everything here is generic numerical plumbing; the operator-theoretic
modules build on it.  The dense factorizations delegate to LAPACK through
numpy, the special functions and the root bracketing are local.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DimensionError, DomainError, NotHermitianError, SingularSystemError

__all__ = [
    "hermitian_eigen",
    "SVDRank",
    "svd_rank",
    "solve_linear",
    "principal_sqrt",
    "bessel_j",
    "find_roots",
    "find_branch_roots",
    "QuadratureRule",
    "gauss_legendre",
    "quad_integrate",
]


def _as_square(a, name="matrix"):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def hermitian_eigen(h, tol=1e-10):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(w, v)`` with ascending real eigenvalues ``w`` and a unitary
    ``v`` such that ``h @ v = v * w``.  Raises ``NotHermitianError`` when
    ``h`` departs from its adjoint by more than ``tol * max(1, ||h||)``.
    """
    h = _as_square(h)
    if h.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=h.dtype)
    scale = max(1.0, float(np.linalg.norm(h, 2)))
    defect = float(np.linalg.norm(h - h.conj().T, 2))
    if defect > tol * scale:
        raise NotHermitianError(f"matrix is not Hermitian (||H - H*|| = {defect:.3e})")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return w, v


class SVDRank(NamedTuple):
    rank: int
    singular_values: np.ndarray
    null_basis: np.ndarray  # orthonormal columns spanning ker A
    range_basis: np.ndarray  # orthonormal columns spanning ran A


def svd_rank(a, tol=None):
    """Numerical rank with orthonormal bases of the range and the kernel.

    Singular values below ``tol`` count as zero; the default threshold is
    ``1e-10 * sigma_max``.  An absolute ``tol`` may be passed instead.
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise DimensionError("svd_rank expects a 2-D array")
    m, n = a.shape
    if m == 0 or n == 0:
        raise DimensionError("svd_rank of an empty matrix")
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    smax = s[0] if s.size else 0.0
    thresh = 1e-10 * smax if tol is None else tol
    if smax == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > thresh))
    return SVDRank(rank, s, vh[rank:].conj().T, u[:, :rank])


def solve_linear(a, b, exact=False, tol=None):
    """Minimal-norm least-squares solution of ``a x = b``.

    With ``exact=True`` a rank-deficient ``a`` raises ``SingularSystemError``
    instead of returning the least-squares answer.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.shape[0] != a.shape[0]:
        raise DimensionError(f"incompatible shapes {a.shape} and {b.shape}")
    dec = svd_rank(a, tol)
    if exact and dec.rank < a.shape[1]:
        raise SingularSystemError(
            f"rank {dec.rank} < {a.shape[1]}; smallest singular value {dec.singular_values[-1]:.3e}"
        )
    if dec.rank == 0:
        return np.zeros((a.shape[1],) + b.shape[1:], dtype=np.result_type(a, b))
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    r = dec.rank
    coef = u[:, :r].conj().T @ b
    coef = coef / (s[:r] if b.ndim == 1 else s[:r, None])
    return vh[:r].conj().T @ coef


def principal_sqrt(z):
    """Square root on the branch with non-negative imaginary part."""
    r = np.sqrt(np.asarray(z, dtype=complex))
    return np.where(r.imag < 0, -r, r)


# --- Bessel functions of the first kind, integer order ---------------------

_SERIES_LIMIT = 12.0
_MAX_ORDER = 200
_MAX_ARG = 1e4


def _series(n, z):
    """Ascending series for J_n(z), n >= 0, vectorised over z."""
    z = np.asarray(z, dtype=complex)
    half = 0.5 * z
    with np.errstate(divide="ignore", invalid="ignore"):
        lead = np.exp(n * np.log(np.where(half == 0, 1.0, half)) - math.lgamma(n + 1))
    lead = np.where(half == 0, 1.0 if n == 0 else 0.0, lead)
    term = lead.copy()
    total = lead.copy()
    q = -(half * half)
    for m in range(1, 200):
        term = term * q / (m * (m + n))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _miller(orders, z):
    """Backward recurrence for several orders at once; z is 1-D, |z| >= 12."""
    zmax = float(np.max(np.abs(z)))
    top = max(max(orders), int(zmax))
    start = top + 30 + int(math.sqrt(60.0 * top))
    start += start % 2
    out = {k: np.zeros(z.shape, dtype=complex) for k in orders}
    j_next = np.zeros(z.shape, dtype=complex)
    j_cur = np.full(z.shape, 1e-30, dtype=complex)
    real_axis = np.all(np.abs(z.imag) == 0)
    # real arguments: 1 = J0 + 2 sum J_2k; complex: exp(-i s z) = J0 + 2 sum (-i s)^k J_k
    sgn = np.where(z.imag >= 0, 1.0, -1.0)
    phase = -1j * sgn
    norm = np.zeros(z.shape, dtype=complex)
    for k in range(start, 0, -1):
        if k in out:
            out[k] = j_cur.copy()
        if real_axis:
            if k % 2 == 0:
                norm += 2.0 * j_cur
        else:
            norm += 2.0 * phase**k * j_cur
        j_prev = (2.0 * k / z) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        big = np.abs(j_cur) > 1e200
        if np.any(big):
            scale = np.where(big, 1e-200, 1.0)
            j_cur *= scale
            j_next *= scale
            norm *= scale
            for key in out:
                if key > k - 1:
                    out[key] *= scale
    if 0 in out:
        out[0] = j_cur.copy()
    norm += j_cur
    target = np.ones(z.shape, dtype=complex) if real_axis else np.exp(-1j * sgn * z)
    factor = target / norm
    return {k: v * factor for k, v in out.items()}


def _j_orders(orders, z):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    res = {k: np.zeros(z.shape, dtype=complex) for k in orders}
    small = np.abs(z) < _SERIES_LIMIT
    if np.any(small):
        for k in orders:
            res[k][small] = _series(k, z[small])
    if np.any(~small):
        vals = _miller(sorted(orders), z[~small])
        for k in orders:
            res[k][~small] = vals[k]
    return res


def bessel_j(n, x):
    """Value and derivative of the Bessel function ``J_n`` at ``x``.

    ``n`` is an integer with ``|n| <= 200``; ``x`` may be real or complex
    (scalar or array) with ``|x| <= 1e4``.  Small arguments use the
    ascending series, larger ones Miller's backward recurrence.
    Real input returns real output.
    """
    if int(n) != n:
        raise DomainError("only integer orders are supported")
    n = int(n)
    m = abs(n)
    if m > _MAX_ORDER:
        raise DomainError(f"order {n} exceeds {_MAX_ORDER}")
    xa = np.asarray(x)
    if np.any(~np.isfinite(xa)):
        raise DomainError("non-finite argument")
    if np.any(np.abs(xa) > _MAX_ARG):
        raise DomainError(f"|x| exceeds {_MAX_ARG:g}")
    is_real = not np.iscomplexobj(xa)
    orders = {m, m + 1} | ({m - 1} if m > 0 else set())
    vals = _j_orders(orders, xa.ravel())
    val = vals[m]
    der = -vals[1] if m == 0 else 0.5 * (vals[m - 1] - vals[m + 1])
    if n < 0 and m % 2 == 1:
        val, der = -val, -der
    val = val.reshape(xa.shape)
    der = der.reshape(xa.shape)
    if is_real:
        val, der = val.real, der.real
    if xa.ndim == 0:
        return val[()], der[()]
    return val, der


def bessel_ratio(n, z):
    """``J_{n-1}(z) / J_n(z)`` for n >= 1, computed without overflow."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    vals = _j_orders({n - 1, n}, z)
    return vals[n - 1] / vals[n]


# --- roots -------------------------------------------------------------------


def _bracket_roots(f, xs, ys, tol, divergence):
    finite = np.isfinite(ys)
    scale = float(np.median(np.abs(ys[finite]))) if np.any(finite) else 0.0
    roots = []
    for i in range(len(xs) - 1):
        y0, y1 = ys[i], ys[i + 1]
        if not (finite[i] and finite[i + 1]):
            continue
        if y0 == 0.0:
            roots.append(xs[i])
            continue
        if y0 * y1 > 0 or y1 == 0.0:
            continue  # an exact zero at the right end is the next bracket's left end
        if scale > 0 and min(abs(y0), abs(y1)) > divergence * scale:
            continue
        try:
            r = brentq(f, xs[i], xs[i + 1], xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
        except (RuntimeError, ValueError) as exc:  # pragma: no cover
            raise ConvergenceError(str(exc)) from exc
        if abs(f(r)) > max(abs(y0), abs(y1)):
            continue  # the sign change was a pole
        roots.append(r)
    if finite[-1] and ys[-1] == 0.0:
        roots.append(xs[-1])
    return roots


def find_roots(f: Callable[[float], float], a, b, grid=200, tol=1e-12, divergence=1e8):
    """Real roots of ``f`` in ``[a, b]`` by sign changes on a grid plus Brent refinement.

    Brackets whose flanks both exceed ``divergence`` times the median
    sample magnitude are treated as poles and skipped; so are converged
    points where ``|f|`` is larger than on both bracket ends.
    """
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise DomainError(f"invalid interval [{a}, {b}]")
    if grid < 2:
        raise DomainError("grid must have at least two intervals")
    xs = np.linspace(a, b, int(grid) + 1)
    ys = np.array([float(f(x)) for x in xs])
    return np.array(sorted(_bracket_roots(f, xs, ys, tol, divergence)))


def find_branch_roots(f, a, b, grid=200, tol=1e-12, divergence=1e8):
    """Roots of every component of a vector-valued ``f``.

    The grid is sampled once; each component is then refined separately.
    Returns a list of ``(component, root)`` pairs sorted by root.
    """
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise DomainError(f"invalid interval [{a}, {b}]")
    xs = np.linspace(a, b, max(2, int(grid)) + 1)
    table = np.array([np.atleast_1d(f(x)).real for x in xs])
    out = []
    for j in range(table.shape[1]):
        comp = lambda x, j=j: float(np.atleast_1d(f(x))[j].real)
        out.extend((j, r) for r in _bracket_roots(comp, xs, table[:, j], tol, divergence))
    return sorted(out, key=lambda t: t[1])


# --- quadrature --------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    a: float
    b: float

    def __len__(self):
        return self.nodes.size


def _legendre_pair(n, x):
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    return p1, n * (x * p1 - p0) / (x * x - 1.0)


def _legendre_nodes(n):
    # numpy's nodes polished by Newton; weights recomputed from P_n'.  The
    # stock weights carry ~1e-15 absolute error, enough to pollute
    # high-degree Legendre coefficients.
    x, w = np.polynomial.legendre.leggauss(n)
    if n < 3:
        return x, w
    for _ in range(2):
        p, dp = _legendre_pair(n, x)
        x = x - p / dp
    _, dp = _legendre_pair(n, x)
    return x, 2.0 / ((1.0 - x * x) * dp * dp)


def gauss_legendre(n, a=-1.0, b=1.0):
    """Gauss-Legendre rule with ``n`` nodes mapped to ``[a, b]``."""
    if n < 1:
        raise DomainError("quadrature needs at least one node")
    if not b > a:
        raise DomainError("empty interval")
    t, w = _legendre_nodes(int(n))
    half = 0.5 * (b - a)
    return QuadratureRule(a + half * (t + 1.0), half * w, float(a), float(b))


def quad_integrate(values, rule: QuadratureRule, axis=-1):
    """Integrate sampled values (or a callable) against ``rule``."""
    if callable(values):
        values = values(rule.nodes)
    values = np.asarray(values)
    if values.shape[axis] != rule.nodes.size:
        raise DimensionError("sample count does not match the rule")
    return np.tensordot(np.moveaxis(values, axis, -1), rule.weights, axes=([-1], [0]))
