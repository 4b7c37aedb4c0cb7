"""Dense real-matrix primitives: rank, determinant, minimum-norm solves and
polynomial roots.

Matrices are plain 2-D ``numpy`` float arrays; :func:`as_matrix` is the single
entry point that coerces and checks them.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePolynomialError, DimensionError, NonFiniteError

DEFAULT_RANK_TOL = 1e-10


def as_matrix(data, rows=None, cols=None, name="matrix"):
    """Coerce ``data`` to a finite 2-D float array, optionally of a fixed shape.

    A 1-D input becomes a column. Empty nested lists are accepted when the
    expected shape is given (``[]`` for an n x 0 input matrix).
    """
    m = np.array(data, dtype=float)
    if m.ndim == 1:
        if m.size == 0 and rows is not None and cols is not None:
            m = m.reshape(rows, cols)
        else:
            m = m.reshape(-1, 1)
    elif m.ndim == 2 and m.size == 0 and rows is not None and cols is not None:
        m = m.reshape(rows, cols)
    if m.ndim != 2:
        raise DimensionError(f"{name}: expected a 2-D array, got {m.ndim}-D")
    if (rows is not None and m.shape[0] != rows) or (cols is not None and m.shape[1] != cols):
        raise DimensionError(f"{name}: expected shape ({rows}, {cols}), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteError(f"{name}: non-finite entry")
    return m


def as_vector(data, size=None, name="vector"):
    v = np.array(data, dtype=float).reshape(-1)
    if size is not None and v.size != size:
        raise DimensionError(f"{name}: expected length {size}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteError(f"{name}: non-finite entry")
    return v


def _threshold(sv, tol_rel):
    return tol_rel * sv[0] if sv.size else 0.0


def rank(m, tol_rel=DEFAULT_RANK_TOL):
    """Number of singular values strictly above ``tol_rel * sigma_max``."""
    if tol_rel <= 0:
        raise ValueError("tol_rel must be positive")
    m = as_matrix(m)
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > _threshold(sv, tol_rel)))


def determinant(m):
    """Determinant through LU factorization with partial pivoting."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"determinant of non-square {m.shape} matrix")
    return float(np.linalg.det(m))


def solve_min_norm(a, rhs, tol_rel=DEFAULT_RANK_TOL):
    """Minimum-norm least-squares solution of ``a @ x = rhs``.

    Singular values at or below ``tol_rel * sigma_max`` are discarded, the
    same cut used by :func:`rank`, so the solve and the rank verdict agree.

    Returns ``(x, residual_norm)`` with ``x`` as a column.
    """
    a = as_matrix(a, name="a")
    rhs = as_matrix(rhs, name="rhs")
    if rhs.shape[0] != a.shape[0]:
        raise DimensionError(f"rhs has {rhs.shape[0]} rows, matrix has {a.shape[0]}")
    if a.size == 0:
        x = np.zeros((a.shape[1], rhs.shape[1]))
    else:
        u, sv, vt = np.linalg.svd(a, full_matrices=False)
        keep = sv > _threshold(sv, tol_rel) if sv[0] > 0 else np.zeros_like(sv, dtype=bool)
        coeffs = (u[:, keep].T @ rhs) / sv[keep, None]
        x = vt[keep].T @ coeffs
    residual = float(np.linalg.norm(a @ x - rhs))
    return x, residual


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending coefficients; ``()`` is the zero polynomial."""

    coeffs: tuple = ()

    def __post_init__(self):
        c = [float(v) for v in self.coeffs]
        if not all(np.isfinite(c)):
            raise NonFiniteError("polynomial coefficient is not finite")
        while c and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self):
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __call__(self, x):
        # Horner, works for complex and array arguments
        acc = 0.0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def max_abs_coeff(self):
        return max((abs(c) for c in self.coeffs), default=0.0)

    def trimmed(self, tol_rel):
        """Drop leading coefficients below ``tol_rel`` times the largest one."""
        scale = self.max_abs_coeff()
        c = list(self.coeffs)
        while c and abs(c[-1]) <= tol_rel * scale:
            c.pop()
        return Polynomial(tuple(c))

    def monic(self):
        if self.is_zero():
            raise DegeneratePolynomialError("zero polynomial has no leading coefficient")
        lead = self.coeffs[-1]
        return Polynomial(tuple(c / lead for c in self.coeffs))

    def substitute_square(self):
        """Return q with q(s) = p(s**2) by interleaving zeros."""
        out = []
        for c in self.coeffs:
            out.extend((c, 0.0))
        return Polynomial(tuple(out))


def poly_roots(p):
    """All roots of ``p`` with multiplicity, as companion-matrix eigenvalues."""
    if not isinstance(p, Polynomial):
        p = Polynomial(tuple(p))
    if p.degree < 1:
        raise DegeneratePolynomialError(f"cannot take roots of degree {p.degree} polynomial")
    c = np.array(p.monic().coeffs)
    deg = p.degree
    companion = np.zeros((deg, deg))
    companion[1:, :-1] = np.eye(deg - 1)
    companion[:, -1] = -c[:-1]
    return [complex(z) for z in np.linalg.eigvals(companion)]
