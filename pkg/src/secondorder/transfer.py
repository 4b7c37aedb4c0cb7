"""Transfer matrices of second-order systems as exact polynomial ratios.

``H(s) = C (s^2 I - A0)^-1 B`` for ``A1 = 0``, and through the first-order
lift ``[C 0] (s I - A~)^-1 B~`` in general. The inverse is represented as
``adj(lambda I - A) / det(lambda I - A)`` with both parts computed by the
Faddeev-LeVerrier recursion.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    NoInputError,
    PoleEvaluationError,
    UnsupportedFormError,
    ZeroTransferError,
)
from .matcore import Polynomial, as_matrix, poly_roots
from .recurrences import companion_lift

# coefficients this far below the largest one are treated as rounding noise
# when locating roots
ROOT_TRIM_TOL = 1e-12


@dataclass(frozen=True)
class ResolventPoly:
    """``adj(lambda I - A) = sum_k adjugate_coeffs[k] lambda**k`` and the
    monic characteristic polynomial ``det(lambda I - A)``."""

    adjugate_coeffs: tuple
    charpoly: Polynomial

    def adjugate(self, lam):
        acc = np.zeros_like(self.adjugate_coeffs[0], dtype=complex if np.iscomplexobj(lam) else float)
        for coeff in reversed(self.adjugate_coeffs):
            acc = acc * lam + coeff
        return acc


def resolvent_poly(a):
    """Faddeev-LeVerrier: for k = 1..n,
    ``M_k = A M_{k-1} + c_{n-k+1} I`` and ``c_{n-k} = -tr(A M_k) / k``,
    so that ``adj(lambda I - A) = sum_k M_k lambda**(n-k)``.
    """
    a = as_matrix(a, name="a")
    n = a.shape[0]
    if a.shape != (n, n):
        raise UnsupportedFormError(f"resolvent of non-square {a.shape} matrix")
    eye = np.eye(n)
    c = [0.0] * (n + 1)
    c[n] = 1.0
    mats = []
    m_prev = np.zeros((n, n))
    for k in range(1, n + 1):
        m_k = a @ m_prev + c[n - k + 1] * eye
        c[n - k] = -np.trace(a @ m_k) / k
        mats.append(m_k)
        m_prev = m_k
    # mats[k-1] multiplies lambda**(n-k)
    return ResolventPoly(tuple(reversed(mats)), Polynomial(tuple(c)))


@dataclass(frozen=True)
class RationalTransferMatrix:
    """p x r polynomial numerators over one monic denominator, unreduced.

    ``method`` records how it was built (``"second_order"`` or ``"lift"``).
    """

    numerators: tuple
    denominator: Polynomial
    method: str = "second_order"

    @property
    def shape(self):
        return len(self.numerators), len(self.numerators[0]) if self.numerators else 0

    def is_siso(self):
        return self.shape == (1, 1)


def _numerators(c, adj_coeffs, b, transform=None):
    entry_coeffs = [c @ n_k @ b for n_k in adj_coeffs]
    rows, cols = entry_coeffs[0].shape
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            poly = Polynomial(tuple(e[i, j] for e in entry_coeffs))
            row.append(transform(poly) if transform else poly)
        out.append(tuple(row))
    return tuple(out)


def transfer_function(sys):
    """``C adj(s^2 I - A0) B / det(s^2 I - A0)``; requires ``A1 = 0``."""
    if np.any(sys.a1):
        raise UnsupportedFormError(
            "transfer_function needs a1 = 0; use transfer_function_general for damped systems"
        )
    if sys.r == 0:
        raise NoInputError("transfer function needs at least one input (r = 0)")
    res = resolvent_poly(sys.a0)
    nums = _numerators(sys.c, res.adjugate_coeffs, sys.b, Polynomial.substitute_square)
    return RationalTransferMatrix(nums, res.charpoly.substitute_square(), "second_order")


def transfer_function_general(sys):
    """Transfer matrix through the 2n-dimensional first-order lift."""
    if sys.r == 0:
        raise NoInputError("transfer function needs at least one input (r = 0)")
    a_tilde, b_tilde, c_tilde = companion_lift(sys)
    res = resolvent_poly(a_tilde)
    return RationalTransferMatrix(
        _numerators(c_tilde, res.adjugate_coeffs, b_tilde), res.charpoly, "lift"
    )


def evaluate(h, s):
    """Entrywise value of ``h`` at complex ``s``."""
    den = h.denominator(complex(s))
    if abs(den) <= 1e-12 * h.denominator.max_abs_coeff():
        raise PoleEvaluationError(f"s = {s} is at (or numerically on) a pole")
    return np.array([[num(complex(s)) / den for num in row] for row in h.numerators], dtype=complex)


def _require_siso(h):
    if not h.is_siso():
        raise UnsupportedFormError(f"poles/zeros are only defined here for SISO, got {h.shape}")


def poles_zeros(h):
    """Roots of denominator and numerator, with multiplicity, no cancellation."""
    _require_siso(h)
    num = h.numerators[0][0].trimmed(ROOT_TRIM_TOL)
    if num.is_zero():
        raise ZeroTransferError("transfer function is identically zero")
    poles = poly_roots(h.denominator.trimmed(ROOT_TRIM_TOL))
    zeros = poly_roots(num) if num.degree >= 1 else []
    return poles, zeros


def cancellation_check(h, tol=1e-8):
    """Pair poles with zeros closer than ``tol * (1 + |pole|)``.

    Candidate pairs are matched greedily, nearest first; each root is used
    at most once. An empty list means no pole-zero cancellation.
    """
    poles, zeros = poles_zeros(h)
    candidates = sorted(
        (abs(pole - zero), i, j) for i, pole in enumerate(poles) for j, zero in enumerate(zeros)
    )
    used_p, used_z, pairs = set(), set(), []
    for dist, i, j in candidates:
        if i in used_p or j in used_z or dist >= tol * (1 + abs(poles[i])):
            continue
        used_p.add(i)
        used_z.add(j)
        pairs.append((poles[i], zeros[j]))
    return pairs


def _format_coeff(c):
    rounded = round(c)
    if abs(c - rounded) <= 1e-9 * max(1.0, abs(c)):
        return str(int(rounded))
    return f"{c:.10g}"


def format_polynomial(poly, var="s", tol_rel=ROOT_TRIM_TOL):
    """Human-readable form, highest power first: ``7s^2 - 5``."""
    scale = poly.max_abs_coeff()
    terms = [
        (k, c) for k, c in reversed(list(enumerate(poly.coeffs))) if abs(c) > tol_rel * scale
    ]
    if not terms:
        return "0"
    out = []
    for idx, (k, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = _format_coeff(abs(c))
        power = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        body = mag + power if k == 0 or mag != "1" else power
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_rational(num, den, var="s"):
    def wrap(text):
        return f"({text})" if (" + " in text or " - " in text) else text

    return f"{wrap(format_polynomial(num, var))}/{wrap(format_polynomial(den, var))}"
