"""Coefficient tables for propagating a second-order recursion.

Iterating ``x[t+2] = A0 x[t] + A1 x[t+1] + B u[t]`` from (x0, x1) gives

    x[k+2] = S[k] x0 + P[k] x1 + sum_j M[k-j] u[j]

with ``S[0] = A0``, ``P[0] = A1``, ``S[k] = P[k-1] A0``,
``P[k] = S[k-1] + P[k-1] A1`` and ``M[0] = B``, ``M[1] = A1 B``,
``M[k] = A0 M[k-2] + A1 M[k-1]``. The same tables serve the derivative chain
of the continuous system.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .matcore import as_matrix


@dataclass(frozen=True)
class SPTable:
    """Coefficients of x0 (``s``) and x1 (``p``), index 0..k_max."""

    s: tuple
    p: tuple

    @property
    def k_max(self):
        return len(self.s) - 1


@dataclass(frozen=True)
class MTable:
    """Input propagation matrices ``m[0..k_max]``, each n x r."""

    m: tuple

    @property
    def k_max(self):
        return len(self.m) - 1


def _check_pair(a0, a1):
    a0 = as_matrix(a0, name="a0")
    n = a0.shape[0]
    if a0.shape != (n, n):
        raise DimensionError(f"a0 must be square, got {a0.shape}")
    a1 = as_matrix(a1, n, n, name="a1")
    return a0, a1


def _check_limit(k_max):
    if int(k_max) != k_max or k_max < 0:
        raise ParameterError(f"k_max must be a nonnegative integer, got {k_max!r}")
    return int(k_max)


def sp_sequence(a0, a1, k_max):
    a0, a1 = _check_pair(a0, a1)
    k_max = _check_limit(k_max)
    s, p = [a0.copy()], [a1.copy()]
    for _ in range(k_max):
        s_prev, p_prev = s[-1], p[-1]
        s.append(p_prev @ a0)
        p.append(s_prev + p_prev @ a1)
    return SPTable(tuple(s), tuple(p))


def m_sequence(a0, a1, b, k_max):
    a0, a1 = _check_pair(a0, a1)
    b = as_matrix(b, rows=a0.shape[0], name="b") if np.size(b) else np.zeros((a0.shape[0], 0))
    k_max = _check_limit(k_max)
    m = [b.copy()]
    if k_max >= 1:
        m.append(a1 @ b)
    for _ in range(2, k_max + 1):
        m.append(a0 @ m[-2] + a1 @ m[-1])
    return MTable(tuple(m))


def companion_lift(sys):
    """First-order lift ``v = (x, x')``: returns ``(a_tilde, b_tilde, c_tilde)``.

    ``a_tilde = [[0, I], [A0, A1]]``, ``b_tilde = [[0], [B]]``,
    ``c_tilde = [C, 0]``. Powers of ``a_tilde`` hold the S/P tables:
    ``a_tilde**k == [[S[k-2], P[k-2]], [S[k-1], P[k-1]]]`` for k >= 2.
    """
    n, r, p = sys.n, sys.r, sys.p
    a_tilde = np.block([[np.zeros((n, n)), np.eye(n)], [sys.a0, sys.a1]])
    b_tilde = np.vstack([np.zeros((n, r)), sys.b])
    c_tilde = np.hstack([sys.c, np.zeros((p, n))])
    return a_tilde, b_tilde, c_tilde
