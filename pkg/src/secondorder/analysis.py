"""Observability and controllability tests for second-order systems.

The general matrices are built from the S/P/M tables without lifting to
first order. For ``A1 = 0`` or ``A0 = 0`` the Kalman stacks of the remaining
matrix give the reduced criteria.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, NoInputError, ParameterError
from .matcore import DEFAULT_RANK_TOL, as_matrix, determinant, rank
from .recurrences import m_sequence, sp_sequence


@dataclass(frozen=True)
class StructuralReport:
    name: str
    matrix: np.ndarray
    computed_rank: int
    required_rank: int
    tol_rel: float

    @property
    def verdict(self):
        return self.computed_rank == self.required_rank

    @property
    def determinant(self):
        """Determinant of the test matrix, or None when it is not square."""
        rows, cols = self.matrix.shape
        return determinant(self.matrix) if rows == cols and rows else None


def _report(name, matrix, required, tol_rel):
    return StructuralReport(name, matrix, rank(matrix, tol_rel), required, tol_rel)


def observability_matrix(sys, block_rows=None):
    """Stack ``[C 0]``, ``[0 C]``, then ``[C S[k], C P[k]]`` for k = 0, 1, ...

    The default of ``2n`` block rows gives the (2np) x 2n matrix whose full
    column rank decides observability.
    """
    if block_rows is None:
        block_rows = 2 * sys.n
    if block_rows < 2:
        raise ParameterError(f"block_rows must be at least 2, got {block_rows}")
    n, p, c = sys.n, sys.p, sys.c
    zero = np.zeros((p, n))
    rows = [np.hstack([c, zero]), np.hstack([zero, c])]
    if block_rows > 2:
        table = sp_sequence(sys.a0, sys.a1, block_rows - 3)
        rows.extend(np.hstack([c @ s, c @ pk]) for s, pk in zip(table.s, table.p))
    return np.vstack(rows)


def controllability_matrix(sys, blocks=None):
    """``[M0 M1 ... M[blocks-1]]``, n x (blocks * r); default ``blocks = n``."""
    if sys.r == 0:
        raise NoInputError("controllability needs at least one input (r = 0)")
    if blocks is None:
        blocks = sys.n
    if blocks < 1:
        raise ParameterError(f"blocks must be at least 1, got {blocks}")
    table = m_sequence(sys.a0, sys.a1, sys.b, blocks - 1)
    return np.hstack(table.m)


def is_observable(sys, tol_rel=DEFAULT_RANK_TOL, block_rows=None):
    o = observability_matrix(sys, block_rows)
    return _report("observability", o, 2 * sys.n, tol_rel)


def is_controllable(sys, tol_rel=DEFAULT_RANK_TOL, blocks=None):
    cm = controllability_matrix(sys, blocks)
    return _report("controllability", cm, sys.n, tol_rel)


def _square(a):
    a = as_matrix(a, name="a")
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"a must be square, got {a.shape}")
    return a


def kalman_observability_matrix(a, c, blocks=None):
    """Vertical stack of ``C A**k`` for k = 0..blocks-1 (default n)."""
    a = _square(a)
    n = a.shape[0]
    c = as_matrix(np.atleast_2d(c), cols=n, name="c")
    blocks = n if blocks is None else blocks
    out, term = [], c
    for _ in range(blocks):
        out.append(term)
        term = term @ a
    return np.vstack(out)


def kalman_controllability_matrix(a, b, blocks=None):
    """Horizontal concatenation of ``A**k B`` for k = 0..blocks-1 (default n)."""
    a = _square(a)
    n = a.shape[0]
    b = as_matrix(b, rows=n, name="b")
    blocks = n if blocks is None else blocks
    out, term = [], b
    for _ in range(blocks):
        out.append(term)
        term = a @ term
    return np.hstack(out)


@dataclass(frozen=True)
class SpecialCaseReport:
    """Reduced Kalman tests that apply when A1 = 0 or A0 = 0.

    ``case`` is ``"a1_zero"``, ``"a0_zero"``, ``"both_zero"`` or ``None``.
    """

    case: object
    observability: list = field(default_factory=list)
    controllability: list = field(default_factory=list)

    @property
    def applies(self):
        return self.case is not None


def analyze_special_cases(sys, tol_rel=DEFAULT_RANK_TOL):
    a1_zero = not np.any(sys.a1)
    a0_zero = not np.any(sys.a0)
    if not (a1_zero or a0_zero):
        return SpecialCaseReport(None)
    case = "both_zero" if a1_zero and a0_zero else ("a1_zero" if a1_zero else "a0_zero")
    obs, ctrl = [], []
    # with both zero, either reduction applies; A0 is tested first
    reductions = []
    if a1_zero:
        reductions.append(("a0", sys.a0))
    if a0_zero:
        reductions.append(("a1", sys.a1))
    for label, a in reductions:
        ko = kalman_observability_matrix(a, sys.c)
        obs.append(_report(f"kalman_observability({label}, c)", ko, sys.n, tol_rel))
        if sys.r:
            kc = kalman_controllability_matrix(a, sys.b)
            ctrl.append(_report(f"kalman_controllability({label}, b)", kc, sys.n, tol_rel))
    return SpecialCaseReport(case, obs, ctrl)
