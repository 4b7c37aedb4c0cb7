"""Discrete simulation, initial-state reconstruction and steering inputs."""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .analysis import controllability_matrix, observability_matrix
from .errors import (
    DimensionError,
    InconsistentDataError,
    KindMismatchError,
    NoInputError,
    ParameterError,
    UnobservableError,
    UncontrollableTargetError,
)
from .matcore import DEFAULT_RANK_TOL, as_vector, rank, solve_min_norm
from .recurrences import m_sequence, sp_sequence
from .sysmodel import Kind, StateSnapshot

# residual threshold, relative to 1 + |rhs|
DEFAULT_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class Trajectory:
    """States x[0..T], outputs y[0..T] and inputs u[0..T-2] as 2-D arrays
    with one time step per row."""

    states: np.ndarray
    outputs: np.ndarray
    inputs: np.ndarray

    @property
    def steps(self):
        return self.states.shape[0] - 1


def _samples(data, count, width, name, at_least=False):
    if width == 0:
        return np.zeros((count, 0))
    arr = np.array(data if data is not None else [], dtype=float)
    if arr.size == 0:
        arr = arr.reshape(0, width)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, width) if width > 1 else arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] != width:
        raise DimensionError(f"{name}: expected rows of length {width}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name}: non-finite entry")
    if arr.shape[0] < count or (not at_least and arr.shape[0] != count):
        need = f"at least {count}" if at_least else f"exactly {count}"
        raise DimensionError(f"{name}: need {need} samples, got {arr.shape[0]}")
    return arr[:count]


def simulate_discrete(sys, snap, inputs, steps):
    """Run ``x[t+2] = A0 x[t] + A1 x[t+1] + B u[t]`` up to ``x[steps]``."""
    if sys.kind is not Kind.DISCRETE:
        raise KindMismatchError("simulate_discrete needs a discrete-kind system")
    if steps < 1:
        raise ParameterError(f"steps must be at least 1, got {steps}")
    if not isinstance(snap, StateSnapshot):
        snap = StateSnapshot(*snap)
    if snap.x0.size != sys.n:
        raise DimensionError(f"initial state has length {snap.x0.size}, system has n = {sys.n}")
    u = _samples(inputs, max(steps - 1, 0), sys.r, "inputs", at_least=True)
    x = np.empty((steps + 1, sys.n))
    x[0], x[1] = snap.x0, snap.x1
    for t in range(steps - 1):
        x[t + 2] = sys.a0 @ x[t] + sys.a1 @ x[t + 1] + sys.b @ u[t]
    y = x @ sys.c.T
    return Trajectory(x, y, u)


def measurement_stack(sys, outputs, inputs=None):
    """Left-hand column of ``O @ (x0; x1) = z``.

    ``z[0] = y[0]``, ``z[1] = y[1]`` and
    ``z[k] = y[k] - C sum_{j<=k-2} M[k-2-j] u[j]`` for 2 <= k < 2n.
    For continuous systems pass output derivatives y(0), y'(0), ... and
    input derivatives u(0), u'(0), ... instead of samples.
    """
    horizon = 2 * sys.n
    y = _samples(outputs, horizon, sys.p, "outputs")
    u = _samples(inputs, max(horizon - 2, 0), sys.r, "inputs", at_least=True)
    z = y.copy()
    if sys.r and horizon > 2:
        m = m_sequence(sys.a0, sys.a1, sys.b, horizon - 3).m
        for k in range(2, horizon):
            forced = sum(m[k - 2 - j] @ u[j] for j in range(k - 1))
            z[k] -= sys.c @ forced
    return z.reshape(-1)


def reconstruct_initial_state(
    sys, outputs, inputs=None, tol_rel=DEFAULT_RANK_TOL, residual_tol=DEFAULT_RESIDUAL_TOL
):
    """Recover (x0, x1) from 2n output samples (or derivatives).

    Returns ``(snapshot, residual_norm)``. Raises :class:`UnobservableError`
    if the observability matrix is rank deficient and
    :class:`InconsistentDataError` if the data admit no exact solution.
    """
    o = observability_matrix(sys)
    computed = rank(o, tol_rel)
    if computed < 2 * sys.n:
        raise UnobservableError("observability matrix is rank deficient", computed, 2 * sys.n)
    z = measurement_stack(sys, outputs, inputs)
    sol, residual = solve_min_norm(o, z.reshape(-1, 1), tol_rel)
    if residual > residual_tol * (1.0 + np.linalg.norm(z)):
        raise InconsistentDataError("measurements are inconsistent with the model", residual)
    sol = sol.reshape(-1)
    return StateSnapshot(sol[: sys.n], sol[sys.n :]), residual


def synthesize_control(
    sys, snap, x_f, tol_rel=DEFAULT_RANK_TOL, residual_tol=DEFAULT_RESIDUAL_TOL
):
    """Minimum-norm inputs u[0..n-1] that drive the position to ``x[n+1] = x_f``.

    Returns an (n, r) array in forward time order.
    """
    if sys.kind is not Kind.DISCRETE:
        raise KindMismatchError("synthesize_control needs a discrete-kind system")
    if sys.r == 0:
        raise NoInputError("steering needs at least one input (r = 0)")
    if not isinstance(snap, StateSnapshot):
        snap = StateSnapshot(*snap)
    n = sys.n
    x_f = as_vector(x_f, size=n, name="x_f")
    table = sp_sequence(sys.a0, sys.a1, n - 1)
    d = x_f - table.s[n - 1] @ snap.x0 - table.p[n - 1] @ snap.x1
    cm = controllability_matrix(sys)
    sol, residual = solve_min_norm(cm, d.reshape(-1, 1), tol_rel)
    if residual > residual_tol * (1.0 + np.linalg.norm(d)):
        raise UncontrollableTargetError("target is not reachable in n + 1 steps", residual)
    # solution is stacked (u[n-1]; ...; u[0])
    return sol.reshape(n, sys.r)[::-1].copy()


def read_csv(text, width=None):
    """Parse a sequence CSV: one time step per row, optional '#' header."""
    if hasattr(text, "read"):
        text = text.read()
    rows = []
    for line_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or (row[0].lstrip().startswith("#")):
            continue
        try:
            rows.append([float(v) for v in row])
        except ValueError:
            raise DimensionError(f"line {line_no}: non-numeric entry") from None
    if len({len(r) for r in rows}) > 1:
        raise DimensionError("ragged CSV rows")
    arr = np.array(rows, dtype=float).reshape(len(rows), -1 if rows else (width or 0))
    if width is not None and rows and arr.shape[1] != width:
        raise DimensionError(f"expected {width} columns, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("non-finite CSV entry")
    return arr


def write_csv(rows, header=None):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        buf.write("# " + ",".join(header) + "\n")
    for row in np.atleast_2d(rows):
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def trajectory_to_csv(traj):
    """One row per time step: state components followed by output components."""
    n, p = traj.states.shape[1], traj.outputs.shape[1]
    header = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(p)]
    return write_csv(np.hstack([traj.states, traj.outputs]), header)
