"""Second-order system data model, JSON interchange format and duality."""

import enum
import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NonFiniteError, ParseError
from .matcore import as_vector


class Kind(str, enum.Enum):
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


_KEYS = ("kind", "n", "r", "p", "a0", "a1", "b", "c")


def _array(data, rows, cols):
    m = np.array(data, dtype=float)
    if m.size == 0 and isinstance(rows, int) and isinstance(cols, int) and rows * cols == 0:
        m = m.reshape(max(rows, 0), max(cols, 0))
    return m


@dataclass(frozen=True, eq=False)
class SecondOrderSystem:
    """``x'' = a0 x + a1 x' + b u, y = c x`` (or its discrete analogue
    ``x[t+2] = a0 x[t] + a1 x[t+1] + b u[t]``).

    The constructor only coerces the matrices to float arrays; use
    :meth:`from_matrices` or :func:`load_system` to get a checked instance,
    or :func:`validate` to list what is wrong with an unchecked one.
    """

    kind: Kind
    n: int
    r: int
    p: int
    a0: np.ndarray
    a1: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "a0", _array(self.a0, self.n, self.n))
        object.__setattr__(self, "a1", _array(self.a1, self.n, self.n))
        object.__setattr__(self, "b", _array(self.b, self.n, self.r))
        object.__setattr__(self, "c", _array(self.c, self.p, self.n))

    @classmethod
    def from_matrices(cls, a0, a1, b, c, kind=Kind.CONTINUOUS):
        """Build a system inferring (n, r, p) from the matrix shapes."""
        a0 = np.array(a0, dtype=float)
        c = np.atleast_2d(np.array(c, dtype=float))
        n = a0.shape[0]
        b = np.array(b, dtype=float)
        if b.ndim == 1:
            b = b.reshape(n, -1)
        sys = cls(kind, n, b.shape[1], c.shape[0], a0, a1, b, c)
        return sys.checked()

    def checked(self):
        problems = validate(self)
        if problems:
            exc = NonFiniteError if all("non-finite" in p for p in problems) else DimensionError
            raise exc("; ".join(problems))
        return self

    def __eq__(self, other):
        if not isinstance(other, SecondOrderSystem):
            return NotImplemented
        return (
            self.kind == other.kind
            and (self.n, self.r, self.p) == (other.n, other.r, other.p)
            and all(
                np.array_equal(getattr(self, f), getattr(other, f)) for f in ("a0", "a1", "b", "c")
            )
        )

    def __hash__(self):
        return hash((self.kind, self.n, self.r, self.p, self.a0.tobytes(), self.a1.tobytes()))


@dataclass(frozen=True)
class StateSnapshot:
    """Initial pair (x0, x1): positions at t = 0, 1, or x(0), x'(0)."""

    x0: np.ndarray
    x1: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x0", as_vector(self.x0, name="x0"))
        object.__setattr__(self, "x1", as_vector(self.x1, size=self.x0.size, name="x1"))

    def stacked(self):
        return np.concatenate([self.x0, self.x1])


def validate(sys):
    """Return a list of invariant violations; empty when ``sys`` is valid."""
    problems = []
    for field, value in (("n", sys.n), ("p", sys.p)):
        if not isinstance(value, (int, np.integer)) or value < 1:
            problems.append(f"{field}: must be a positive integer, got {value!r}")
    if not isinstance(sys.r, (int, np.integer)) or sys.r < 0:
        problems.append(f"r: must be a nonnegative integer, got {sys.r!r}")
    if problems:
        return problems
    expected = {
        "a0": (sys.n, sys.n),
        "a1": (sys.n, sys.n),
        "b": (sys.n, sys.r),
        "c": (sys.p, sys.n),
    }
    for field, shape in expected.items():
        m = getattr(sys, field)
        if m.shape != shape:
            problems.append(f"{field}: expected shape {shape}, got {m.shape}")
        elif not np.all(np.isfinite(m)):
            problems.append(f"{field}: non-finite entry")
    return problems


def dual_system(sys):
    """Dual system ``x'' = a0^T x - a1^T x' + c^T u, y = b^T x``.

    Dimensions become (n, p, r); kind is kept. Applying it twice returns the
    original system exactly.
    """
    return SecondOrderSystem(
        sys.kind, sys.n, sys.p, sys.r, sys.a0.T.copy(), -sys.a1.T, sys.c.T.copy(), sys.b.T.copy()
    )


def _number(v):
    v = float(v)
    return int(v) if v.is_integer() and abs(v) < 2**53 else v


def _nested(m):
    return [[_number(v) for v in row] for row in m]


def system_to_dict(sys):
    return {
        "kind": sys.kind.value,
        "n": sys.n,
        "r": sys.r,
        "p": sys.p,
        "a0": _nested(sys.a0),
        "a1": _nested(sys.a1),
        "b": _nested(sys.b),
        "c": _nested(sys.c),
    }


def dump_system(sys):
    """Canonical JSON rendering, newline-terminated."""
    return json.dumps(system_to_dict(sys), indent=2) + "\n"


def _reject_constant(token):
    raise ParseError(f"non-finite number {token!r} not allowed")


def system_from_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("system document must be a JSON object")
    unknown = sorted(set(doc) - set(_KEYS))
    if unknown:
        raise ParseError(f"unknown keys: {', '.join(unknown)}")
    missing = [k for k in _KEYS if k not in doc]
    if missing:
        raise ParseError(f"missing keys: {', '.join(missing)}")
    try:
        kind = Kind(doc["kind"])
    except ValueError:
        raise ParseError(f"kind: expected 'discrete' or 'continuous', got {doc['kind']!r}") from None
    dims = {}
    for key in ("n", "r", "p"):
        value = doc[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"{key}: expected an integer, got {value!r}")
        dims[key] = value
    mats = {}
    for key in ("a0", "a1", "b", "c"):
        value = doc[key]
        if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
            raise ParseError(f"{key}: expected a nested array of rows")
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for row in value for v in row):
            raise ParseError(f"{key}: entries must be numbers")
        if len({len(row) for row in value}) > 1:
            raise DimensionError(f"{key}: ragged rows")
        mats[key] = value
    sys = SecondOrderSystem(kind, dims["n"], dims["r"], dims["p"], **mats)
    return sys.checked()


def load_system(text):
    """Parse and validate a system document (see :func:`dump_system`)."""
    if hasattr(text, "read"):
        text = text.read()
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    return system_from_dict(doc)
