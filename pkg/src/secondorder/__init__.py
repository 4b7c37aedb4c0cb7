"""Kalman-type observability and controllability analysis of second-order
linear time-invariant systems, carried out in second-order form."""

__version__ = "0.1.0"

from .analysis import (
    StructuralReport,
    analyze_special_cases,
    controllability_matrix,
    is_controllable,
    is_observable,
    kalman_controllability_matrix,
    kalman_observability_matrix,
    observability_matrix,
)
from .matcore import Polynomial, determinant, poly_roots, rank, solve_min_norm
from .recurrences import MTable, SPTable, companion_lift, m_sequence, sp_sequence
from .sysmodel import (
    Kind,
    SecondOrderSystem,
    StateSnapshot,
    dual_system,
    dump_system,
    load_system,
    validate,
)
from .trajectory import (
    Trajectory,
    measurement_stack,
    reconstruct_initial_state,
    simulate_discrete,
    synthesize_control,
)
from .transfer import (
    RationalTransferMatrix,
    ResolventPoly,
    cancellation_check,
    evaluate,
    poles_zeros,
    resolvent_poly,
    transfer_function,
    transfer_function_general,
)
