"""Exact solvers for vector and type partition problems."""

from .bruteforce import brute_force_solve, count_admissible
from .dp_general import solve_dp_general, solve_dp_general_type
from .dp_separable import reduce_vector_to_type, solve_dp_separable, solve_dp_separable_type, solve_dp_separable_vector
from .errors import (
    BudgetExceeded,
    FormatError,
    InstanceError,
    OracleDomainError,
    SolverNotApplicable,
    TimeLimitExceeded,
    VecPartError,
)
from .flow import solve_flow_type
from .model import Infeasible, Solution, TypeInstance, VectorInstance, partition_cost, validate_instance
from .objectives import (
    Abs,
    Composite,
    CompletelySeparable,
    General,
    Linear,
    MatrixTable,
    MaxColumnL1,
    ProductColumns,
    Quadratic,
    ScaledQuadratic,
    Separable,
    Table,
    VectorTable,
)
from .shapes import Free, Interval, Sets, Single
from .solvers import solve

__version__ = "0.1.0"
