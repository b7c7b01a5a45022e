"""Energy-based discontinuous Galerkin solver for the nonlinear Schrodinger
equation with wave operator, with RK4 time stepping, conservative and
dissipative interface fluxes, energy diagnostics, and a convergence harness.
"""

from .basis import BasisSpec, QuadratureRule, gauss_rule, legendre_eval, make_basis, reference_matrices
from .diagnostics import (
    COMPONENTS,
    EnergyRecord,
    ErrorRecord,
    discrete_energy,
    fit_convergence_rate,
    l2_error,
    semidiscrete_energy_rate,
)
from .errors import BlowUpError, LocalSolveError, NonFiniteValueError, NumericalFailure
from .mesh import Face, Mesh, cartesian_mesh_2d, uniform_mesh_1d
from .problem import (
    Nonlinearity,
    ProblemSpec,
    ScenarioPreset,
    eval_nonlinearity,
    make_nonlinearity,
    make_scenario,
    project_initial,
)
from .scheme import (
    FluxParams,
    SpatialOperator,
    State,
    StateDerivative,
    flux_from_name,
    semidiscrete_rhs,
)
from .study import ConvergenceResult, RunSetup, build_mesh, convergence_study, single_run
from .timestep import RunConfig, RunResult, RunSinks, dt_from_mesh, rk4_step, run_simulation

__version__ = "0.1.0"
