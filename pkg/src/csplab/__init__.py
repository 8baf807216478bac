"""csplab: a workbench for random constraint satisfaction problems.

Random k-SAT / k-NAE / k-coloring instances, complete oracles, local
solvers (UnitClause, greedy coloring, marginal-guided decimation), moment
bounds, and solution-space geometry, plus a reproducible experiment harness.
"""

from .core import (Assignment, ConfigurationError, ConstraintModel,
                   GeneratorConfig, Instance, ParseError, ProblemKind, Status,
                   complement, constraint_status, evaluate, gen_instance,
                   hamming, parse_dimacs, write_dimacs)
from .exact import (DecideResult, DecideStatus, SolutionSet, count_solutions,
                    decide, enumerate_solutions, write_solutions)
from .factor import (FactorGraph, SubInstance, as_subinstance, build, girth,
                     is_tree, neighborhood, tree_radius)
from .geometry import (ClusterReport, FrozenProfile, cluster_separation,
                       freezing_profile, frozen_variables, geometry_report,
                       solution_components)
from .harness import (ExperimentConfig, GeometryConfig, SweepRow,
                      ThresholdResult, geometry_experiment, mix_seed,
                      monotonicity_flags, splitmix64, sweep, threshold_bisect,
                      wilson_interval)
from .moments import (MomentReport, algorithmic_density, expected_count,
                      first_moment_density_bound, log_expected_count,
                      log_nae_second_moment, moment_report, nae_pair_prob,
                      nae_second_moment, paley_zygmund_bound)
from .solvers import (CapacityError, InconsistentError, Marginal,
                      MarginalQuery, SolverOutcome, SolverTrace,
                      bp_decimation, bp_marginal, exact_marginal,
                      greedy_color, unit_clause_solve)

__version__ = "0.1.0"
