"""Assortment optimization under a single-transition Markov chain choice
model: evaluators, instance generators, polynomial-time and exact solvers,
and a benchmark harness."""

from .core import (
    FEAS_TOL,
    VALUE_TOL,
    Evaluation,
    Instance,
    SolveResult,
    SolverStats,
    ValidationReport,
    as_assortment,
    best_recommendation,
    canonical_form,
    choosy_revenue,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    markov_evaluate,
    mcst_evaluate,
    mcst_revenue,
    mcst_value,
    permute_members,
    save_instance,
    validate_instance,
)
from .exact import (
    MipModel,
    brute_force_choosy,
    brute_force_markov,
    brute_force_mcst,
    build_mip,
    solve_choosy_exact,
    solve_markov_optimal,
    solve_mcst_exact,
)
from .generators import (
    GenSpec,
    Graph,
    ReductionResult,
    gen_homogeneous,
    gen_random,
    gen_tight_family,
    gen_tree,
    load_graph,
    reduce_independent_set,
    save_graph,
)
from .poly_solvers import (
    RoCertificate,
    best_revenue_ordered,
    solve_homogeneous,
    solve_tree_dp,
)

__version__ = "0.1.0"
