# graph.py
import logging
import math
from pathlib import Path

from pydantic import BaseModel, Field
from langgraph.graph import StateGraph, START, END
from langchain_core.runnables import RunnableConfig

# local imports
from sobolev_anderson.anderson import (
    AAConfig,
    ConvergenceRecord,
    FixedPointProblem,
    RunStatus,
    aa_run,
    default_weight,
    one_step_curve,
    picard_run,
)
from sobolev_anderson.krylov import AffineSystem, gmres_restarted
from sobolev_anderson.problems import build_problem
from sobolev_anderson.theory import BoundReport, SpectrumSpec, inverse_square_sigma, verify_one_step_bound
from .config import EXIT_ERROR, EXIT_NOT_CONVERGED, EXIT_OK
from .results import bound_summary, summary_line, write_record_csv, write_reports_csv
from .spec import RunSpec, SolverSpec

logger = logging.getLogger(__name__)


# Define the Experiment State
class ExperimentState(BaseModel):
    """Pydantic model for LangGraph - Experiment Runner"""

    # Input
    spec: RunSpec

    # Solver results
    records: list[ConvergenceRecord] = Field(default_factory=list)
    reports: list[BoundReport] = Field(default_factory=list)

    # Output
    csv_paths: list[str] = Field(default_factory=list)
    summary: list[str] = Field(default_factory=list)
    exit_code: int = EXIT_OK
    error_message: str | None = None


# Define the Nodes

def validate_spec(state: ExperimentState, config: RunnableConfig) -> ExperimentState:
    """
    Check that the run has something to do before any solver starts.
    """
    spec = state.spec
    if spec.subcommand == "theory-bound":
        if spec.theory is None:
            state.error_message = "theory-bound needs interval and memory parameters"
    elif not spec.solvers:
        state.error_message = "at least one solver is required"
    elif spec.problem_name not in ("poisson", "nlh", "waveholtz1d", "waveholtz2d"):
        state.error_message = f"unknown problem '{spec.problem_name}'"
    elif spec.problem_name == "nlh" and any(s.kind in ("gmres", "one-step") for s in spec.solvers):
        state.error_message = "gmres and one-step curves need an affine problem; nlh is nonlinear"
    return state


def _solve(problem: FixedPointProblem, solver: SolverSpec, spec: RunSpec, x0, x_star) -> ConvergenceRecord:
    wop = default_weight(problem, solver.norm)
    if solver.kind == "picard":
        record, _ = picard_run(problem, x0, spec.max_iters, tol=spec.tol, wop=wop, x_star=x_star, label=solver.label)
    elif solver.kind == "aa":
        aa_config = AAConfig(m=solver.m, beta=solver.beta, norm=solver.norm, tol=spec.tol, max_iters=spec.max_iters)
        record, _ = aa_run(problem, aa_config, x0, wop=wop, x_star=x_star, label=solver.label)
    elif solver.kind == "gmres":
        system = AffineSystem.from_problem(problem)
        record, _ = gmres_restarted(
            system,
            x0,
            restart=solver.m,
            tol=spec.tol,
            max_outer=max(1, math.ceil(spec.max_iters / solver.m)),
            max_iters=spec.max_iters,
            wop=wop,
            x_star=x_star,
            label=solver.label,
        )
    else:
        record = one_step_curve(
            problem, x0, solver.m, wop, max(solver.m, spec.one_step or spec.max_iters),
            x_star=x_star, tol=spec.tol, label=solver.label,
        )
    return record


def run_solvers(state: ExperimentState, config: RunnableConfig) -> ExperimentState:
    """
    Build the problem once and run every requested solver on it, in order.
    """
    spec = state.spec
    try:
        problem = build_problem(spec.problem_name, **spec.problem_params)
        x0 = problem.initial_guess()
        x_star = None
        if problem.is_linear and (spec.problem_name != "waveholtz2d" or spec.with_reference):
            x_star = problem.exact_solution()
        for solver in spec.solvers:
            logger.info("Running %s on %s", solver.label, problem.name)
            state.records.append(_solve(problem, solver, spec, x0, x_star))
    except Exception as e:
        state.error_message = f"Error while running solvers: {str(e)}"
    return state


def run_theory_bound(state: ExperimentState, config: RunnableConfig) -> ExperimentState:
    """
    Verify the one-step Chebyshev bound on seeded synthetic spectra.
    """
    theory = state.spec.theory
    try:
        spectrum = SpectrumSpec(
            n=theory.n, a=theory.a, b=theory.b, placement=theory.placement, seed=state.spec.seed
        )
        sigma = inverse_square_sigma(theory.n) if theory.sigma == "inverse-square" else None
        k = theory.k if theory.k is not None else theory.m
        state.reports = verify_one_step_bound(spectrum, k, theory.m, theory.trials, sigma)
    except Exception as e:
        state.error_message = f"Error while verifying the bound: {str(e)}"
    return state


def write_results(state: ExperimentState, config: RunnableConfig) -> ExperimentState:
    """
    One CSV per solver, or one CSV of trials for theory-bound.
    """
    spec = state.spec
    output = Path(spec.output)
    try:
        if spec.subcommand == "theory-bound":
            path = write_reports_csv(state.reports, output / "theory-bound_trials.csv")
            state.csv_paths.append(str(path))
        for record in state.records:
            path = write_record_csv(record, output / f"{spec.subcommand}_{record.label}.csv")
            state.csv_paths.append(str(path))
    except OSError as e:
        state.error_message = f"Error writing results: {str(e)}"
    return state


def summarize(state: ExperimentState, config: RunnableConfig) -> ExperimentState:
    """
    Summary lines and the process exit code.
    """
    if state.spec.subcommand == "theory-bound":
        state.summary.append(bound_summary(state.reports))
        all_ok = all(report.passed for report in state.reports)
    else:
        state.summary.extend(summary_line(record) for record in state.records)
        all_ok = all(record.status == RunStatus.CONVERGED for record in state.records)
    state.exit_code = EXIT_OK if all_ok else EXIT_NOT_CONVERGED
    return state


# Conditional routing functions

def route_after_validation(state: ExperimentState) -> str:
    """
    Stop on invalid specs, otherwise pick the workflow for the subcommand
    """
    if state.error_message:
        return END
    if state.spec.subcommand == "theory-bound":
        return "run_theory_bound"
    return "run_solvers"


def route_on_error(next_node: str):
    def route(state: ExperimentState) -> str:
        return END if state.error_message else next_node

    return route


# Build the graph
builder = StateGraph(ExperimentState)

# Add nodes
builder.add_node("validate_spec", validate_spec)
builder.add_node("run_solvers", run_solvers)
builder.add_node("run_theory_bound", run_theory_bound)
builder.add_node("write_results", write_results)
builder.add_node("summarize", summarize)

# Add edges
builder.add_edge(START, "validate_spec")

# Route by subcommand
builder.add_conditional_edges(
    "validate_spec",
    route_after_validation,
    {
        "run_solvers": "run_solvers",
        "run_theory_bound": "run_theory_bound",
        END: END
    }
)

# Any failure ends the run
for node in ("run_solvers", "run_theory_bound"):
    builder.add_conditional_edges(node, route_on_error("write_results"), {"write_results": "write_results", END: END})
builder.add_conditional_edges("write_results", route_on_error("summarize"), {"summarize": "summarize", END: END})
builder.add_edge("summarize", END)

# Compile the graph
graph = builder.compile()


def run_experiment(spec: RunSpec) -> ExperimentState:
    """
    Run one experiment end to end.

    Returns:
        Final ExperimentState; exit_code is 1 whenever error_message is set
    """
    result = graph.invoke({"spec": spec})
    state = ExperimentState(**result)
    if state.error_message:
        state.exit_code = EXIT_ERROR
    return state
