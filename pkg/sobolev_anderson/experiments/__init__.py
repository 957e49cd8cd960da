# __init__.py
from .graph import graph, ExperimentState, run_experiment
from .spec import RunSpec, SolverSpec, TheorySpec

__all__ = ["graph", "ExperimentState", "run_experiment", "RunSpec", "SolverSpec", "TheorySpec"]
