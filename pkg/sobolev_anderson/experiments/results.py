# results.py
from pathlib import Path

import pandas as pd

from sobolev_anderson.anderson import ConvergenceRecord, RunStatus
from sobolev_anderson.theory import BoundReport


def write_record_csv(record: ConvergenceRecord, path: Path) -> Path:
    """iter,res_l2,res_w,err_l2 with one row per recorded iteration; err_l2 is blank without a reference"""
    path.parent.mkdir(parents=True, exist_ok=True)
    record.to_frame().to_csv(path, index=False, lineterminator="\n", na_rep="")
    return path


def write_reports_csv(reports: list[BoundReport], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        [report.model_dump(include={"trial", "ratio", "bound", "passed"}) for report in reports],
        columns=["trial", "ratio", "bound", "passed"],
    )
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def summary_line(record: ConvergenceRecord) -> str:
    if record.status == RunStatus.CONVERGED:
        return f"{record.label}: converged in {record.iterations} iterations"
    if record.status == RunStatus.DIVERGED:
        return f"{record.label}: DIVERGED at iteration {record.iterations}"
    return f"{record.label}: MAXITER after {record.iterations} iterations"


def bound_summary(reports: list[BoundReport]) -> str:
    passed = sum(report.passed for report in reports)
    worst = max(report.ratio for report in reports)
    return (
        f"theory-bound: {passed}/{len(reports)} trials passed, "
        f"max ratio {worst:.6e} vs C={reports[0].bound:.6e}"
    )
