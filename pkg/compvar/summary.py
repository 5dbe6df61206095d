"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : summary.py
Classes   : CompilerSummary, SweepSummary
Summary   : Aggregates sweep records: per-test speedup series, variability
            statistics, per-compiler characterization, fastest bitwise-equal
            and fastest variable compilation per test
Imports   : json, math, dataclasses, pathlib, pandas, compilation, enums,
            sweep
Example   : summary = summarize(records, manifest.performance_reference)
            summary.write(Path("out"))
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
import pandas as pd

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from compilation import Compilation
    from enums import CellStatus
    from sweep import SweepRecord, assign_speedups
else:
    from .compilation import Compilation
    from .enums import CellStatus
    from .sweep import SweepRecord, assign_speedups

SERIES_COLUMNS = ["compilation_id", "speedup", "bitwise_equal"]


@dataclass
class CompilerSummary:
    compiler_id: str
    variable_runs: int
    total_runs: int
    best_flags: Compilation | None = None
    mean_speedup: float | None = None

    @property
    def variable_percent(self) -> float:
        return 0.0 if self.total_runs == 0 else round(100.0 * self.variable_runs / self.total_runs, 1)

    def toJSON(self) -> dict:
        return {
            "compiler": self.compiler_id,
            "variable_runs": self.variable_runs,
            "total_runs": self.total_runs,
            "variable_percent": self.variable_percent,
            "best_flags": None if self.best_flags is None else str(self.best_flags),
            # arithmetic mean of speedups across tests
            "best_flags_mean_speedup": self.mean_speedup
        }


@dataclass
class SweepSummary:
    series: dict[str, pd.DataFrame] = field(default_factory=dict)
    variability: dict[str, dict | None] = field(default_factory=dict)
    compilers: list[CompilerSummary] = field(default_factory=list)
    fastest: dict[str, dict] = field(default_factory=dict)
    cells: dict[str, int] = field(default_factory=dict)

    def toJSON(self) -> dict:
        return {
            "cells": self.cells,
            "variability": self.variability,
            "compilers": [c.toJSON() for c in self.compilers],
            "fastest": self.fastest
        }

    def compiler_table(self) -> str:
        frame = pd.DataFrame([
            {
                "compiler": c.compiler_id,
                "# variable runs": f"{c.variable_runs} of {c.total_runs} ({c.variable_percent}%)",
                "best flags": "" if c.best_flags is None else " ".join(c.best_flags.flags()),
                "speedup": "" if c.mean_speedup is None else f"{c.mean_speedup:.3f}"
            } for c in self.compilers])
        return frame.to_string(index=False) if len(frame) > 0 else "(no completed runs)"

    def write(self, out_dir: Path) -> None:
        out_dir = Path(out_dir)
        with open(out_dir / "summary.json", "w", encoding="utf-8") as f:
            json.dump(self.toJSON(), f, indent=3, sort_keys=True)
        series_dir = out_dir / "series"
        series_dir.mkdir(parents=True, exist_ok=True)
        for test, frame in self.series.items():
            frame.to_csv(series_dir / f"{test}.csv", index=False)


def _clean(value) -> float | None:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return float(value)


def records_frame(records: list[SweepRecord]) -> pd.DataFrame:
    rows = []
    for r in records:
        rows.append({
            "compilation_id": r.compilation.to_id(),
            "compiler": r.compilation.compiler_id,
            "test": r.test,
            "status": r.status.value,
            "score": None if r.score is None or r.score.is_failure else r.score.value,
            "median_time": r.median_time,
            "speedup": r.speedup
        })
    return pd.DataFrame(rows, columns=["compilation_id", "compiler", "test", "status", "score", "median_time", "speedup"])


def summarize(records: list[SweepRecord], performance_reference: Compilation) -> SweepSummary:
    """pure aggregation of persisted records"""
    assign_speedups(records, performance_reference)
    by_id = {r.compilation.to_id(): r.compilation for r in records}
    frame = records_frame(records)
    summary = SweepSummary()
    summary.cells = {status.value: int((frame["status"] == status.value).sum()) for status in CellStatus}

    done = frame[frame["status"] == CellStatus.COMPLETED.value].copy()
    done["bitwise_equal"] = done["score"] == 0.0
    for test in sorted(frame["test"].unique()):
        rows = done[done["test"] == test].sort_values(["speedup", "compilation_id"], na_position="first")
        summary.series[test] = rows[SERIES_COLUMNS].reset_index(drop=True)

        variable = rows[rows["score"] > 0]["score"]
        if len(variable) == 0:
            summary.variability[test] = None
        else:
            summary.variability[test] = {
                "count": int(len(variable)),
                "min": float(variable.min()),
                "median": float(variable.median()),
                "max": float(variable.max())
            }

        fastest = {}
        for label, subset in (("bitwise_equal", rows[rows["bitwise_equal"]]),
                              ("variable", rows[~rows["bitwise_equal"]])):
            subset = subset.dropna(subset=["speedup"])
            if len(subset) > 0:
                best = subset.sort_values(["speedup", "compilation_id"], ascending=[False, True]).iloc[0]
                fastest[label] = {"compilation": str(by_id[best["compilation_id"]]), "speedup": float(best["speedup"])}
        summary.fastest[test] = fastest

    for compiler in sorted(done["compiler"].unique()):
        rows = done[done["compiler"] == compiler]
        item = CompilerSummary(compiler, int((rows["score"] > 0).sum()), int(len(rows)))
        means = rows.dropna(subset=["speedup"]).groupby("compilation_id")["speedup"].mean()
        if len(means) > 0:
            ranked = means.reset_index().sort_values(["speedup", "compilation_id"], ascending=[False, True])
            item.best_flags = by_id[ranked.iloc[0]["compilation_id"]]
            item.mean_speedup = _clean(ranked.iloc[0]["speedup"])
        summary.compilers.append(item)
    return summary
