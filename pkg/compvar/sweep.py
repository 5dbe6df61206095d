"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : sweep.py
Classes   : SweepRecord
Summary   : Runs the compilation matrix over every test: one scored run
            against the correctness baseline, median-of-R timing, one
            persisted record per (compilation, test) cell; resumable
Imports   : json, logging, pathlib, dataclasses, numpy, compilation,
            config, enums, errors, testscore, toolchain
Example   : matrix = plan_matrix(manifest)
            records = run_sweep(backend, matrix, 3, out=Path("out"))
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
import numpy as np

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from compilation import Compilation
    from config import ProjectManifest
    from enums import CellStatus
    from errors import BuildError, ConfigError, RecordError, RunError
    from testscore import TestScore
    from toolchain import BuildPlan, ToolchainBackend
else:
    from .compilation import Compilation
    from .config import ProjectManifest
    from .enums import CellStatus
    from .errors import BuildError, ConfigError, RecordError, RunError
    from .testscore import TestScore
    from .toolchain import BuildPlan, ToolchainBackend

logger = logging.getLogger(__name__)

RECORDS_FILE = "sweep.jsonl"


@dataclass
class SweepRecord:
    compilation: Compilation
    test: str
    status: CellStatus
    score: TestScore | None = None
    wall_times: list[float] = field(default_factory=list)
    median_time: float | None = None
    speedup: float | None = None
    reason: str = ""

    @property
    def key(self) -> tuple[str, str]:
        return (self.compilation.to_id(), self.test)

    # bitwise-equal iff the score is exactly 0
    @property
    def bitwise_equal(self) -> bool:
        return self.score is not None and not self.score.is_failure and self.score.value == 0

    def toJSON(self) -> dict:
        return {
            "compilation": self.compilation.toJSON(),
            "test": self.test,
            "status": self.status.value,
            "score": None if self.score is None else self.score.toJSON(),
            "wall_times": self.wall_times,
            "median_time": self.median_time,
            "reason": self.reason
        }

    @staticmethod
    def fromJSON(data: dict) -> SweepRecord:
        score = data.get("score")
        return SweepRecord(
            compilation=Compilation.fromJSON(data["compilation"]),
            test=data["test"],
            status=CellStatus(data["status"]),
            score=None if score is None else TestScore.fromJSON(score),
            wall_times=[float(t) for t in data.get("wall_times", [])],
            median_time=data.get("median_time"),
            reason=data.get("reason", ""))


def plan_matrix(manifest: ProjectManifest, compiler_ids: list[str] = None) -> list[Compilation]:
    """(compiler, level) x (no switch, or one switch combination), deduplicated,
    always holding both baselines"""
    ids = list(manifest.compilers) if compiler_ids is None else list(compiler_ids)
    matrix = []
    for compiler_id in ids:
        compiler = manifest.compiler(compiler_id)
        for level in compiler.optimization_levels:
            for combo in [()] + compiler.switch_combos():
                comp = Compilation(compiler_id, level, combo)
                if comp not in matrix:
                    matrix.append(comp)
    for baseline in (manifest.correctness_baseline, manifest.performance_reference):
        if baseline not in matrix:
            matrix.append(baseline)
    return matrix


def load_records(path: Path) -> list[SweepRecord]:
    """records of a sweep.jsonl file, the last record of each cell wins"""
    path = Path(path)
    if not path.is_file():
        raise RecordError("sweep records not found", str(path))
    records = {}
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if len(line.strip()) == 0:
                continue
            try:
                record = SweepRecord.fromJSON(json.loads(line))
            except (ValueError, KeyError, TypeError) as e:
                raise RecordError(f"corrupt sweep record ({e})", str(path), number) from None
            records[record.key] = record
    return list(records.values())


def assign_speedups(records: list[SweepRecord], performance_reference: Compilation) -> None:
    """speedup = reference median time / cell median time, per test"""
    reference = {
        r.test: r.median_time for r in records
        if r.compilation == performance_reference and r.status == CellStatus.COMPLETED
    }
    for record in records:
        ref = reference.get(record.test)
        if record.status != CellStatus.COMPLETED or not ref or not record.median_time:
            record.speedup = None
        elif record.compilation == performance_reference:
            record.speedup = 1.0
        else:
            record.speedup = ref / record.median_time


def _append(path: Path, record: SweepRecord) -> None:
    with open(path, "a", encoding="utf-8") as f:
        f.write(json.dumps(record.toJSON()) + "\n")


def run_cell(backend: ToolchainBackend, executable: Path, comp: Compilation, spec, runs_per_timing: int) -> SweepRecord:
    score = backend.score_executable(executable, [spec])
    if score.is_failure:
        return SweepRecord(comp, spec.name, CellStatus.FAILED, score, reason=score.diagnostics.strip())
    # timing runs come after the scored run, strictly serial
    try:
        times = [backend.time_test_executable(executable, spec) for _ in range(runs_per_timing)]
    except RunError as e:
        return SweepRecord(comp, spec.name, CellStatus.FAILED, TestScore.run_failure(str(e)), reason=str(e))
    return SweepRecord(comp, spec.name, CellStatus.COMPLETED, score, times, float(np.median(times)))


def run_sweep(
    backend: ToolchainBackend,
    matrix: list[Compilation],
    runs_per_timing: int = 3,
    resume: bool = False,
    out: Path = None
) -> list[SweepRecord]:
    """one record per (compilation, test) cell, persisted as it completes"""
    if runs_per_timing < 1:
        raise ConfigError("runs per timing must be >= 1")
    manifest = backend.manifest
    out = Path(out or backend.results_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / RECORDS_FILE

    done = {}
    if resume and path.is_file():
        done = {r.key: r for r in load_records(path) if r.status == CellStatus.COMPLETED}
        logger.info(f"resuming sweep: {len(done)} completed cell(s) kept")
    elif path.is_file():
        path.unlink()

    records = []
    for index, comp in enumerate(matrix, start=1):
        pending = [spec for spec in manifest.tests if (comp.to_id(), spec.name) not in done]
        records.extend(done[(comp.to_id(), spec.name)] for spec in manifest.tests if spec not in pending)
        if len(pending) == 0:
            continue
        logger.info(f"[{index}/{len(matrix)}] {comp}")

        if backend.resolve_binary(comp.compiler_id) is None:
            reason = f"compiler binary '{manifest.compiler(comp.compiler_id).binary}' not found"
            cells = [SweepRecord(comp, spec.name, CellStatus.SKIPPED, reason=reason) for spec in pending]
        else:
            try:
                executable = backend.build_mixed(BuildPlan(comp, manifest.correctness_baseline, manifest.files))
            except BuildError as e:
                failure = TestScore.build_failure(f"{e}\n{e.diagnostics}")
                cells = [SweepRecord(comp, spec.name, CellStatus.FAILED, failure, reason=str(e)) for spec in pending]
            else:
                cells = [run_cell(backend, executable, comp, spec, runs_per_timing) for spec in pending]
        for cell in cells:
            _append(path, cell)
            records.append(cell)
            logger.debug(f"{comp.to_id()} / {cell.test}: {cell.status.value} score={cell.score}")

    order = {(comp.to_id(), spec.name): i for i, (comp, spec) in enumerate(
        (c, s) for c in matrix for s in manifest.tests)}
    records.sort(key=lambda r: order.get(r.key, len(order)))
    assign_speedups(records, manifest.performance_reference)
    return records
