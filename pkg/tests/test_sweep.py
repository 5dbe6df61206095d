"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : test_sweep.py
Summary   : Sweep, record persistence and summary tests, run against a
            scripted backend (no compiler needed)
Imports   : unittest, tempfile, pathlib, compvar
Example   : python3 -m unittest tests.test_sweep
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
import json
import tempfile
import unittest
from pathlib import Path

from compvar.compilation import Compilation
from compvar.config import load_manifest
from compvar.enums import CellStatus
from compvar.errors import BuildError, ConfigError, RecordError
from compvar.summary import summarize
from compvar.sweep import RECORDS_FILE, SweepRecord, load_records, plan_matrix, run_sweep
from compvar.testscore import TestScore

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "kahan_project" / "compvar.toml"

LEVEL_TIMES = {"O0": 4.0, "O1": 2.0, "O2": 1.0, "O3": 0.5}


class ScriptedBackend(object):
    """stands in for ToolchainBackend: -ffast-math cells score 0.5 and run twice as fast"""

    def __init__(self, manifest, results_dir, broken_level: str = None, binary: str = "/usr/bin/g++"):
        self.manifest = manifest
        self.results_dir = Path(results_dir)
        self.broken_level = broken_level
        self.binary = binary
        self.built = []
        self._current = None

    def resolve_binary(self, compiler_id):
        return self.binary

    def build_mixed(self, plan):
        if plan.candidate.optimization_level == self.broken_level:
            raise BuildError(f"compilation failed under {plan.candidate}", "error: internal compiler error")
        self.built.append(plan.candidate)
        self._current = plan.candidate
        return Path(f"/nonexistent/{plan.key()}")

    def score_executable(self, executable, specs):
        return TestScore.measured(0.5 if "-ffast-math" in self._current.switches else 0.0)

    def time_test_executable(self, executable, spec):
        seconds = LEVEL_TIMES[self._current.optimization_level]
        return seconds / 2 if "-ffast-math" in self._current.switches else seconds


class TestPlanMatrix(unittest.TestCase):

    def test_fixtureMatrix(self):
        manifest = load_manifest(FIXTURE)
        matrix = plan_matrix(manifest)
        self.assertEqual(16, len(matrix))
        self.assertEqual(Compilation("gcc", "O0"), matrix[0])
        self.assertEqual(Compilation("gcc", "O0", ["-ffast-math"]), matrix[1])
        self.assertIn(manifest.correctness_baseline, matrix)
        self.assertEqual(len(matrix), len(set(matrix)))

    def test_unknownCompilerId(self):
        with self.assertRaises(ConfigError):
            plan_matrix(load_manifest(FIXTURE), ["icx"])


class TestRunSweep(unittest.TestCase):

    def setUp(self):
        self.manifest = load_manifest(FIXTURE)
        self.matrix = plan_matrix(self.manifest)
        self._tmp = tempfile.TemporaryDirectory()
        self.out = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def sweep(self, backend, resume: bool = False):
        return run_sweep(backend, self.matrix, 3, resume, self.out)

    def record(self, records, level: str, switches=(), test: str = "kahan") -> SweepRecord:
        comp = Compilation("gcc", level, switches)
        return [r for r in records if r.compilation == comp and r.test == test][0]

    def test_everyCellRecorded(self):
        records = self.sweep(ScriptedBackend(self.manifest, self.out))
        self.assertEqual(32, len(records))
        self.assertTrue(all(r.status == CellStatus.COMPLETED for r in records))
        self.assertEqual(32, len(load_records(self.out / RECORDS_FILE)))
        self.assertEqual((self.matrix[0].to_id(), "kahan"), records[0].key)

    def test_scoresAndSpeedups(self):
        records = self.sweep(ScriptedBackend(self.manifest, self.out))
        self.assertTrue(self.record(records, "O2").bitwise_equal)
        self.assertEqual(1.0, self.record(records, "O2").speedup)
        self.assertEqual(2.0, self.record(records, "O3").speedup)
        fast = self.record(records, "O3", ["-ffast-math"])
        self.assertEqual(0.5, fast.score.value)
        self.assertEqual(0.25, fast.median_time)
        self.assertEqual(4.0, fast.speedup)
        self.assertEqual([0.25, 0.25, 0.25], fast.wall_times)

    def test_buildFailureFailsCells(self):
        records = self.sweep(ScriptedBackend(self.manifest, self.out, broken_level="O1"))
        failed = [r for r in records if r.status == CellStatus.FAILED]
        self.assertEqual(8, len(failed))
        self.assertTrue(all(r.compilation.optimization_level == "O1" for r in failed))
        self.assertTrue(all(r.score.is_failure and r.speedup is None for r in failed))

    def test_resumeRerunsFailedCells(self):
        self.sweep(ScriptedBackend(self.manifest, self.out, broken_level="O1"))
        backend = ScriptedBackend(self.manifest, self.out)
        records = self.sweep(backend, resume=True)
        self.assertEqual(4, len(backend.built))
        self.assertTrue(all(c.optimization_level == "O1" for c in backend.built))
        self.assertEqual(32, len(records))
        self.assertTrue(all(r.status == CellStatus.COMPLETED for r in load_records(self.out / RECORDS_FILE)))

    def test_withoutResumeStartsOver(self):
        self.sweep(ScriptedBackend(self.manifest, self.out))
        backend = ScriptedBackend(self.manifest, self.out)
        self.sweep(backend)
        self.assertEqual(16, len(backend.built))
        with open(self.out / RECORDS_FILE, encoding="utf-8") as f:
            self.assertEqual(32, len(f.readlines()))

    def test_missingCompilerSkipsCells(self):
        records = self.sweep(ScriptedBackend(self.manifest, self.out, binary=None))
        self.assertTrue(all(r.status == CellStatus.SKIPPED for r in records))
        self.assertIn("g++", records[0].reason)

    def test_runsPerTimingMustBePositive(self):
        with self.assertRaises(ConfigError):
            run_sweep(ScriptedBackend(self.manifest, self.out), self.matrix, 0, out=self.out)


class TestLoadRecords(unittest.TestCase):

    def test_missingFile(self):
        with self.assertRaises(RecordError):
            load_records(Path("/nonexistent") / RECORDS_FILE)

    def test_corruptLine(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / RECORDS_FILE
            path.write_text('{"test": "kahan"}\n', encoding="utf-8")
            with self.assertRaises(RecordError) as context:
                load_records(path)
            self.assertEqual(1, context.exception.line)

    def test_lastRecordWins(self):
        comp = Compilation("gcc", "O3")
        failed = SweepRecord(comp, "kahan", CellStatus.FAILED, TestScore.run_failure("timeout"))
        done = SweepRecord(comp, "kahan", CellStatus.COMPLETED, TestScore.measured(0.0), [1.0], 1.0)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / RECORDS_FILE
            path.write_text("\n".join(json.dumps(r.toJSON()) for r in (failed, done)) + "\n", encoding="utf-8")
            records = load_records(path)
        self.assertEqual(1, len(records))
        self.assertEqual(CellStatus.COMPLETED, records[0].status)


class TestSummarize(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.manifest = load_manifest(FIXTURE)
        with tempfile.TemporaryDirectory() as tmp:
            records = run_sweep(ScriptedBackend(cls.manifest, tmp), plan_matrix(cls.manifest), 3, out=Path(tmp))
        cls.summary = summarize(records, cls.manifest.performance_reference)

    def test_cellCounts(self):
        self.assertEqual({"completed": 32, "failed": 0, "skipped": 0}, self.summary.cells)

    def test_variability(self):
        expected = {"count": 4, "min": 0.5, "median": 0.5, "max": 0.5}
        self.assertEqual(expected, self.summary.variability["kahan"])

    def test_fastest(self):
        fastest = self.summary.fastest["counts"]
        self.assertEqual({"compilation": "gcc -O3", "speedup": 2.0}, fastest["bitwise_equal"])
        self.assertEqual({"compilation": "gcc -O3 -ffast-math", "speedup": 4.0}, fastest["variable"])

    def test_compilerCharacterization(self):
        gcc = self.summary.compilers[0]
        self.assertEqual("gcc", gcc.compiler_id)
        self.assertEqual((8, 32), (gcc.variable_runs, gcc.total_runs))
        self.assertEqual(25.0, gcc.variable_percent)
        self.assertEqual(Compilation("gcc", "O3", ["-ffast-math"]), gcc.best_flags)
        self.assertEqual(4.0, gcc.mean_speedup)
        self.assertIn("8 of 32 (25.0%)", self.summary.compiler_table())

    def test_seriesAscendingBySpeedup(self):
        series = self.summary.series["kahan"]
        self.assertEqual(16, len(series))
        self.assertEqual(sorted(series["speedup"]), list(series["speedup"]))
        self.assertEqual(["compilation_id", "speedup", "bitwise_equal"], list(series.columns))

    def test_write(self):
        with tempfile.TemporaryDirectory() as tmp:
            self.summary.write(Path(tmp))
            with open(Path(tmp) / "summary.json", encoding="utf-8") as f:
                data = json.load(f)
            self.assertTrue((Path(tmp) / "series" / "kahan.csv").is_file())
        self.assertEqual(["counts", "kahan"], sorted(data["fastest"]))
        self.assertEqual("gcc -O3 -ffast-math", data["compilers"][0]["best_flags"])


if __name__ == "__main__":
    unittest.main()
