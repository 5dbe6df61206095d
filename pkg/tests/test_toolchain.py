"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : test_toolchain.py
Summary   : Build plans and command lines, plus end-to-end runs over the
            bundled fixture project when g++, nm and objcopy are installed
Imports   : unittest, tempfile, pathlib, compvar
Example   : python3 -m unittest tests.test_toolchain
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
import dataclasses
import os
import shutil
import tempfile
import unittest
from pathlib import Path

from compvar.bisection import bisect_hierarchy
from compvar.compilation import Compilation
from compvar.config import load_manifest
from compvar.element import Element
from compvar.enums import AssertionStatus, CellStatus
from compvar.errors import ConfigError, RunError
from compvar.summary import summarize
from compvar.sweep import plan_matrix, run_sweep
from compvar.toolchain import BuildPlan, ToolchainBackend, Weakening, host_toolchain_available
from compvar.toolchain_testfn import ToolchainSearch

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures" / "kahan_project"
FIXTURE = FIXTURE_DIR / "compvar.toml"
NONDET_FIXTURE = FIXTURE_DIR / "compvar-nondet.toml"
PICFIX_FIXTURE = FIXTURE_DIR / "compvar-picfix.toml"

BASELINE = Compilation("gcc", "O2")
FAST_MATH = Compilation("gcc", "O3", ["-ffast-math"])


class TestBuildPlan(unittest.TestCase):

    def test_compilationOfFile(self):
        plan = BuildPlan(FAST_MATH, BASELINE, ("kahan.cpp",))
        self.assertEqual(FAST_MATH, plan.compilation_of("kahan.cpp"))
        self.assertEqual(BASELINE, plan.compilation_of("main.cpp"))

    def test_weakeningNeedsPicOverride(self):
        weakening = Weakening("kahan.cpp", ("kahan_sum",), ("kahan_sum", "_Z13count_nonzeroPKdm"))
        with self.assertRaises(ValueError):
            BuildPlan(FAST_MATH, BASELINE, weakened=weakening)

    def test_weakeningComplement(self):
        weakening = Weakening("kahan.cpp", ("b",), ("a", "b", "c"))
        self.assertEqual(("a", "c"), weakening.complement)

    def test_keyIsStableAndDistinct(self):
        first = BuildPlan(FAST_MATH, BASELINE, ("kahan.cpp",))
        self.assertEqual(first.key(), BuildPlan(FAST_MATH, BASELINE, ("kahan.cpp",)).key())
        self.assertNotEqual(first.key(), BuildPlan(FAST_MATH, BASELINE, ("io.cpp",)).key())


class TestBackendCommands(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.backend = ToolchainBackend(load_manifest(FIXTURE), Path(self._tmp.name))

    def tearDown(self):
        self._tmp.cleanup()

    def test_compileCommand(self):
        output = Path("/tmp/kahan.o")
        command = self.backend.compile_command("kahan.cpp", FAST_MATH, True, output)
        expected = ["g++", "-std=c++17", "-O3", "-ffast-math", "-fPIC",
                    "-c", str(FIXTURE_DIR / "kahan.cpp"), "-o", str(output)]
        self.assertEqual(expected, command)

    def test_objectPathDependsOnPic(self):
        plain = self.backend.object_path("kahan.cpp", FAST_MATH)
        pic = self.backend.object_path("kahan.cpp", FAST_MATH, pic=True)
        self.assertNotEqual(plain, pic)
        self.assertTrue(plain.name.startswith("kahan-"))

    def test_environmentIsScrubbed(self):
        env = self.backend.environment()
        self.assertEqual("C", env["LC_ALL"])
        self.assertTrue(set(env) <= {"PATH", "LC_ALL"})

    def test_unknownCandidateFile(self):
        with self.assertRaises(ConfigError):
            self.backend.build_mixed(BuildPlan(FAST_MATH, BASELINE, ("missing.cpp",)))

    def test_resultDirectories(self):
        for name in ("objects", "runs", "build"):
            self.assertTrue((Path(self._tmp.name) / name).is_dir())

    @unittest.skipUnless(os.name == "posix" and shutil.which("sh"), "needs a POSIX shell")
    def test_undecodableOutputIsRunFailure(self):
        script = Path(self._tmp.name) / "bad-output"
        script.write_bytes(b"#!/bin/sh\nprintf 'STRING 2\\n\\377\\376'\n")
        script.chmod(0o755)
        spec = self.backend.manifest.test("kahan")
        with self.assertRaises(RunError):
            self.backend.run_test_executable(script, spec)
        score = self.backend.score_executable(script, [spec])
        self.assertTrue(score.is_failure)


class TestObjectCacheKey(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.project = Path(self._tmp.name) / "project"
        shutil.copytree(FIXTURE_DIR, self.project)
        self.out = Path(self._tmp.name) / "results"
        self.manifest = load_manifest(self.project / "compvar.toml")

    def tearDown(self):
        self._tmp.cleanup()

    def key(self, manifest=None, file="kahan.cpp", pic=False) -> Path:
        return ToolchainBackend(manifest or self.manifest, self.out).object_path(file, FAST_MATH, pic)

    def test_stableForSameConfiguration(self):
        self.assertEqual(self.key(), self.key())

    def test_followsProjectFlags(self):
        flags = dataclasses.replace(self.manifest, cxxflags=("-std=c++17", "-DNDEBUG"))
        self.assertNotEqual(self.key(), self.key(flags))

    def test_followsCompilerFlags(self):
        gcc = self.manifest.compiler("gcc")
        fixed = dataclasses.replace(self.manifest, compilers={"gcc": dataclasses.replace(gcc, fixed_flags=("-g",))})
        self.assertNotEqual(self.key(), self.key(fixed))
        pic = dataclasses.replace(self.manifest, compilers={"gcc": dataclasses.replace(gcc, pic_flag="-fpic")})
        self.assertNotEqual(self.key(pic=True), self.key(pic, pic=True))
        self.assertEqual(self.key(), self.key(pic))

    def test_followsSourceContents(self):
        before = self.key()
        with open(self.project / "kahan.cpp", "a", encoding="utf-8") as f:
            f.write("// edited\n")
        self.assertNotEqual(before, self.key())

    def test_followsHeaderContents(self):
        before = self.key(file="main.cpp")
        with open(self.project / "kahan.h", "a", encoding="utf-8") as f:
            f.write("// edited\n")
        self.assertNotEqual(before, self.key(file="main.cpp"))


@unittest.skipUnless(host_toolchain_available(), "g++, nm and objcopy are required")
class TestFixtureProject(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.out = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def test_baselineIsDeterministic(self):
        backend = ToolchainBackend(load_manifest(FIXTURE), self.out)
        self.assertTrue(backend.check_determinism().deterministic)

    def test_clockTestIsNondeterministic(self):
        backend = ToolchainBackend(load_manifest(NONDET_FIXTURE), self.out)
        verdict = backend.check_determinism()
        self.assertFalse(verdict.deterministic)
        self.assertEqual(["clock"], verdict.offending)

    def test_sweepFindsFastMathVariable(self):
        manifest = load_manifest(FIXTURE)
        backend = ToolchainBackend(manifest, self.out)
        records = run_sweep(backend, plan_matrix(manifest), 1, out=self.out)
        self.assertTrue(all(r.status == CellStatus.COMPLETED for r in records))
        fast = [r for r in records if r.compilation == FAST_MATH and r.test == "kahan"][0]
        self.assertGreater(fast.score.value, 0.0)
        baseline = [r for r in records if r.compilation == BASELINE and r.test == "kahan"][0]
        self.assertTrue(baseline.bitwise_equal)
        summary = summarize(records, manifest.performance_reference)
        self.assertGreater(summary.compilers[0].variable_runs, 0)

    def test_bisectFindsKahanSum(self):
        manifest = load_manifest(FIXTURE)
        backend = ToolchainBackend(manifest, self.out)
        search = ToolchainSearch(backend, FAST_MATH, [manifest.test("kahan")])
        report = bisect_hierarchy(search.file_test, search.files, search.symbols_of, search.symbol_test_of)
        self.assertEqual(["kahan.cpp"], [e.file for e in report.found_files])
        self.assertEqual(["kahan_sum"], [f.element.symbol for f in report.found_symbols])
        self.assertEqual(AssertionStatus.VERIFIED, report.assertion_status)
        self.assertGreater(backend.cache_hits, 0)

    def bisect_report(self, out: Path) -> dict:
        manifest = load_manifest(FIXTURE)
        search = ToolchainSearch(ToolchainBackend(manifest, out), FAST_MATH, [manifest.test("kahan")])
        return bisect_hierarchy(search.file_test, search.files, search.symbols_of, search.symbol_test_of).toJSON()

    def test_consecutiveRunsGiveIdenticalReports(self):
        first = self.bisect_report(self.out / "first")
        self.assertEqual(first, self.bisect_report(self.out / "second"))
        self.assertEqual(first, self.bisect_report(self.out / "first"))

    def test_emptyFileSetScoresZero(self):
        manifest = load_manifest(FIXTURE)
        search = ToolchainSearch(ToolchainBackend(manifest, self.out), FAST_MATH, [manifest.test("kahan")])
        self.assertEqual(0.0, search.file_test(manifest.file_order.empty()).value)
        self.assertGreater(search.file_test(manifest.file_order.full()).value, 0.0)

    def test_weakenAllOrNothing(self):
        manifest = load_manifest(FIXTURE)
        backend = ToolchainBackend(manifest, self.out)
        spec = manifest.test("kahan")
        search = ToolchainSearch(backend, FAST_MATH, [spec])
        names = tuple(s.symbol for s in search.symbols_of(Element.of_file("kahan.cpp")))

        nothing = BuildPlan(FAST_MATH, BASELINE, (), True, Weakening("kahan.cpp", (), names))
        everything = BuildPlan(FAST_MATH, BASELINE, (), True, Weakening("kahan.cpp", names, names))
        self.assertEqual(0.0, backend.score_executable(backend.weaken_and_link(nothing), [spec]).value)
        self.assertGreater(backend.score_executable(backend.weaken_and_link(everything), [spec]).value, 0.0)

    def test_sweepScoreMatchesFileTest(self):
        manifest = load_manifest(FIXTURE)
        backend = ToolchainBackend(manifest, self.out)
        records = run_sweep(backend, [BASELINE, FAST_MATH], 1, out=self.out)
        spec = manifest.test("kahan")
        swept = [r for r in records if r.compilation == FAST_MATH and r.test == "kahan"][0]
        search = ToolchainSearch(backend, FAST_MATH, [spec])
        self.assertEqual(swept.score.value, search.file_test(manifest.file_order.full()).value)

    def test_changedFlagsRebuildObjects(self):
        manifest = load_manifest(FIXTURE)
        plan = BuildPlan(FAST_MATH, BASELINE, ("kahan.cpp",))
        ToolchainBackend(manifest, self.out).build_mixed(plan)
        again = ToolchainBackend(manifest, self.out)
        again.build_mixed(plan)
        self.assertEqual(0, again.compile_count)
        changed = ToolchainBackend(dataclasses.replace(manifest, cxxflags=("-std=c++17", "-DNDEBUG")), self.out)
        changed.build_mixed(plan)
        self.assertEqual(len(manifest.files), changed.compile_count)

    def test_positionIndependentRebuildStopsAtFileLevel(self):
        manifest = load_manifest(PICFIX_FIXTURE)
        search = ToolchainSearch(ToolchainBackend(manifest, self.out), FAST_MATH, [manifest.test("kahan")])
        report = bisect_hierarchy(search.file_test, search.files, search.symbols_of, search.symbol_test_of)
        self.assertEqual(["kahan.cpp"], [e.file for e in report.found_files])
        self.assertEqual([], report.found_symbols)
        self.assertEqual(["kahan.cpp"], list(report.file_level_only))

    def test_exportedSymbolsOfKahanFile(self):
        manifest = load_manifest(FIXTURE)
        search = ToolchainSearch(ToolchainBackend(manifest, self.out), FAST_MATH, [manifest.test("kahan")])
        symbols = search.symbols_of(manifest.file_order.full()[3])
        self.assertIn("kahan_sum", [s.symbol for s in symbols])
        self.assertIn("count_nonzero(double const*, unsigned long)", [s.display for s in symbols])


if __name__ == "__main__":
    unittest.main()
