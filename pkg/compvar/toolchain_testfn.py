"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : toolchain_testfn.py
Classes   : ToolchainSearch
Summary   : Test functions over real builds: File Bisect (mixed object
            files) and Symbol Bisect (weakened symbols in one file)
Imports   : logging, compilation, element, testfn, testscore, toolchain
Example   : search = ToolchainSearch(backend, candidate, [manifest.test("kahan")])
            report = bisect_hierarchy(search.file_test, search.files,
                                      search.symbols_of, search.symbol_test_of)
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import logging

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from compilation import Compilation
    from element import Element, ElementSet
    from testfn import TestFn
    from testscore import TestScore, TestSpec
    from toolchain import BuildPlan, ToolchainBackend, Weakening
else:
    from .compilation import Compilation
    from .element import Element, ElementSet
    from .testfn import TestFn
    from .testscore import TestScore, TestSpec
    from .toolchain import BuildPlan, ToolchainBackend, Weakening

logger = logging.getLogger(__name__)


def make_file_test_fn(backend: ToolchainBackend, candidate: Compilation, specs: list[TestSpec]) -> TestFn:
    """Test(files) = max over specs of compare(baseline, mixed build), where
    the files are built with the candidate and all others with the baseline"""
    baseline = backend.manifest.correctness_baseline

    def evaluate(items: ElementSet) -> TestScore:
        plan = BuildPlan(candidate, baseline, tuple(e.file for e in items))
        return backend.evaluate_plan(plan, specs)

    return TestFn(evaluate, f"files:{candidate.to_id()}")


class ToolchainSearch(object):
    """file and symbol Test functions for one candidate compilation"""

    def __init__(self, backend: ToolchainBackend, candidate: Compilation, specs: list[TestSpec]) -> None:
        self._backend = backend
        self._candidate = candidate
        self._specs = list(specs)
        self._files = backend.manifest.file_order.full()
        self._file_test = make_file_test_fn(backend, candidate, self._specs)
        self._symbols = {}
        self._symbol_tests = {}
        self.file_level_only = []

    @property
    def files(self) -> ElementSet: return self._files

    @property
    def file_test(self) -> TestFn: return self._file_test

    # exported strong functions of the file, from its position-independent objects
    def symbols_of(self, file: Element) -> ElementSet:
        if file.file not in self._symbols:
            baseline = self._backend.manifest.correctness_baseline
            objects = self._backend.compile_objects(
                [(file.file, self._candidate, True), (file.file, baseline, True)])
            self._symbols[file.file] = self._backend.list_exported_symbols(file.file, objects)
        return self._symbols[file.file]

    def symbol_test_of(self, file: Element) -> TestFn | None:
        if file.file not in self._symbol_tests:
            self._symbol_tests[file.file] = make_symbol_test_fn(
                self._backend, self._candidate, file, self._specs, self.symbols_of(file))
            if self._symbol_tests[file.file] is None:
                self.file_level_only.append(file.file)
        return self._symbol_tests[file.file]

    @property
    def total_evaluations(self) -> int:
        symbol_evaluations = sum(t.distinct_evaluations for t in self._symbol_tests.values() if t is not None)
        return self._file_test.distinct_evaluations + symbol_evaluations


def make_symbol_test_fn(
    backend: ToolchainBackend,
    candidate: Compilation,
    file: Element,
    specs: list[TestSpec],
    symbols: ElementSet
) -> TestFn | None:
    """Test over the file's exported symbols, or None when the variability
    vanishes once the file is rebuilt position-independent"""
    baseline = backend.manifest.correctness_baseline
    names = tuple(s.symbol for s in symbols)

    def evaluate(items: ElementSet) -> TestScore:
        weakening = Weakening(file.file, tuple(s.symbol for s in items), names)
        plan = BuildPlan(candidate, baseline, (), pic_override=True, weakened=weakening)
        return backend.evaluate_plan(plan, specs)

    test = TestFn(evaluate, f"symbols:{file.file}:{candidate.to_id()}")
    if len(symbols) == 0:
        return None
    everything = test(symbols)
    if everything.is_failure:
        # surfaced to the search as a failure on its first call
        return test
    if everything.value == 0:
        logger.info(f"{file}: variability vanishes under position-independent code, stopping at file level")
        return None
    return test
