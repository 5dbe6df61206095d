"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : test_biggest_k.py
Summary   : Unit tests for the k-biggest symbol search
Imports   : unittest, compvar
Example   : python3 -m unittest tests.test_biggest_k
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
import math
import random
import unittest

from compvar.biggest_k import Frontier, bisect_biggest_k
from compvar.bisection import bisect_hierarchy
from compvar.element import Element, ElementOrder
from compvar.enums import AssertionStatus, Assumption, Granularity, InjectionMode
from compvar.errors import ContractError
from compvar.synthetic import Injection, SyntheticProject, generate_project, make_test_fn, mangle


def layout(n_files: int, symbols_per_file: int) -> list:
    files = []
    for fi in range(n_files):
        path = f"src/f{fi:02d}.cpp"
        files.append((path, [Element.of_symbol(path, mangle(f"f{fi:02d}_s{si:02d}"))
                             for si in range(symbols_per_file)]))
    return files


def run_both(project: SyntheticProject, k: int):
    """(biggest-k report, hierarchy report, hierarchy evaluations)"""
    biggest = bisect_biggest_k(
        make_test_fn(project, Granularity.FILES), project.all_files(), k, project.symbols_of,
        lambda file: make_test_fn(project, Granularity.SYMBOLS, file))
    full = bisect_hierarchy(
        make_test_fn(project, Granularity.FILES), project.all_files(), project.symbols_of,
        lambda file: make_test_fn(project, Granularity.SYMBOLS, file))
    return biggest, full


class TestFrontier(unittest.TestCase):

    def test_popsHighestScoreFirst(self):
        order = ElementOrder(Element.of_file(f"{n}.cpp") for n in range(3))
        frontier = Frontier()
        frontier.push(0.25, order.full()[:1])
        frontier.push(0.5, order.full()[1:2])
        frontier.push(0.125, order.full()[2:])
        self.assertEqual([0.5, 0.25, 0.125], [frontier.pop_max()[0] for _ in range(3)])
        self.assertEqual(0, len(frontier))

    def test_equalScoresPopInInsertionOrder(self):
        order = ElementOrder(Element.of_file(f"{n}.cpp") for n in range(3))
        frontier = Frontier()
        for i in range(3):
            frontier.push(1.0, order.full()[i:i + 1])
        popped = [frontier.pop_max()[1][0].file for _ in range(3)]
        self.assertEqual(["0.cpp", "1.cpp", "2.cpp"], popped)


class TestBisectBiggestK(unittest.TestCase):

    def test_kMustBePositive(self):
        project = generate_project(1, 4, 3, 1)
        with self.assertRaises(ContractError):
            bisect_biggest_k(make_test_fn(project, Granularity.FILES), project.all_files(), 0, project.symbols_of)

    def test_noVariability(self):
        project = generate_project(1, 8, 4, 0)
        report = bisect_biggest_k(
            make_test_fn(project, Granularity.FILES), project.all_files(), 1, project.symbols_of)
        self.assertEqual(0, len(report.found))
        self.assertEqual(1, report.distinct_evaluations)
        self.assertEqual(AssertionStatus.SKIPPED, report.assertion_status)

    def test_topSymbolOfTwo(self):
        files = layout(8, 4)
        big = files[1][1][2]
        small = files[6][1][1]
        project = SyntheticProject(0, InjectionMode.INDEPENDENT, files, [
            Injection(big, math.ldexp(1.0, -2)),
            Injection(small, math.ldexp(1.0, -10))
        ])
        biggest, full = run_both(project, 1)
        self.assertEqual([big], [f.element for f in biggest.found])
        self.assertEqual(12, biggest.distinct_evaluations)
        self.assertLess(biggest.distinct_evaluations, full.total_evaluations)
        self.assertEqual(["src/f01.cpp"], [f.element.file for f in biggest.found_files])

    def test_largeKMatchesFullSearch(self):
        for seed in range(20):
            project = generate_project(seed, 10, 6, 4)
            biggest, full = run_both(project, 4)
            self.assertEqual({f.element for f in full.found_symbols}, {f.element for f in biggest.found})

    def test_kOneIsCheaperOnSpreadInjections(self):
        rng = random.Random(2026)
        for seed in range(100):
            k_true = rng.randint(3, 8)
            project = generate_project(seed, 16, 8, k_true, distinct_files=True)
            top = max(project.injections, key=lambda inj: inj.magnitude).site

            biggest, full = run_both(project, 1)
            self.assertEqual([top], [f.element for f in biggest.found], f"seed {seed}")
            self.assertLess(biggest.distinct_evaluations, full.total_evaluations, f"seed {seed}")

            complete, _ = run_both(project, k_true)
            self.assertEqual(set(project.injected_sites), {f.element for f in complete.found}, f"seed {seed}")
            scores = [f.score.value for f in complete.found]
            self.assertEqual(sorted(scores, reverse=True), scores)

    def test_subFileCancellationIsFlagged(self):
        flagged = 0
        for seed in range(20):
            project = generate_project(seed, 6, 4, 2, sub_file_cancellation=True)
            report, _ = run_both(project, 2)
            self.assertEqual(AssertionStatus.SKIPPED, report.assertion_status)
            if Assumption.FILE_DOMINANCE in report.violated_assumptions:
                flagged += 1
                self.assertTrue(report.possible_false_negatives)
        self.assertEqual(20, flagged)

    def test_withoutSymbolTestsUsesFileTest(self):
        project = generate_project(4, 1, 6, 2)
        test = make_test_fn(project, Granularity.FILES)
        report = bisect_biggest_k(test, project.all_files(), 1, project.symbols_of)
        self.assertEqual(1, len(report.found_files))


if __name__ == "__main__":
    unittest.main()
