"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : test_oracle.py
Summary   : Brute-force ground truth checks: benign elements, AV sets,
            minimal sets, and agreement of bisect_all with the oracle
Imports   : unittest, random, compvar
Example   : python3 -m unittest tests.test_oracle
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
import math
import random
import unittest

from compvar.bisection import bisect_all, evaluation_bound
from compvar.element import Element, ElementOrder, ElementSet
from compvar.enums import Granularity
from compvar.errors import ContractError, OracleSizeError
from compvar.oracle import compute_av, is_benign, is_minimal_set, minimal_sets, oracle_verdict
from compvar.synthetic import generate_project, make_test_fn
from compvar.testfn import TestFn
from compvar.testscore import TestScore


def numbered(n: int) -> ElementOrder:
    return ElementOrder(Element.of_file(str(i)) for i in range(1, n + 1))


def subset(order: ElementOrder, numbers) -> ElementSet:
    return ElementSet([Element.of_file(str(i)) for i in numbers], order)


def additive_test(magnitudes: dict) -> TestFn:
    return TestFn(lambda items: TestScore.measured(
        math.fsum(magnitudes.get(int(e.file), 0.0) for e in items)))


def coupled_test(pair: set) -> TestFn:
    return TestFn(lambda items: TestScore.measured(
        1.0 if pair <= {int(e.file) for e in items} else 0.0))


class TestOracle(unittest.TestCase):
    order = numbered(6)

    def test_uninjectedIsBenign(self):
        test = additive_test({2: 0.5})
        self.assertTrue(is_benign(Element.of_file("3"), self.order.full(), test))

    def test_injectedIsNotBenign(self):
        test = additive_test({2: 0.5})
        self.assertFalse(is_benign(Element.of_file("2"), self.order.full(), test))

    def test_coupledMemberIsNotBenign(self):
        universe = subset(self.order, [1, 2, 3])
        self.assertFalse(is_benign(Element.of_file("1"), universe, coupled_test({1, 2})))
        self.assertTrue(is_benign(Element.of_file("3"), universe, coupled_test({1, 2})))

    def test_computeAv(self):
        test = additive_test({2: 0.5, 5: 0.25})
        self.assertEqual(subset(self.order, [2, 5]), compute_av(self.order.full(), test))

    def test_computeAvNothingInjected(self):
        self.assertEqual(self.order.empty(), compute_av(self.order.full(), additive_test({})))

    def test_computeAvEverythingInjected(self):
        test = additive_test({i: math.ldexp(1.0, -i) for i in range(1, 7)})
        self.assertEqual(self.order.full(), compute_av(self.order.full(), test))

    def test_benignRemovalKeepsScore(self):
        test = additive_test({2: 0.5, 5: 0.25})
        universe = self.order.full()
        full = test(universe).value
        for element in universe:
            if is_benign(element, universe, test):
                self.assertEqual(full, test(universe - [element]).value)

    def test_minimalSingleton(self):
        test = additive_test({2: 0.5, 5: 0.25})
        self.assertTrue(is_minimal_set(subset(self.order, [2]), self.order.full(), test))

    def test_independentPairIsNotMinimal(self):
        test = additive_test({2: 0.5, 5: 0.25})
        self.assertFalse(is_minimal_set(subset(self.order, [2, 5]), self.order.full(), test))

    def test_coupledPairIsMinimal(self):
        test = coupled_test({2, 5})
        self.assertTrue(is_minimal_set(subset(self.order, [2, 5]), self.order.full(), test))

    def test_candidateOutsideUniverse(self):
        universe = subset(self.order, [1, 2, 3])
        with self.assertRaises(ContractError):
            is_minimal_set(subset(self.order, [4]), universe, additive_test({}))

    def test_capExceeded(self):
        order = numbered(13)
        with self.assertRaises(OracleSizeError):
            compute_av(order.full(), additive_test({}))
        with self.assertRaises(OracleSizeError):
            is_benign(Element.of_file("1"), order.full(), additive_test({}))

    def test_customCap(self):
        with self.assertRaises(OracleSizeError):
            minimal_sets(self.order.full(), additive_test({}), cap=4)

    def test_verdictUnderUniqueError(self):
        verdict = oracle_verdict(self.order.full(), additive_test({1: 0.5, 4: 0.125}))
        self.assertEqual(subset(self.order, [1, 4]), verdict.av_set)
        self.assertEqual([subset(self.order, [1, 4])], list(verdict.minimal_sets))
        self.assertTrue(verdict.unique_minimal)

    def test_verdictUnderCollision(self):
        magnitudes = {1: 0.5, 2: -0.5, 3: 0.5}
        test = TestFn(lambda items: TestScore.measured(
            abs(math.fsum(magnitudes.get(int(e.file), 0.0) for e in items))))
        verdict = oracle_verdict(self.order.full(), test)
        self.assertEqual(subset(self.order, [1, 2, 3]), verdict.av_set)
        expected = [subset(self.order, [1]), subset(self.order, [2]), subset(self.order, [3])]
        self.assertEqual(expected, list(verdict.minimal_sets))
        self.assertFalse(verdict.unique_minimal)


class TestBisectAgreesWithOracle(unittest.TestCase):

    def test_randomInstances(self):
        rng = random.Random(19)
        for instance in range(200):
            n = rng.randint(1, 12)
            k = rng.randint(0, min(n, 5))
            project = generate_project(rng.getrandbits(32), n, 1, k)
            test = make_test_fn(project, Granularity.FILES)
            universe = project.all_files()

            verdict = oracle_verdict(universe, test)
            self.assertTrue(verdict.unique_minimal, f"instance {instance}")

            search = make_test_fn(project, Granularity.FILES)
            report = bisect_all(search, universe)
            self.assertEqual(verdict.av_set, ElementSet(report.found_elements, universe.order), f"instance {instance}")
            self.assertLessEqual(report.distinct_evaluations, evaluation_bound(len(report.found), n))


if __name__ == "__main__":
    unittest.main()
