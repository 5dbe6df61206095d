"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : bisection.py
Classes   : FoundElement, BisectReport, HierarchyReport
Summary   : Divide-and-conquer search for every variability-inducing element
            (bisect_all / bisect_one), with the dynamic verification
            assertions, and the two-level search files then symbols
Imports   : logging, math, dataclasses, enums, errors, element, testfn,
            testscore
Example   : report = bisect_all(test, order.full())
            print(report.found, report.assertion_status)
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from enums import AssertionStatus, Assumption
    from errors import BisectFailure, ContractError
    from element import Element, ElementSet
    from testfn import TestFn
    from testscore import TestScore
else:
    from .enums import AssertionStatus, Assumption
    from .errors import BisectFailure, ContractError
    from .element import Element, ElementSet
    from .testfn import TestFn
    from .testscore import TestScore

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FoundElement:
    element: Element
    score: TestScore

    def toJSON(self) -> dict:
        return {"element": self.element.toJSON(), "score": self.score.toJSON()}


@dataclass(frozen=True)
class BisectReport:
    found: tuple[FoundElement, ...]
    search_space_size: int
    distinct_evaluations: int
    total_calls: int
    assertion_status: AssertionStatus
    violated_assumptions: tuple[Assumption, ...] = ()
    possible_false_negatives: bool = False
    items_score: TestScore | None = None
    # files blamed on the way to `found` (two-level searches only)
    found_files: tuple[FoundElement, ...] = ()

    # first flagged assumption, None when nothing was violated
    @property
    def violated_assumption(self) -> Assumption | None:
        return self.violated_assumptions[0] if self.violated_assumptions else None

    @property
    def found_elements(self) -> list[Element]:
        return [f.element for f in self.found]

    def toJSON(self) -> dict:
        return {
            "found": [f.toJSON() for f in self.found],
            "search_space_size": self.search_space_size,
            "distinct_evaluations": self.distinct_evaluations,
            "total_calls": self.total_calls,
            "assertion_status": self.assertion_status.value,
            "violated_assumptions": [a.value for a in self.violated_assumptions],
            "possible_false_negatives": self.possible_false_negatives,
            "items_score": None if self.items_score is None else self.items_score.toJSON(),
            "found_files": [f.toJSON() for f in self.found_files]
        }


# the Test value, or BisectFailure when the build or run failed
def measure(test: TestFn, items: ElementSet) -> TestScore:
    score = test(items)
    if score.is_failure:
        raise BisectFailure(items, score)
    return score


# empty sets score 0 without a backend evaluation
def _measure_or_zero(test: TestFn, items: ElementSet) -> TestScore:
    if len(items) == 0:
        return TestScore.measured(0.0)
    return measure(test, items)


def split_in_half(items: ElementSet) -> tuple[ElementSet, ElementSet]:
    """first floor(n/2) elements in canonical order, then the remainder"""
    if len(items) < 2:
        raise ContractError(f"cannot split a set of {len(items)} element(s)")
    middle = len(items) // 2
    return items[:middle], items[middle:]


def bisect_one(test: TestFn, items: ElementSet, violations: set = None) -> tuple[ElementSet, ElementSet]:
    """(discard, found) for one variable element; caller ensures Test(items) > 0

    A singleton that scores 0 is recorded as a singleton-blame violation in
    `violations` and returned as discard with an empty found set.
    """
    while len(items) > 1:
        delta1, delta2 = split_in_half(items)
        if measure(test, delta1).value > 0:
            items = delta1
            continue
        discard, found = bisect_one(test, delta2, violations)
        return discard | delta1, found

    score = measure(test, items)
    if score.value > 0:
        return items, items
    logger.warning(f"{test.name}: singleton {items} scores 0, blame is not attributable to one element")
    if violations is not None:
        violations.add(Assumption.SINGLETON_BLAME)
    return items, items.order.empty()


def bisect_all(test: TestFn, items: ElementSet) -> BisectReport:
    """every variable element of items, verified by Test(items) = Test(found)"""
    if len(items) == 0:
        raise ContractError("bisect_all needs a nonempty set of items")
    start_evaluations = test.distinct_evaluations
    start_calls = test.total_calls

    violations = set()
    found = items.order.empty()
    remaining = items
    while _measure_or_zero(test, remaining).value > 0:
        discard, next_found = bisect_one(test, remaining, violations)
        found = found | next_found
        remaining = remaining - discard
        logger.debug(f"{test.name}: found {next_found}, {len(remaining)} element(s) left")

    items_score = measure(test, items)
    found_score = _measure_or_zero(test, found)
    if items_score.value != found_score.value:
        logger.warning(
            f"{test.name}: Test(items)={items_score.value!r} differs from "
            f"Test(found)={found_score.value!r}, results may hold false negatives")
        violations.update({Assumption.UNIQUE_ERROR, Assumption.SINGLETON_BLAME})

    ranked = sorted(
        (FoundElement(e, measure(test, ElementSet._trusted((e,), items.order))) for e in found),
        key=lambda f: (-f.score.value, items.order.position(f.element)))
    status = AssertionStatus.VIOLATED if violations else AssertionStatus.VERIFIED
    return BisectReport(
        found=tuple(ranked),
        search_space_size=len(items),
        distinct_evaluations=test.distinct_evaluations - start_evaluations,
        total_calls=test.total_calls - start_calls,
        assertion_status=status,
        violated_assumptions=tuple(a for a in Assumption if a in violations),
        possible_false_negatives=len(violations) > 0,
        items_score=items_score)


# distinct evaluations allowed for k found elements out of n
def evaluation_bound(k: int, n: int) -> int:
    return k * math.ceil(math.log2(max(n, 1))) + 2 * k + 2


@dataclass
class HierarchyReport:
    """File Bisect followed by Symbol Bisect inside each found file"""
    file_report: BisectReport
    symbol_reports: dict[str, BisectReport] = field(default_factory=dict)
    file_level_only: list[str] = field(default_factory=list)
    total_evaluations: int = 0

    @property
    def assertion_status(self) -> AssertionStatus:
        reports = [self.file_report, *self.symbol_reports.values()]
        if any(r.assertion_status == AssertionStatus.VIOLATED for r in reports):
            return AssertionStatus.VIOLATED
        if all(r.assertion_status == AssertionStatus.SKIPPED for r in reports):
            return AssertionStatus.SKIPPED
        return AssertionStatus.VERIFIED

    @property
    def found_files(self) -> list[Element]:
        return self.file_report.found_elements

    # symbols of all files, most influential first
    @property
    def found_symbols(self) -> list[FoundElement]:
        symbols = [f for r in self.symbol_reports.values() for f in r.found]
        return sorted(symbols, key=lambda f: -f.score.value)

    def toJSON(self) -> dict:
        return {
            "assertion_status": self.assertion_status.value,
            "total_evaluations": self.total_evaluations,
            "files": self.file_report.toJSON(),
            "symbols": {file: r.toJSON() for file, r in self.symbol_reports.items()},
            "file_level_only": list(self.file_level_only)
        }


def bisect_hierarchy(
    file_test: TestFn,
    files: ElementSet,
    symbols_of: Callable[[Element], ElementSet],
    symbol_test_of: Callable[[Element], TestFn | None],
    files_only: bool = False
) -> HierarchyReport:
    """bisect_all over files, then bisect_all over the symbols of each found file

    symbol_test_of returns None when a file cannot be searched deeper
    (its variability vanishes under the position-independence override).
    """
    file_report = bisect_all(file_test, files)
    report = HierarchyReport(file_report, total_evaluations=file_report.distinct_evaluations)
    if files_only:
        return report

    for found in file_report.found:
        file = found.element
        symbols = symbols_of(file)
        symbol_test = symbol_test_of(file) if len(symbols) > 0 else None
        if symbol_test is None:
            logger.info(f"{file}: searched at file level only")
            report.file_level_only.append(file.file)
            continue
        symbol_report = bisect_all(symbol_test, symbols)
        report.total_evaluations += symbol_test.distinct_evaluations
        if len(symbol_report.found) == 0 and symbol_report.assertion_status == AssertionStatus.VERIFIED:
            logger.info(f"{file}: no exported symbol carries the variability")
            report.file_level_only.append(file.file)
            continue
        report.symbol_reports[file.file] = symbol_report
    return report
