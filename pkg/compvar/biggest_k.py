"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : biggest_k.py
Classes   : Frontier
Summary   : Uniform-cost search for the k symbols contributing the most
            variability, searching a file's symbols as soon as the file is
            isolated and stopping early once nothing left can beat the k-th
Imports   : heapq, itertools, logging, bisection, element, enums, testfn
Example   : report = bisect_biggest_k(test, files, 1, symbols_of, symbol_test_of)
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import heapq
import itertools
import logging
from typing import Callable

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from bisection import BisectReport, FoundElement, measure, split_in_half
    from element import Element, ElementSet
    from enums import AssertionStatus, Assumption
    from errors import ContractError
    from testfn import TestFn
else:
    from .bisection import BisectReport, FoundElement, measure, split_in_half
    from .element import Element, ElementSet
    from .enums import AssertionStatus, Assumption
    from .errors import ContractError
    from .testfn import TestFn

logger = logging.getLogger(__name__)


class Frontier(object):
    """max-priority queue of (score, set); equal scores pop in insertion order"""

    def __init__(self) -> None:
        self._heap = []
        self._counter = itertools.count()

    def push(self, score: float, items: ElementSet) -> None:
        # negated score makes heapq a max heap
        heapq.heappush(self._heap, (-score, next(self._counter), items))

    def pop_max(self) -> tuple[float, ElementSet]:
        negated, _, items = heapq.heappop(self._heap)
        return -negated, items

    def __len__(self) -> int:
        return len(self._heap)


def bisect_biggest_k(
    test: TestFn,
    all_files: ElementSet,
    k: int,
    symbols_of: Callable[[Element], ElementSet],
    symbol_test_of: Callable[[Element], TestFn | None] = None
) -> BisectReport:
    """files and the (at least) k biggest-contributing symbols, sorted descending

    The early exit assumes no symbol scores higher than its own file; when a
    found symbol breaks that, the report flags possible false negatives.
    symbol_test_of gives the per-file symbol Test (None: file level only);
    without it `test` is used for symbol sets too.
    """
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    start_evaluations = test.distinct_evaluations
    start_calls = test.total_calls

    found_files = []
    found_symbols = []
    symbol_tests = {}
    violations = set()
    kth_score = 0.0

    def push_split(frontier: Frontier, fn: TestFn, items: ElementSet) -> None:
        for half in split_in_half(items):
            frontier.push(measure(fn, half).value, half)

    file_frontier = Frontier()
    file_frontier.push(measure(test, all_files).value, all_files)
    while len(file_frontier) > 0:
        file_score, files = file_frontier.pop_max()
        if file_score <= kth_score:
            break
        if len(files) > 1:
            push_split(file_frontier, test, files)
            continue

        file = files[0]
        found_files.append(FoundElement(file, measure(test, files)))
        sym_test = test if symbol_test_of is None else symbol_test_of(file)
        all_symbols = symbols_of(file)
        if sym_test is None or len(all_symbols) == 0:
            logger.info(f"{file}: searched at file level only")
            continue
        if sym_test is not test:
            symbol_tests[file] = sym_test

        # the file's symbols are searched right away
        symbol_frontier = Frontier()
        symbol_frontier.push(measure(sym_test, all_symbols).value, all_symbols)
        while len(symbol_frontier) > 0:
            symbol_score, symbols = symbol_frontier.pop_max()
            if symbol_score <= kth_score:
                break
            if len(symbols) > 1:
                push_split(symbol_frontier, sym_test, symbols)
                continue
            found_symbols.append(FoundElement(symbols[0], measure(sym_test, symbols)))
            found_symbols.sort(key=lambda f: -f.score.value)
            if symbol_score > file_score:
                logger.warning(f"{symbols[0]} scores {symbol_score!r}, above its file's {file_score!r}")
                violations.add(Assumption.FILE_DOMINANCE)
            if len(found_symbols) >= k:
                kth_score = found_symbols[k - 1].score.value

    found_files.sort(key=lambda f: -f.score.value)
    evaluations = test.distinct_evaluations - start_evaluations
    evaluations += sum(fn.distinct_evaluations for fn in symbol_tests.values())
    calls = test.total_calls - start_calls
    calls += sum(fn.total_calls for fn in symbol_tests.values())
    return BisectReport(
        found=tuple(found_symbols),
        search_space_size=len(all_files),
        distinct_evaluations=evaluations,
        total_calls=calls,
        assertion_status=AssertionStatus.SKIPPED,
        violated_assumptions=tuple(a for a in Assumption if a in violations),
        possible_false_negatives=len(violations) > 0,
        items_score=measure(test, all_files),
        found_files=tuple(found_files))
