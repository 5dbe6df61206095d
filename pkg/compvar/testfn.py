"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : testfn.py
Classes   : TestFn
Summary   : Memoizing wrapper around a backend Test function, counting
            distinct evaluations and total calls
Imports   : logging, element, testscore
Example   : test = TestFn(lambda items: TestScore.measured(len(items)), "size")
            test(order.full())
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import logging
from typing import Callable

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from element import ElementSet
    from testscore import TestScore
else:
    from .element import ElementSet
    from .testscore import TestScore

logger = logging.getLogger(__name__)


class TestFn(object):
    """deterministic Test: ElementSet -> TestScore, evaluated once per set"""
    __test__ = False

    def __init__(self,
        evaluate: Callable[[ElementSet], TestScore],
        name: str = "test",
        on_evaluate: Callable[[ElementSet, TestScore], None] = None
    ) -> None:
        self._evaluate = evaluate
        self._name = name
        self._on_evaluate = on_evaluate
        self._memo = {}
        self._history = []
        self._total_calls = 0

    @property
    def name(self) -> str: return self._name

    # cache misses only
    @property
    def distinct_evaluations(self) -> int: return len(self._history)

    @property
    def total_calls(self) -> int: return self._total_calls

    # (set, score) pairs in evaluation order
    @property
    def history(self) -> list[tuple[ElementSet, TestScore]]: return list(self._history)

    def __call__(self, items: ElementSet) -> TestScore:
        self._total_calls += 1
        score = self._memo.get(items)
        if score is None:
            score = self._evaluate(items)
            self._memo[items] = score
            self._history.append((items, score))
            logger.debug(f"{self._name}: Test({len(items)} element(s)) = {score}")
            if self._on_evaluate is not None:
                self._on_evaluate(items, score)
        return score

    def is_cached(self, items: ElementSet) -> bool:
        return items in self._memo
