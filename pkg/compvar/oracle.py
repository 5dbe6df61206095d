"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : oracle.py
Classes   : OracleVerdict
Summary   : Brute-force ground truth over small universes: benign elements,
            the set of all variable elements, and minimal sets
Imports   : dataclasses, logging, bisection, element, errors, testfn,
            testscore
Example   : verdict = oracle_verdict(order.full(), test)
            verdict.av_set, verdict.unique_minimal
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import logging
from dataclasses import dataclass

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from bisection import measure
    from element import Element, ElementSet
    from errors import ContractError, OracleSizeError
    from testfn import TestFn
    from testscore import TestScore
else:
    from .bisection import measure
    from .element import Element, ElementSet
    from .errors import ContractError, OracleSizeError
    from .testfn import TestFn
    from .testscore import TestScore

logger = logging.getLogger(__name__)

# 2**12 = 4096 subsets
DEFAULT_CAP = 12


@dataclass(frozen=True)
class OracleVerdict:
    av_set: ElementSet
    minimal_sets: tuple[ElementSet, ...]
    unique_minimal: bool

    def toJSON(self) -> dict:
        return {
            "av_set": [str(e) for e in self.av_set],
            "minimal_sets": [[str(e) for e in s] for s in self.minimal_sets],
            "unique_minimal": self.unique_minimal
        }


def _check_cap(universe: ElementSet, cap: int) -> None:
    if len(universe) > cap:
        raise OracleSizeError(
            f"universe of {len(universe)} elements exceeds the brute-force cap of {cap}")


def _subset(universe: ElementSet, mask: int) -> ElementSet:
    return ElementSet._trusted(
        tuple(e for i, e in enumerate(universe) if mask >> i & 1), universe.order)


def _mask_of(items: ElementSet, universe: ElementSet) -> int:
    index = {e: i for i, e in enumerate(universe)}
    mask = 0
    for element in items:
        if element not in index:
            raise ContractError(f"{element} is not in the universe")
        mask |= 1 << index[element]
    return mask


# Test value of every subset, indexed by bitmask
def score_table(universe: ElementSet, test: TestFn) -> list[float]:
    return [measure(test, _subset(universe, mask)).value for mask in range(1 << len(universe))]


def is_benign(x: Element, universe: ElementSet, test: TestFn, cap: int = DEFAULT_CAP) -> bool:
    """True when adding x never changes any Test value over subsets of universe"""
    _check_cap(universe, cap)
    bit = _mask_of(ElementSet._trusted((x,), universe.order), universe)
    table = score_table(universe, test)
    return all(table[mask] == table[mask | bit] for mask in range(len(table)))


def compute_av(universe: ElementSet, test: TestFn, cap: int = DEFAULT_CAP) -> ElementSet:
    """universe minus its benign elements"""
    _check_cap(universe, cap)
    table = score_table(universe, test)
    variable = []
    for i, element in enumerate(universe):
        bit = 1 << i
        if any(table[mask] != table[mask | bit] for mask in range(len(table))):
            variable.append(element)
    return ElementSet._trusted(tuple(variable), universe.order)


# every proper submask of mask scores 0
def _proper_subsets_zero(table: list[float], mask: int) -> bool:
    sub = (mask - 1) & mask
    while True:
        if table[sub] > 0:
            return False
        if sub == 0:
            return True
        sub = (sub - 1) & mask


def is_minimal_set(candidate: ElementSet, universe: ElementSet, test: TestFn, cap: int = DEFAULT_CAP) -> bool:
    """Test(candidate) > 0 and every proper subset of candidate scores 0"""
    _check_cap(universe, cap)
    mask = _mask_of(candidate, universe)
    table = score_table(universe, test)
    if table[mask] <= 0:
        return False
    return mask == 0 or _proper_subsets_zero(table, mask)


def minimal_sets(universe: ElementSet, test: TestFn, cap: int = DEFAULT_CAP) -> list[ElementSet]:
    _check_cap(universe, cap)
    table = score_table(universe, test)
    found = []
    for mask in range(len(table)):
        if table[mask] > 0 and (mask == 0 or _proper_subsets_zero(table, mask)):
            found.append(_subset(universe, mask))
    return found


def derived_test(test: TestFn, universe: ElementSet) -> TestFn:
    """boolean Test'(Y) = 1 when Test(Y) equals Test(universe), else 0"""
    full = measure(test, universe).value

    def evaluate(items: ElementSet) -> TestScore:
        return TestScore.measured(1.0 if measure(test, items).value == full else 0.0)

    return TestFn(evaluate, f"{test.name}'")


def oracle_verdict(universe: ElementSet, test: TestFn, cap: int = DEFAULT_CAP) -> OracleVerdict:
    av = compute_av(universe, test, cap)
    sets = minimal_sets(universe, derived_test(test, universe), cap)
    unique = len(sets) == 1 and sets[0] == av
    if not unique:
        logger.info(f"{test.name}: {len(sets)} minimal set(s), AV set is not the unique one")
    return OracleVerdict(av, tuple(sets), unique)
