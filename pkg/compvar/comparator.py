"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : comparator.py
Classes   : Comparator
Summary   : Metric between a baseline test value and a candidate test value,
            with optional significant-digit truncation of both operands
Imports   : math, numpy, enums, errors, testscore
Example   : compare(TestValue.vector([3, 4]), TestValue.vector([0, 0]),
                    Comparator(ComparatorKind.L2_DIFF))  # 5.0
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
from dataclasses import dataclass
import math
import numpy as np

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from enums import ComparatorKind, ResultKind
    from errors import ComparisonError
    from testscore import TestScore, TestValue
else:
    from .enums import ComparatorKind, ResultKind
    from .errors import ComparisonError
    from .testscore import TestScore, TestValue


@dataclass(frozen=True)
class Comparator:
    kind: ComparatorKind = ComparatorKind.ABS_DIFF
    digits: int | None = None

    def __post_init__(self):
        if self.digits is not None and self.digits < 1:
            raise ValueError("digits must be a positive integer")

    @staticmethod
    def for_spec(spec) -> Comparator:
        return Comparator(spec.comparator, spec.digits)


# round to N significant decimal digits via decimal string formatting
def truncate_digits(value: float, digits: int) -> float:
    return float(f"{value:.{digits - 1}e}")


def _same_bits(a: float, b: float) -> bool:
    return a.hex() == b.hex()


# l2 norm scaled by the largest magnitude, so squares neither underflow nor overflow
def scaled_norm(values: np.ndarray) -> float:
    largest = float(np.max(np.abs(values))) if values.size > 0 else 0.0
    if largest == 0.0 or not np.isfinite(largest):
        return largest
    return largest * float(np.linalg.norm(values / largest))


def compare(baseline: TestValue, candidate: TestValue, cmp: Comparator) -> TestScore:
    """non-negative score, 0 when identical after any digit truncation"""
    if baseline.kind != candidate.kind:
        raise ComparisonError(
            f"result kind mismatch: baseline {baseline.kind.value}, candidate {candidate.kind.value}")

    if cmp.kind == ComparatorKind.EXACT_TEXT or baseline.kind == ResultKind.TEXT:
        if cmp.kind != ComparatorKind.EXACT_TEXT:
            raise ComparisonError(f"{cmp.kind.value} cannot compare text results")
        return TestScore.measured(0.0 if baseline.text == candidate.text else 1.0)

    if len(baseline.numbers) != len(candidate.numbers):
        raise ComparisonError(
            f"length mismatch: baseline {len(baseline.numbers)}, candidate {len(candidate.numbers)}")

    left, right = list(baseline.numbers), list(candidate.numbers)
    if cmp.digits is not None:
        left = [truncate_digits(v, cmp.digits) for v in left]
        right = [truncate_digits(v, cmp.digits) for v in right]

    # identical bits contribute nothing, even for NaN or infinities
    same = np.array([_same_bits(a, b) for a, b in zip(left, right)], dtype=bool)
    if same.all():
        return TestScore.measured(0.0)
    base = np.array(left, dtype=np.float64)
    cand = np.array(right, dtype=np.float64)
    with np.errstate(invalid="ignore", over="ignore"):
        diff = np.where(same, 0.0, base - cand)
    if not np.isfinite(diff).all():
        return TestScore.measured(float("inf"))

    if cmp.kind == ComparatorKind.ABS_DIFF:
        return TestScore.measured(float(np.sum(np.abs(diff))))
    if cmp.kind == ComparatorKind.L2_DIFF:
        return TestScore.measured(scaled_norm(diff))
    if cmp.kind == ComparatorKind.REL_L2_DIFF:
        diff_norm = scaled_norm(diff)
        if diff_norm == 0.0:
            return TestScore.measured(0.0)
        base_norm = scaled_norm(base)
        if base_norm == 0.0 or not np.isfinite(base_norm):
            raise ComparisonError("relative l2 difference against a zero or non-finite baseline norm")
        # a real difference never rounds down to "no variability"
        return TestScore.measured(max(diff_norm / base_norm, math.ulp(0.0)))
    raise ComparisonError(f"unsupported comparator {cmp.kind.value}")


if __name__ == "__main__":
    print(compare(TestValue.vector([3, 4]), TestValue.vector([0, 0]), Comparator(ComparatorKind.L2_DIFF)))
