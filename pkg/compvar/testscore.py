"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : testscore.py
Classes   : TestScore, TestSpec, TestValue
Summary   : The user-facing metric value (0 means reproducible), the
            description of one user test, and a decoded test output
Imports   : math, dataclasses, enums, errors
Example   : score = TestScore.measured(0.25)
            spec = TestSpec("kahan", 3, [1.0, 1e-16, 1e4])
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import math
from dataclasses import dataclass, field

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from enums import ScoreMeta, ResultKind, ComparatorKind
    from errors import ConfigError
else:
    from .enums import ScoreMeta, ResultKind, ComparatorKind
    from .errors import ConfigError


@dataclass(frozen=True)
class TestScore:
    __test__ = False    # not a test case

    value: float | None
    meta: ScoreMeta = ScoreMeta.MEASURED
    diagnostics: str = field(default="", compare=False)

    def __post_init__(self):
        if self.meta == ScoreMeta.MEASURED:
            if self.value is None or math.isnan(self.value) or self.value < 0:
                raise ValueError(f"measured score must be a non-negative number, got {self.value}")
        elif self.value is not None:
            raise ValueError("failure scores carry no value")

    @staticmethod
    def measured(value: float) -> TestScore:
        return TestScore(float(value), ScoreMeta.MEASURED)

    @staticmethod
    def build_failure(diagnostics: str = "") -> TestScore:
        return TestScore(None, ScoreMeta.BUILD_FAILURE, diagnostics)

    @staticmethod
    def run_failure(diagnostics: str = "") -> TestScore:
        return TestScore(None, ScoreMeta.RUN_FAILURE, diagnostics)

    @property
    def is_failure(self) -> bool:
        return self.meta != ScoreMeta.MEASURED

    # a failure is never treated as 0, nor as variability
    @property
    def is_variable(self) -> bool:
        return self.meta == ScoreMeta.MEASURED and self.value > 0

    def __str__(self):
        if self.is_failure:
            return self.meta.value
        return repr(self.value)

    def toJSON(self) -> dict:
        data = {"meta": self.meta.value, "value": self.value}
        if self.is_failure:
            data["value"] = None
            data["diagnostics"] = self.diagnostics
        elif math.isinf(self.value):
            data["value"] = "inf"
        return data

    @staticmethod
    def fromJSON(data: dict) -> TestScore:
        meta = ScoreMeta(data.get("meta", "measured"))
        if meta != ScoreMeta.MEASURED:
            return TestScore(None, meta, data.get("diagnostics", ""))
        return TestScore.measured(float(data.get("value")))


def scores_equal(a: TestScore, b: TestScore, epsilon: float = 0.0) -> bool:
    """exact equality of measured values, optionally within an absolute epsilon"""
    if a.is_failure or b.is_failure:
        return False
    if epsilon <= 0.0:
        return a.value == b.value
    return abs(a.value - b.value) <= epsilon


@dataclass(frozen=True)
class TestValue:
    """one decoded test output; numbers for Scalar/Vector, text for Text"""
    __test__ = False

    kind: ResultKind
    numbers: tuple[float, ...] = ()
    text: str = ""

    @staticmethod
    def scalar(value: float) -> TestValue:
        return TestValue(ResultKind.SCALAR, (float(value),))

    @staticmethod
    def vector(values) -> TestValue:
        return TestValue(ResultKind.VECTOR, tuple(float(v) for v in values))

    @staticmethod
    def of_text(text: str) -> TestValue:
        return TestValue(ResultKind.TEXT, (), text)

    # chunked runs are joined in order
    @staticmethod
    def concatenate(values: list[TestValue]) -> TestValue:
        if len(values) == 1:
            return values[0]
        kinds = {v.kind for v in values}
        if len(kinds) != 1:
            raise ValueError(f"cannot concatenate mixed result kinds {sorted(k.value for k in kinds)}")
        kind = kinds.pop()
        if kind == ResultKind.TEXT:
            return TestValue(kind, (), "".join(v.text for v in values))
        return TestValue(kind, tuple(n for v in values for n in v.numbers))

    def toJSON(self) -> dict:
        if self.kind == ResultKind.TEXT:
            return {"kind": self.kind.value, "text": self.text}
        return {"kind": self.kind.value, "numbers": [n.hex() for n in self.numbers]}


@dataclass(frozen=True)
class TestSpec:
    """one user test: name, input chunking, default input and result shape"""
    __test__ = False

    name: str
    inputs_per_run: int = 0
    default_input: tuple[float, ...] = ()
    result_kind: ResultKind = ResultKind.SCALAR
    comparator: ComparatorKind = ComparatorKind.ABS_DIFF
    digits: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "default_input", tuple(float(v) for v in self.default_input))
        if len(self.name.strip()) == 0:
            raise ConfigError("test name must be non-empty")
        if self.inputs_per_run < 0:
            raise ConfigError(f"[tests.{self.name}] inputs_per_run must be >= 0")
        if self.inputs_per_run > 0:
            count = len(self.default_input)
            if count == 0 or count % self.inputs_per_run != 0:
                raise ConfigError(
                    f"[tests.{self.name}] default_input has {count} values, "
                    f"not a positive multiple of inputs_per_run={self.inputs_per_run}")
        if self.digits is not None and self.digits < 1:
            raise ConfigError(f"[tests.{self.name}] digits must be a positive integer")
        text_kind = self.result_kind == ResultKind.TEXT
        text_cmp = self.comparator == ComparatorKind.EXACT_TEXT
        if text_kind != text_cmp:
            raise ConfigError(
                f"[tests.{self.name}] comparator {self.comparator.value} "
                f"does not fit result_kind {self.result_kind.value}")

    # the input split into one list per executable run
    def chunks(self) -> list[tuple[float, ...]]:
        if self.inputs_per_run == 0:
            return [self.default_input]
        n = self.inputs_per_run
        return [self.default_input[i:i + n] for i in range(0, len(self.default_input), n)]

    def toJSON(self) -> dict:
        return {
            "name": self.name,
            "inputs_per_run": self.inputs_per_run,
            "default_input": list(self.default_input),
            "result_kind": self.result_kind.value,
            "comparator": self.comparator.value,
            "digits": self.digits
        }
