"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : enums.py
Classes   : OptimizationLevel, ElementKind, ScoreMeta, ResultKind,
            ComparatorKind, AssertionStatus, Assumption, Granularity,
            InjectionMode, InjectionOutcome, CellStatus, ExitCode
Summary   : Enumerated values for consistency in coding
Imports   : Enum, IntEnum, unique
Example   : enums.ElementKind.FILE, enums.ElementKind.FILE.name,
            enums.ElementKind.FILE.value
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from enum import Enum, IntEnum, unique


# usage:
# enums.OptimizationLevel.O2
# enums.OptimizationLevel.O2.value ("O2")
# vendor levels (e.g. "Ofast", "fast") are carried as plain strings
@unique
class OptimizationLevel(Enum):
    O0 = "O0"
    O1 = "O1"
    O2 = "O2"
    O3 = "O3"


# unit of blame
@unique
class ElementKind(Enum):
    FILE = "file"
    SYMBOL = "symbol"


@unique
class ScoreMeta(Enum):
    MEASURED = "measured"
    BUILD_FAILURE = "build_failure"
    RUN_FAILURE = "run_failure"


# usage: enums.ResultKind.from_label("vector")
@unique
class ResultKind(Enum):
    SCALAR = "scalar"
    VECTOR = "vector"
    TEXT = "text"

    @classmethod
    def from_label(cls, label: str) -> "ResultKind":
        return cls((label or "").strip().lower())


@unique
class ComparatorKind(Enum):
    ABS_DIFF = "absdiff"
    L2_DIFF = "l2diff"
    REL_L2_DIFF = "rell2diff"
    EXACT_TEXT = "exacttext"

    @classmethod
    def from_label(cls, label: str) -> "ComparatorKind":
        clean = (label or "").strip().lower().replace("_", "").replace("-", "")
        return cls(clean)


@unique
class AssertionStatus(Enum):
    VERIFIED = "verified"
    VIOLATED = "violated"
    SKIPPED = "skipped"


# assumptions the searches rely on
@unique
class Assumption(Enum):
    UNIQUE_ERROR = "unique_error"           # distinct sets, distinct magnitudes
    SINGLETON_BLAME = "singleton_blame"     # each variable element scores alone
    FILE_DOMINANCE = "file_dominance"       # Test({f}) <= Test({F}) for f in F


@unique
class Granularity(Enum):
    FILES = "files"
    SYMBOLS = "symbols"


@unique
class InjectionMode(Enum):
    INDEPENDENT = "independent"
    COUPLED = "coupled"
    ZERO_MAGNITUDE = "zero-magnitude"
    NON_EXPORTED = "non-exported"
    COLLISION = "collision"


# row labels follow the injection study table
@unique
class InjectionOutcome(Enum):
    EXACT_FIND = "exact finds"
    INDIRECT_FIND = "indirect finds"
    WRONG_FIND = "wrong finds"
    MISSED_FIND = "missed finds"
    NOT_MEASURABLE = "not measurable"


@unique
class CellStatus(Enum):
    COMPLETED = "completed"
    FAILED = "failed"
    SKIPPED = "skipped"


# stable process exit codes for CI use
@unique
class ExitCode(IntEnum):
    SUCCESS = 0
    VARIABILITY_FOUND = 1
    CONFIG_ERROR = 2
    TOOLCHAIN_FAILURE = 3
    ASSUMPTION_VIOLATION = 4


if __name__ == "__main__":
    print(ComparatorKind.from_label("RelL2Diff"))
