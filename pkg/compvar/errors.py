"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : errors.py
Classes   : CompVarError and subclasses
Summary   : Exception hierarchy shared by all CompVar modules
Imports   :
Example   : raise ConfigError("[tests.kahan] default_input is empty")
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""


class CompVarError(Exception):
    """base class for all CompVar errors"""


class ConfigError(CompVarError):
    """invalid or incomplete configuration"""


class ManifestError(CompVarError):
    """element does not belong to the project manifest"""


class ComparisonError(CompVarError):
    """baseline and candidate values cannot be compared"""


class ContractError(CompVarError):
    """operation called outside its precondition"""


class OracleSizeError(CompVarError):
    """brute-force universe larger than the configured cap"""


class RecordError(CompVarError):
    """missing or corrupt persisted record"""

    def __init__(self, message: str, path: str = "", line: int = None) -> None:
        location = path if line is None else f"{path}:{line}"
        super().__init__(f"{location}: {message}" if location else message)
        self.path = path
        self.line = line


class ToolchainError(CompVarError):
    """external tool failure, carries captured diagnostics"""

    def __init__(self, message: str, diagnostics: str = "") -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or ""


class BuildError(ToolchainError):
    """compile, link or symbol-rewrite failure"""


class RunError(ToolchainError):
    """test executable exited nonzero, timed out or wrote malformed output"""


class BisectFailure(CompVarError):
    """a Test evaluation failed (build or run) during a search"""

    def __init__(self, items, score) -> None:
        super().__init__(
            f"Test failed with {score.meta.value} on {len(items)} element(s): "
            f"{score.diagnostics.strip()[:200]}")
        self.items = items
        self.score = score
