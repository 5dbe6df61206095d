"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : compilation.py
Classes   : Compilation
Summary   : Compilation class - the (compiler, optimization level, switches)
            triple identifying how a translation unit is built
Imports   : hashlib, shlex, enums
Example   : comp = Compilation("gcc", "O3", ["-ffast-math"])
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations  # to refer to Compilation in static methods
import hashlib
import shlex

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from enums import OptimizationLevel
else:
    from .enums import OptimizationLevel


class Compilation(object):
    __slots__ = ("_compiler_id", "_optimization_level", "_switches")

    def __init__(self,
        compiler_id: str,
        optimization_level: str | OptimizationLevel = OptimizationLevel.O0,
        switches: list[str] | tuple[str, ...] | str = ()
    ) -> None:
        clean_id = (compiler_id or "").strip()
        if len(clean_id) == 0:
            raise ValueError("compiler_id must be a non-empty string")
        if isinstance(optimization_level, OptimizationLevel):
            optimization_level = optimization_level.value
        clean_level = (optimization_level or "").strip().lstrip("-")
        if len(clean_level) == 0:
            raise ValueError("optimization_level must be a non-empty string")
        # a single string may carry several flags ("-mavx2 -mfma")
        if isinstance(switches, str):
            switches = shlex.split(switches)
        # duplicate-free, first occurrence wins (flag order can matter)
        ordered = []
        for switch in switches:
            clean = (switch or "").strip()
            if clean and clean not in ordered:
                ordered.append(clean)
        object.__setattr__(self, "_compiler_id", clean_id)
        object.__setattr__(self, "_optimization_level", clean_level)
        object.__setattr__(self, "_switches", tuple(ordered))

    def __setattr__(self, name, value):
        raise AttributeError("Compilation is immutable")

    @property
    def compiler_id(self) -> str: return self._compiler_id

    @property
    def optimization_level(self) -> str: return self._optimization_level

    @property
    def switches(self) -> tuple[str, ...]: return self._switches

    # True for O0..O3, False for vendor levels such as "Ofast"
    @property
    def is_standard_level(self) -> bool:
        return self._optimization_level in {lvl.value for lvl in OptimizationLevel}

    # command line fragment, e.g. ["-O3", "-ffast-math"]
    def flags(self) -> list[str]:
        return [f"-{self.optimization_level}", *self.switches]

    # short stable identifier usable in file names and CSV columns,
    # e.g. "gcc_O3_-ffast-math"
    def to_id(self) -> str:
        parts = [self.compiler_id, self.optimization_level, *self.switches]
        return "_".join(part.replace(" ", "").replace("/", "-") for part in parts)

    # hashed key, used where the id may be too long for a path
    def digest(self, length: int = 12) -> str:
        return hashlib.sha256(self.to_id().encode("utf-8")).hexdigest()[:length]

    def __str__(self):
        return " ".join([self.compiler_id, *self.flags()])

    def __repr__(self):
        return f"Compilation({self.compiler_id!r}, {self.optimization_level!r}, {list(self.switches)!r})"

    def __eq__(self, other):
        if isinstance(other, Compilation):
            return self._key() == other._key()
        return False

    def __hash__(self):
        return hash(self._key())

    def _key(self) -> tuple:
        return (self.compiler_id, self.optimization_level, self.switches)

    # JSON representation of this instance (as python dict)
    def toJSON(self) -> dict:
        return {
            "compiler": self.compiler_id,
            "level": self.optimization_level,
            "switches": list(self.switches)
        }

    @staticmethod
    def fromJSON(data: dict) -> Compilation:
        return Compilation(
            compiler_id=data.get("compiler", ""),
            optimization_level=data.get("level", ""),
            switches=data.get("switches", [])
        )


if __name__ == "__main__":
    comp = Compilation("gcc", "O3", "-mavx2 -mfma -mavx2")
    print(comp, comp.to_id())
