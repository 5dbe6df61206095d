"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : toolchain.py
Classes   : Weakening, BuildPlan, DeterminismVerdict, ToolchainBackend
Summary   : Real builds: compile objects per compilation (cached), link
            mixed executables, weaken symbols to mix function versions
            inside one file, run test executables and score their output
            against the correctness baseline
Imports   : hashlib, json, logging, os, shutil, subprocess, tempfile,
            threading, time, concurrent.futures, dataclasses, pathlib,
            comparator, compilation, config, element, errors, testscore,
            wirelib
Example   : backend = ToolchainBackend(manifest, Path("results"))
            exe = backend.build_mixed(BuildPlan(candidate, baseline, ("kahan.cpp",)))
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import hashlib
import json
import logging
import os
import shutil
import subprocess
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from comparator import Comparator, compare
    from compilation import Compilation
    from config import ProjectManifest
    from element import Element, ElementOrder, ElementSet
    from errors import BuildError, ComparisonError, ConfigError, RunError, ToolchainError
    from testscore import TestScore, TestSpec, TestValue
    import wirelib
else:
    from .comparator import Comparator, compare
    from .compilation import Compilation
    from .config import ProjectManifest
    from .element import Element, ElementOrder, ElementSet
    from .errors import BuildError, ComparisonError, ConfigError, RunError, ToolchainError
    from .testscore import TestScore, TestSpec, TestValue
    from . import wirelib

logger = logging.getLogger(__name__)

# console excerpt of tool diagnostics; run records keep the full text
DIAGNOSTIC_EXCERPT = 400
# nm types of defined global data (bss, data, small data, read-only)
DATA_TYPES = frozenset("BDGRS")
# header files hashed into every object key
HEADER_SUFFIXES = frozenset({".h", ".hh", ".hpp", ".hxx", ".inc"})


@dataclass(frozen=True)
class Weakening:
    """one file mixed at symbol level: `chosen` symbols come from the
    candidate copy, every other symbol in `symbols` from the baseline copy"""
    file: str
    chosen: tuple[str, ...]
    symbols: tuple[str, ...]

    @property
    def complement(self) -> tuple[str, ...]:
        picked = set(self.chosen)
        return tuple(s for s in self.symbols if s not in picked)


@dataclass(frozen=True)
class BuildPlan:
    candidate: Compilation
    baseline: Compilation
    candidate_files: tuple[str, ...] = ()
    pic_override: bool = False
    weakened: Weakening | None = None

    def __post_init__(self):
        if self.weakened is not None and not self.pic_override:
            raise ValueError("symbol-level mixing needs the position-independence override")

    def compilation_of(self, file: str) -> Compilation:
        return self.candidate if file in self.candidate_files else self.baseline

    def toJSON(self) -> dict:
        data = {
            "candidate": self.candidate.toJSON(),
            "baseline": self.baseline.toJSON(),
            "candidate_files": list(self.candidate_files),
            "pic_override": self.pic_override
        }
        if self.weakened is not None:
            data["weakened"] = {"file": self.weakened.file, "chosen": list(self.weakened.chosen)}
        return data

    def key(self) -> str:
        text = json.dumps(self.toJSON(), sort_keys=True)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


@dataclass
class DeterminismVerdict:
    deterministic: bool
    runs: int
    offending: list[str] = field(default_factory=list)
    details: dict[str, list[str]] = field(default_factory=dict)

    def toJSON(self) -> dict:
        return {
            "deterministic": self.deterministic,
            "runs": self.runs,
            "offending": list(self.offending),
            "details": self.details
        }


class ToolchainBackend(object):
    """drives compilers, the linker, nm and objcopy for one project"""

    def __init__(self, manifest: ProjectManifest, results_dir: Path, jobs: int = None) -> None:
        self._manifest = manifest
        self._results = Path(results_dir).resolve()
        self._objects = self._results / "objects"
        self._runs = self._results / "runs"
        self._build = self._results / "build"
        for path in (self._objects, self._runs, self._build):
            path.mkdir(parents=True, exist_ok=True)
        self._jobs = jobs or manifest.run.jobs
        self._locks = {}
        self._locks_guard = threading.Lock()
        self._baseline_outputs = {}
        self._symbol_tables = {}
        self._source_digests = {}
        self._headers = None
        self.compile_count = 0
        self.cache_hits = 0

    @property
    def manifest(self) -> ProjectManifest: return self._manifest

    @property
    def results_dir(self) -> Path: return self._results

    @property
    def jobs(self) -> int: return self._jobs

    # scrubbed environment: listed variables plus fixed ones
    def environment(self) -> dict[str, str]:
        env = {name: os.environ[name] for name in self._manifest.run.env if name in os.environ}
        env.update(dict(self._manifest.run.set_env))
        return env

    def resolve_binary(self, compiler_id: str) -> str | None:
        return shutil.which(self._manifest.compiler(compiler_id).binary)

    def _run_tool(self, command: list[str], what: str, cwd: Path = None) -> subprocess.CompletedProcess:
        logger.debug(" ".join(command))
        try:
            completed = subprocess.run(
                command, cwd=cwd, env=self.environment(), capture_output=True,
                encoding="utf-8", errors="replace",
                timeout=self._manifest.run.timeout)
        except FileNotFoundError as e:
            raise BuildError(f"{what}: tool not found ({e.filename})", str(e)) from None
        except subprocess.TimeoutExpired as e:
            raise BuildError(f"{what}: timed out after {e.timeout}s", str(e.stderr or "")) from None
        if completed.returncode != 0:
            diagnostics = (completed.stderr or "") + (completed.stdout or "")
            logger.warning(f"{what} failed: {diagnostics.strip()[:DIAGNOSTIC_EXCERPT]}")
            raise BuildError(f"{what} failed with exit code {completed.returncode}", diagnostics)
        return completed

    def _lock_for(self, key: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(key, threading.Lock())

    def compile_command(self, file: str, comp: Compilation, pic: bool, output: Path) -> list[str]:
        compiler = self._manifest.compiler(comp.compiler_id)
        command = [compiler.binary, *compiler.fixed_flags, *self._manifest.cxxflags, *comp.flags()]
        if pic:
            command.append(compiler.pic_flag)
        return command + ["-c", str(self._manifest.root / file), "-o", str(output)]

    def _project_headers(self) -> list[Path]:
        if self._headers is None:
            root = self._manifest.root
            self._headers = sorted(
                p for p in root.rglob("*")
                if p.suffix in HEADER_SUFFIXES and p.is_file() and self._results not in p.parents)
        return self._headers

    def source_digest(self, file: str) -> str:
        """hash of the source bytes and of every header under the project root"""
        if file not in self._source_digests:
            path = self._manifest.root / file
            if not path.is_file():
                raise ConfigError(f"source file not found: {path}")
            sha = hashlib.sha256(path.read_bytes())
            for header in self._project_headers():
                sha.update(str(header.relative_to(self._manifest.root)).encode("utf-8"))
                sha.update(header.read_bytes())
            self._source_digests[file] = sha.hexdigest()
        return self._source_digests[file]

    def object_path(self, file: str, comp: Compilation, pic: bool = False) -> Path:
        # keyed on the whole command line and the source contents
        command = self.compile_command(file, comp, pic, Path("<output>"))
        key = json.dumps([command, self.source_digest(file)])
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]
        return self._objects / f"{Path(file).stem}-{digest}.o"

    def compile_object(self, file: str, comp: Compilation, pic: bool = False) -> Path:
        """object file for (file, compilation, pic), compiled at most once"""
        target = self.object_path(file, comp, pic)
        with self._lock_for(str(target)):
            if target.exists():
                self.cache_hits += 1
                return target
            handle, temp = tempfile.mkstemp(suffix=".o", dir=self._objects)
            os.close(handle)
            try:
                self._run_tool(self.compile_command(file, comp, pic, Path(temp)), f"compile {file} ({comp})")
                os.replace(temp, target)
            finally:
                if os.path.exists(temp):
                    os.remove(temp)
            self.compile_count += 1
        return target

    def compile_objects(self, requests: list[tuple[str, Compilation, bool]]) -> list[Path]:
        if self._jobs <= 1 or len(requests) <= 1:
            return [self.compile_object(*request) for request in requests]
        with ThreadPoolExecutor(max_workers=self._jobs) as executor:
            return list(executor.map(lambda request: self.compile_object(*request), requests))

    def link(self, objects: list[Path], output: Path) -> Path:
        linker = self._manifest.linker_config
        command = [linker.binary, *linker.fixed_flags, *[str(o) for o in objects],
                   *self._manifest.link_flags, "-o", str(output)]
        self._run_tool(command, f"link {output.name}")
        return output

    def _executable_path(self, plan: BuildPlan, requests: list[tuple[str, Compilation, bool]]) -> Path:
        linker = self._manifest.linker_config
        key = json.dumps([
            plan.key(),
            [self.object_path(*request).name for request in requests],
            [linker.binary, *linker.fixed_flags, *self._manifest.link_flags],
            self._manifest.tools.objcopy])
        return self._build / f"mixed-{hashlib.sha256(key.encode('utf-8')).hexdigest()[:16]}"

    def build_mixed(self, plan: BuildPlan) -> Path:
        """link one executable from per-file objects of the plan's compilations"""
        if plan.weakened is not None:
            return self.weaken_and_link(plan)
        for name in plan.candidate_files:
            if name not in self._manifest.files:
                raise ConfigError(f"{name} is not a project file")
        requests = [(name, plan.compilation_of(name), False) for name in self._manifest.files]
        output = self._executable_path(plan, requests)
        if output.exists():
            return output
        return self.link(self.compile_objects(requests), output)

    # symbols to weaken in the candidate copy: unchosen functions and every
    # defined non-function global (the baseline copy's definitions win)
    def _candidate_weak_names(self, obj: Path, weakening: Weakening) -> list[str]:
        names = list(weakening.complement)
        for entry in self.read_symbol_table(obj):
            if entry.type in DATA_TYPES and entry.name not in names:
                names.append(entry.name)
        return names

    def _weaken_copy(self, source: Path, names: list[str], output: Path) -> Path:
        command = [self._manifest.tools.objcopy, *[f"--weaken-symbol={n}" for n in names], str(source), str(output)]
        self._run_tool(command, f"weaken {source.name}")
        return output

    def weaken_and_link(self, plan: BuildPlan) -> Path:
        """candidate copy weakens the complement, baseline copy weakens the
        chosen set; the linker keeps the strong definition of each symbol"""
        weakening = plan.weakened
        if weakening is None:
            raise ValueError("weaken_and_link needs a plan with a weakened file")
        others = [name for name in self._manifest.files if name != weakening.file]
        requests = [(name, plan.compilation_of(name), False) for name in others]
        requests += [(weakening.file, plan.candidate, True), (weakening.file, plan.baseline, True)]
        output = self._executable_path(plan, requests)
        if output.exists():
            return output
        objects = self.compile_objects(requests)
        candidate_obj, baseline_obj = objects[-2], objects[-1]

        stem = output.name
        candidate_copy = self._weaken_copy(
            candidate_obj, self._candidate_weak_names(candidate_obj, weakening),
            self._build / f"{stem}-candidate.o")
        baseline_copy = self._weaken_copy(
            baseline_obj, list(weakening.chosen), self._build / f"{stem}-baseline.o")
        return self.link(objects[:-2] + [candidate_copy, baseline_copy], output)

    def read_symbol_table(self, obj: Path) -> list[wirelib.SymbolEntry]:
        """defined symbols of an object in symbol-table order"""
        key = str(obj)
        if key not in self._symbol_tables:
            if not Path(obj).is_file():
                raise BuildError(f"cannot read symbols: {obj} does not exist")
            listing = self._run_tool([self._manifest.tools.nm, "--defined-only", "-p", str(obj)], f"nm {Path(obj).name}")
            entries = [e for e in map(wirelib.parse_nm_line, listing.stdout.splitlines()) if e is not None]
            self._symbol_tables[key] = entries
        return self._symbol_tables[key]

    def demangled_names(self, obj: Path) -> list[str]:
        listing = self._run_tool([self._manifest.tools.nm, "--defined-only", "-p", "-C", str(obj)], f"nm -C {Path(obj).name}")
        return [e.name for e in map(wirelib.parse_nm_line, listing.stdout.splitlines()) if e is not None]

    def list_exported_symbols(self, file: str, objects: list[Path]) -> ElementSet:
        """global strong function symbols of the file's objects, first object's
        order first; demangled names carried for display"""
        elements = []
        seen = set()
        for obj in objects:
            entries = self.read_symbol_table(obj)
            demangled = self.demangled_names(obj)
            if len(demangled) != len(entries):
                demangled = [e.name for e in entries]
            for entry, display in zip(entries, demangled):
                if entry.is_exported_function and entry.name not in seen:
                    seen.add(entry.name)
                    elements.append(Element.of_symbol(file, entry.name, True, display))
        return ElementOrder(elements).full()

    def _input_path(self, spec: TestSpec, chunk: int) -> Path:
        inputs = self._build / "inputs"
        inputs.mkdir(exist_ok=True)
        return inputs / f"{spec.name}-{chunk}.txt"

    def run_test_executable(self, executable: Path, spec: TestSpec) -> TestValue:
        """run every input chunk of the test, outputs concatenated in order"""
        values = []
        for index, chunk in enumerate(spec.chunks()):
            path = self._input_path(spec, index)
            path.write_text(wirelib.format_input(chunk), encoding="utf-8")
            command = [str(executable), "--test", spec.name, "--input", str(path)]
            logger.debug(" ".join(command))
            # stdout stays bytes: STRING payloads are byte-framed
            try:
                completed = subprocess.run(
                    command, cwd=self._manifest.root, env=self.environment(),
                    capture_output=True, timeout=self._manifest.run.timeout)
            except subprocess.TimeoutExpired as e:
                raise RunError(f"{spec.name}: timed out after {e.timeout}s") from None
            except OSError as e:
                raise RunError(f"{spec.name}: cannot execute {executable}: {e}") from None
            if completed.returncode != 0:
                stderr = (completed.stderr or b"").decode("utf-8", errors="replace")
                raise RunError(f"{spec.name}: exited with code {completed.returncode}", stderr)
            try:
                values.append(wirelib.parse_output(completed.stdout))
            except RunError as e:
                raise RunError(f"{spec.name}: {e}", e.diagnostics) from None
        return TestValue.concatenate(values)

    def time_test_executable(self, executable: Path, spec: TestSpec) -> float:
        start = time.perf_counter()
        self.run_test_executable(executable, spec)
        return time.perf_counter() - start

    def baseline_plan(self) -> BuildPlan:
        baseline = self._manifest.correctness_baseline
        return BuildPlan(baseline, baseline)

    def baseline_output(self, spec: TestSpec) -> TestValue:
        """correctness-baseline output of one test, computed once"""
        if spec.name not in self._baseline_outputs:
            executable = self.build_mixed(self.baseline_plan())
            self._baseline_outputs[spec.name] = self.run_test_executable(executable, spec)
        return self._baseline_outputs[spec.name]

    def score_executable(self, executable: Path, specs: list[TestSpec]) -> TestScore:
        """max comparison score over the specs; failures become failure scores"""
        best = 0.0
        for spec in specs:
            try:
                value = self.run_test_executable(executable, spec)
                score = compare(self.baseline_output(spec), value, Comparator.for_spec(spec))
            except BuildError as e:
                return TestScore.build_failure(f"{e}\n{e.diagnostics}")
            except RunError as e:
                return TestScore.run_failure(f"{e}\n{e.diagnostics}")
            except ComparisonError as e:
                return TestScore.run_failure(str(e))
            best = max(best, score.value)
        return TestScore.measured(best)

    def evaluate_plan(self, plan: BuildPlan, specs: list[TestSpec]) -> TestScore:
        """Test value of one mixed build, recorded in results/runs/"""
        start = time.perf_counter()
        try:
            executable = self.build_mixed(plan)
        except BuildError as e:
            score = TestScore.build_failure(f"{e}\n{e.diagnostics}")
        else:
            score = self.score_executable(executable, specs)
        self._record_run(plan, specs, score, time.perf_counter() - start)
        return score

    def _record_run(self, plan: BuildPlan, specs: list[TestSpec], score: TestScore, seconds: float) -> None:
        record = {
            "plan": plan.toJSON(),
            "tests": [s.name for s in specs],
            "score": score.toJSON(),
            "seconds": round(seconds, 6)
        }
        path = self._runs / f"{plan.candidate.to_id()}.jsonl"
        with open(path, "a", encoding="utf-8") as f:
            f.write(json.dumps(record) + "\n")

    def check_determinism(self, specs: list[TestSpec] = None, runs: int = None) -> DeterminismVerdict:
        """run every test `runs` times under the baseline, outputs must be bit-identical"""
        specs = list(self._manifest.tests if specs is None else specs)
        runs = runs or self._manifest.run.determinism_runs
        if len(specs) == 0:
            raise ConfigError("no tests configured, nothing to check")
        executable = self.build_mixed(self.baseline_plan())
        verdict = DeterminismVerdict(True, runs)
        for spec in specs:
            outputs = []
            for _ in range(runs):
                try:
                    outputs.append(wirelib.format_output(self.run_test_executable(executable, spec)))
                except RunError as e:
                    outputs.append(f"run failure: {e}")
            if len(set(outputs)) > 1:
                logger.warning(f"{spec.name}: output differs between identical runs")
                verdict.deterministic = False
                verdict.offending.append(spec.name)
                verdict.details[spec.name] = outputs
        return verdict


def host_toolchain_available(compiler: str = "g++") -> bool:
    return all(shutil.which(tool) is not None for tool in (compiler, "nm", "objcopy"))


__all__ = ["Weakening", "BuildPlan", "DeterminismVerdict", "ToolchainBackend", "ToolchainError",
           "host_toolchain_available"]
