"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : config.py
Classes   : CompilerConfig, ToolConfig, RunSettings, ProjectManifest
Summary   : Loads and validates the project configuration file (TOML) into
            an immutable project manifest
Imports   : logging, shlex, dataclasses, pathlib, toml, compilation,
            element, enums, errors, testscore
Example   : manifest = load_manifest("fixtures/kahan_project/compvar.toml")
            manifest.correctness_baseline, manifest.tests
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import logging
import shlex
from dataclasses import dataclass, field
from pathlib import Path
import toml

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from compilation import Compilation
    from element import Element, ElementOrder
    from enums import ComparatorKind, ResultKind
    from errors import ConfigError
    from testscore import TestSpec
else:
    from .compilation import Compilation
    from .element import Element, ElementOrder
    from .enums import ComparatorKind, ResultKind
    from .errors import ConfigError
    from .testscore import TestSpec

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 300.0
DEFAULT_DETERMINISM_RUNS = 3


@dataclass(frozen=True)
class CompilerConfig:
    id: str
    binary: str
    optimization_levels: tuple[str, ...] = ("O0", "O1", "O2", "O3")
    # each entry is one switch combination, possibly several flags
    switches: tuple[str, ...] = ()
    pic_flag: str = "-fPIC"
    fixed_flags: tuple[str, ...] = ()

    def switch_combos(self) -> list[tuple[str, ...]]:
        return [tuple(shlex.split(entry)) for entry in self.switches]


@dataclass(frozen=True)
class ToolConfig:
    nm: str = "nm"
    objcopy: str = "objcopy"


@dataclass(frozen=True)
class RunSettings:
    timeout: float = DEFAULT_TIMEOUT
    determinism_runs: int = DEFAULT_DETERMINISM_RUNS
    jobs: int = 1
    env: tuple[str, ...] = ("PATH",)
    set_env: tuple[tuple[str, str], ...] = (("LC_ALL", "C"),)


@dataclass(frozen=True)
class ProjectManifest:
    root: Path
    files: tuple[str, ...]
    tests: tuple[TestSpec, ...]
    compilers: dict[str, CompilerConfig]
    correctness_baseline: Compilation
    performance_reference: Compilation
    cxxflags: tuple[str, ...] = ()
    link_flags: tuple[str, ...] = ()
    linker: str = ""
    tools: ToolConfig = field(default_factory=ToolConfig)
    run: RunSettings = field(default_factory=RunSettings)
    config_path: Path | None = None

    @property
    def file_order(self) -> ElementOrder:
        return ElementOrder(Element.of_file(name) for name in self.files)

    def compiler(self, compiler_id: str) -> CompilerConfig:
        try:
            return self.compilers[compiler_id]
        except KeyError:
            raise ConfigError(f"unknown compiler id '{compiler_id}'") from None

    def test(self, name: str) -> TestSpec:
        for spec in self.tests:
            if spec.name == name:
                return spec
        raise ConfigError(f"unknown test '{name}', configured: {[t.name for t in self.tests]}")

    # compiler driving the link step
    @property
    def linker_config(self) -> CompilerConfig:
        return self.compiler(self.linker or self.correctness_baseline.compiler_id)


def _as_list(value, section: str, key: str) -> list:
    if value is None:
        return []
    if isinstance(value, str):
        return [value]
    if not isinstance(value, list):
        raise ConfigError(f"[{section}] {key} must be a list")
    return value


# TOML integers only; booleans and floats such as 3.5 are rejected
def _as_int(value, section: str, key: str, minimum: int = None) -> int | None:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"[{section}] {key} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"[{section}] {key} must be >= {minimum}, got {value}")
    return value


def _as_number(value, section: str, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key} must be a number, got {value!r}")
    return float(value)


def _parse_compilation(value, section: str, key: str) -> Compilation:
    if not isinstance(value, dict):
        raise ConfigError(f"[{section}] {key} must be an inline table {{ compiler = ..., level = ... }}")
    try:
        return Compilation(value.get("compiler", ""), value.get("level", ""), value.get("switches", []))
    except ValueError as e:
        raise ConfigError(f"[{section}] {key}: {e}") from None


def _parse_test(name: str, data: dict) -> TestSpec:
    section = f"tests.{name}"
    try:
        result_kind = ResultKind.from_label(data.get("result_kind", "scalar"))
    except ValueError:
        raise ConfigError(f"[{section}] unknown result_kind {data.get('result_kind')!r}") from None
    default_cmp = "exacttext" if result_kind == ResultKind.TEXT else "absdiff"
    try:
        comparator = ComparatorKind.from_label(data.get("comparator", default_cmp))
    except ValueError:
        raise ConfigError(f"[{section}] unknown comparator {data.get('comparator')!r}") from None
    try:
        default_input = [float(v) for v in _as_list(data.get("default_input"), section, "default_input")]
    except (TypeError, ValueError):
        raise ConfigError(f"[{section}] default_input must hold numbers") from None
    return TestSpec(
        name=name,
        inputs_per_run=_as_int(data.get("inputs_per_run", 0), section, "inputs_per_run", 0),
        default_input=tuple(default_input),
        result_kind=result_kind,
        comparator=comparator,
        digits=_as_int(data.get("digits"), section, "digits", 1))


def _parse_compiler(compiler_id: str, data: dict) -> CompilerConfig:
    section = f"compiler.{compiler_id}"
    binary = (data.get("binary") or "").strip()
    if len(binary) == 0:
        raise ConfigError(f"[{section}] binary is required")
    levels = tuple(str(lvl).lstrip("-") for lvl in _as_list(data.get("optimization_levels"), section, "optimization_levels"))
    return CompilerConfig(
        id=compiler_id,
        binary=binary,
        optimization_levels=levels or ("O0", "O1", "O2", "O3"),
        switches=tuple(str(s) for s in _as_list(data.get("switches"), section, "switches")),
        pic_flag=data.get("pic_flag", "-fPIC"),
        fixed_flags=tuple(_as_list(data.get("fixed_flags"), section, "fixed_flags")))


def parse_manifest(data: dict, base_dir: Path, config_path: Path = None, check_files: bool = True) -> ProjectManifest:
    """validated manifest from an already-parsed configuration document"""
    project = data.get("project") or {}
    root = (base_dir / project.get("root", ".")).resolve()
    files = [str(f) for f in _as_list(project.get("files"), "project", "files")]
    if len(files) == 0:
        raise ConfigError("[project] files is empty")
    if len(set(files)) != len(files):
        raise ConfigError("[project] files lists a file twice")
    for name in files:
        if Path(name).is_absolute():
            raise ConfigError(f"[project] file '{name}' must be relative to the project root")
        if check_files and not (root / name).is_file():
            raise ConfigError(f"[project] file '{name}' not found under {root}")

    compilers = {cid: _parse_compiler(cid, section) for cid, section in (data.get("compiler") or {}).items()}
    if len(compilers) == 0:
        raise ConfigError("no [compiler.<id>] section configured")

    tests = tuple(_parse_test(name, section) for name, section in (data.get("tests") or {}).items())
    if len(tests) == 0:
        raise ConfigError("no [tests.<name>] section configured")

    baselines = data.get("baselines") or {}
    if "correctness" not in baselines:
        raise ConfigError("[baselines] correctness is required")
    correctness = _parse_compilation(baselines["correctness"], "baselines", "correctness")
    performance = _parse_compilation(baselines.get("performance", baselines["correctness"]), "baselines", "performance")
    for key, comp in (("correctness", correctness), ("performance", performance)):
        if comp.compiler_id not in compilers:
            raise ConfigError(f"[baselines] {key} uses unknown compiler id '{comp.compiler_id}'")

    linker = project.get("linker", "")
    if linker and linker not in compilers:
        raise ConfigError(f"[project] linker '{linker}' is not a configured compiler id")

    tools = data.get("tools") or {}
    run = data.get("run") or {}
    settings = RunSettings(
        timeout=_as_number(run.get("timeout", DEFAULT_TIMEOUT), "run", "timeout"),
        determinism_runs=_as_int(run.get("determinism_runs", DEFAULT_DETERMINISM_RUNS), "run", "determinism_runs"),
        jobs=_as_int(run.get("jobs", 1), "run", "jobs"),
        env=tuple(_as_list(run.get("env", ["PATH"]), "run", "env")),
        set_env=tuple(sorted((str(k), str(v)) for k, v in (run.get("set_env") or {"LC_ALL": "C"}).items())))
    if settings.timeout <= 0 or settings.determinism_runs < 2 or settings.jobs < 1:
        raise ConfigError("[run] needs timeout > 0, determinism_runs >= 2 and jobs >= 1")

    return ProjectManifest(
        root=root,
        files=tuple(files),
        tests=tests,
        compilers=compilers,
        correctness_baseline=correctness,
        performance_reference=performance,
        cxxflags=tuple(_as_list(project.get("cxxflags"), "project", "cxxflags")),
        link_flags=tuple(_as_list(project.get("link_flags"), "project", "link_flags")),
        linker=linker,
        tools=ToolConfig(nm=tools.get("nm", "nm"), objcopy=tools.get("objcopy", "objcopy")),
        run=settings,
        config_path=config_path)


def load_manifest(path: str | Path, check_files: bool = True) -> ProjectManifest:
    config_path = Path(path).resolve()
    if not config_path.is_file():
        raise ConfigError(f"configuration file not found: {config_path}")
    try:
        data = toml.load(config_path)
    except toml.TomlDecodeError as e:
        raise ConfigError(f"{config_path}: {e}") from None
    manifest = parse_manifest(data, config_path.parent, config_path, check_files)
    logger.debug(
        f"loaded {config_path}: {len(manifest.files)} file(s), {len(manifest.tests)} test(s), "
        f"compilers {sorted(manifest.compilers)}")
    return manifest
