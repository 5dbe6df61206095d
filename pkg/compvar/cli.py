"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : cli.py
Classes   : RunConfig
Summary   : Command line surface: check, sweep, bisect, inject, oracle
            (hidden) and report verbs, with stable exit codes
Imports   : argparse, json, logging, os, shlex, shutil, tempfile, datetime,
            pathlib, dataclasses and the compvar modules
Example   : python3 run_compvar.py --config fixtures/kahan_project/compvar.toml \\
                --out out bisect --level O3 --switches "-ffast-math" --test kahan
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import argparse                         # for argument parsing
import json
import logging
import os
import shlex
import shutil
import sys
import tempfile
from dataclasses import dataclass, field
from datetime import datetime as DT     # for process timestamps
from pathlib import Path

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from bisection import bisect_all, bisect_hierarchy
    from biggest_k import bisect_biggest_k
    from compilation import Compilation
    from config import ProjectManifest, load_manifest
    from element import Element
    from enums import AssertionStatus, ExitCode, Granularity, InjectionMode, InjectionOutcome
    from errors import (BisectFailure, CompVarError, ConfigError, ContractError, ManifestError,
                        OracleSizeError, RecordError, ToolchainError)
    from injection import CampaignConfig, classify, run_injection_campaign
    from oracle import DEFAULT_CAP, oracle_verdict
    from report import CONFIG_SNAPSHOT, BISECT_DIR, cmd_report
    from summary import summarize
    from sweep import plan_matrix, run_sweep
    from synthetic import generate_project, make_test_fn
    from toolchain import ToolchainBackend
    from toolchain_testfn import ToolchainSearch
else:
    from .bisection import bisect_all, bisect_hierarchy
    from .biggest_k import bisect_biggest_k
    from .compilation import Compilation
    from .config import ProjectManifest, load_manifest
    from .element import Element
    from .enums import AssertionStatus, ExitCode, Granularity, InjectionMode, InjectionOutcome
    from .errors import (BisectFailure, CompVarError, ConfigError, ContractError, ManifestError,
                         OracleSizeError, RecordError, ToolchainError)
    from .injection import CampaignConfig, classify, run_injection_campaign
    from .oracle import DEFAULT_CAP, oracle_verdict
    from .report import CONFIG_SNAPSHOT, BISECT_DIR, cmd_report
    from .summary import summarize
    from .sweep import plan_matrix, run_sweep
    from .synthetic import generate_project, make_test_fn
    from .toolchain import ToolchainBackend
    from .toolchain_testfn import ToolchainSearch

logger = logging.getLogger(__name__)

DETERMINIZATION_HINT = (
    "make the test deterministic before searching: fix random seeds, "
    "avoid clocks and addresses in the output, pin thread counts")


@dataclass
class RunConfig:
    verb: str
    config_path: Path | None
    out_dir: Path
    backend: str = "toolchain"
    jobs: int | None = None
    seed: int = 0
    verbosity: int = logging.INFO
    options: dict = field(default_factory=dict)

    @staticmethod
    def from_args(args: argparse.Namespace) -> RunConfig:
        verbosity = logging.INFO
        if args.verbose:
            verbosity = logging.DEBUG
        elif args.quiet:
            verbosity = logging.WARNING
        common = {"verb", "config", "out", "backend", "jobs", "seed", "verbose", "quiet", "handler"}
        return RunConfig(
            verb=args.verb,
            config_path=None if args.config is None else Path(args.config),
            out_dir=Path(args.out),
            backend=args.backend,
            jobs=args.jobs,
            seed=args.seed,
            verbosity=verbosity,
            options={k: v for k, v in vars(args).items() if k not in common})

    def manifest(self) -> ProjectManifest:
        if self.config_path is None:
            raise ConfigError("--config is required for the toolchain backend")
        return load_manifest(self.config_path)

    # --jobs when given, else the configured worker count
    def worker_count(self, configured: int = 1) -> int:
        if self.jobs is None:
            return configured
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {self.jobs}")
        return self.jobs

    def prepare_output(self) -> Path:
        """output directory, created atomically when absent, holding a config snapshot"""
        if not self.out_dir.is_dir():
            parent = self.out_dir.resolve().parent
            parent.mkdir(parents=True, exist_ok=True)
            staging = Path(tempfile.mkdtemp(prefix=".compvar-", dir=parent))
            try:
                os.rename(staging, self.out_dir)
            except OSError:
                # another process created it first
                shutil.rmtree(staging, ignore_errors=True)
                if not self.out_dir.is_dir():
                    raise
        if self.config_path is not None and self.config_path.is_file():
            shutil.copyfile(self.config_path, self.out_dir / CONFIG_SNAPSHOT)
        return self.out_dir


def _backend(run: RunConfig) -> ToolchainBackend:
    manifest = run.manifest()
    return ToolchainBackend(manifest, run.prepare_output(), run.worker_count(manifest.run.jobs))


def cmd_check(run: RunConfig) -> int:
    backend = _backend(run)
    verdict = backend.check_determinism()
    with open(run.out_dir / "check.json", "w", encoding="utf-8") as f:
        json.dump(verdict.toJSON(), f, indent=3)
    if verdict.deterministic:
        print(f"all {len(backend.manifest.tests)} test(s) deterministic over {verdict.runs} runs")
        return ExitCode.SUCCESS
    for name in verdict.offending:
        print(f"nondeterministic test: {name}")
    print(f"hint: {DETERMINIZATION_HINT}")
    return ExitCode.ASSUMPTION_VIOLATION


def cmd_sweep(run: RunConfig) -> int:
    backend = _backend(run)
    manifest = backend.manifest
    if not run.options.get("skip_check"):
        verdict = backend.check_determinism()
        if not verdict.deterministic:
            print(f"nondeterministic test(s): {', '.join(verdict.offending)}")
            print(f"hint: {DETERMINIZATION_HINT}")
            return ExitCode.ASSUMPTION_VIOLATION
    matrix = plan_matrix(manifest, run.options.get("compilers"))
    logger.info(f"sweeping {len(matrix)} compilation(s) x {len(manifest.tests)} test(s)")
    records = run_sweep(backend, matrix, run.options.get("runs", 3), run.options.get("resume", False), run.out_dir)
    summary = summarize(records, manifest.performance_reference)
    summary.write(run.out_dir)
    print(summary.compiler_table())
    logger.info(f"{len(records)} cell(s): {summary.cells}")
    return ExitCode.SUCCESS


def _candidate(run: RunConfig, manifest: ProjectManifest) -> Compilation:
    compiler_id = run.options.get("compiler") or manifest.correctness_baseline.compiler_id
    manifest.compiler(compiler_id)
    return Compilation(compiler_id, run.options.get("level") or "O3", shlex.split(run.options.get("switches") or ""))


def _found_files(report) -> list[dict]:
    return [{"file": f.element.file, "score": f.score.toJSON()} for f in report]


def _found_symbols(report) -> list[dict]:
    return [{
        "file": f.element.file,
        "symbol": f.element.symbol,
        "display": f.element.display,
        "score": f.score.toJSON()
    } for f in report]


def _search(file_test, files, symbols_of, symbol_test_of, k, files_only) -> dict:
    """two-level search as a bisect document body"""
    if k is None:
        report = bisect_hierarchy(file_test, files, symbols_of, symbol_test_of, files_only)
        return {
            "search": "bisect_all",
            "status": report.assertion_status.value,
            "possible_false_negatives": report.assertion_status == AssertionStatus.VIOLATED,
            "files": _found_files(report.file_report.found),
            "symbols": _found_symbols(report.found_symbols),
            "file_level_only": list(report.file_level_only),
            "evaluations": report.total_evaluations,
            "report": report.toJSON()
        }
    if files_only:
        raise ConfigError("--k and --files-only cannot be combined")
    report = bisect_biggest_k(file_test, files, k, symbols_of, symbol_test_of)
    return {
        "search": "biggest_k",
        "k": k,
        "status": report.assertion_status.value,
        "possible_false_negatives": report.possible_false_negatives,
        "files": _found_files(report.found_files),
        "symbols": _found_symbols(report.found),
        "file_level_only": [],
        "evaluations": report.distinct_evaluations,
        "report": report.toJSON()
    }


def _bisect_exit(document: dict, check: bool) -> int:
    if document.get("failure"):
        return ExitCode.TOOLCHAIN_FAILURE
    if document["status"] == AssertionStatus.VIOLATED.value or document.get("possible_false_negatives"):
        return ExitCode.ASSUMPTION_VIOLATION
    if check and len(document["files"]) > 0:
        return ExitCode.VARIABILITY_FOUND
    return ExitCode.SUCCESS


def _write_document(out_dir: Path, name: str, document: dict) -> Path:
    folder = out_dir / BISECT_DIR
    folder.mkdir(parents=True, exist_ok=True)
    path = folder / f"{name}.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=3)
    return path


def _print_document(document: dict) -> None:
    if len(document["files"]) == 0 and not document.get("failure"):
        print(f"{document['test']}: no variability ({document['evaluations']} evaluation(s))")
        return
    print(f"{document['test']} [{document['candidate_label']}] {document['status']}, "
          f"{document['evaluations']} evaluation(s)")
    for item in document["files"]:
        print(f"   file   {item['file']}  {item['score']['value']}")
    for item in document["symbols"]:
        print(f"   symbol {item['display']}  {item['score']['value']}")
    for name in document["file_level_only"]:
        print(f"   file-level only {name}")
    if document.get("failure"):
        print(f"   failure: {document['failure']}")


def _bisect_toolchain(run: RunConfig) -> list[dict]:
    backend = _backend(run)
    manifest = backend.manifest
    candidate = _candidate(run, manifest)
    if run.options.get("all_tests"):
        specs = list(manifest.tests)
    elif run.options.get("test"):
        specs = [manifest.test(run.options["test"])]
    else:
        raise ConfigError("bisect needs --test <name> or --all-tests")

    documents = []
    for spec in specs:
        logger.info(f"bisecting {spec.name} under {candidate}")
        search = ToolchainSearch(backend, candidate, [spec])
        document = {"test": spec.name, "candidate": candidate.toJSON(), "candidate_label": str(candidate),
                    "backend": "toolchain"}
        try:
            document.update(_search(search.file_test, search.files, search.symbols_of, search.symbol_test_of,
                                    run.options.get("k"), run.options.get("files_only", False)))
        except (BisectFailure, ToolchainError) as e:
            logger.warning(f"{spec.name}: search failed: {e}")
            document.update({"status": "failed", "files": [], "symbols": [], "file_level_only": [],
                             "evaluations": search.total_evaluations, "failure": str(e)})
        documents.append(document)
        _write_document(run.out_dir, f"{spec.name}-{candidate.digest()}", document)
    return documents


def _sim_project(run: RunConfig):
    return generate_project(
        run.seed,
        run.options.get("files", 8),
        run.options.get("symbols_per_file", 8),
        run.options.get("injections", 2),
        InjectionMode(run.options.get("mode", InjectionMode.INDEPENDENT.value)),
        sub_file_cancellation=run.options.get("sub_file_cancellation", False))


def _bisect_sim(run: RunConfig) -> list[dict]:
    out_dir = run.prepare_output()
    project = _sim_project(run)
    file_test = make_test_fn(project, Granularity.FILES)
    document = {"test": "sim", "candidate": None, "candidate_label": f"sim seed={run.seed}", "backend": "sim"}
    try:
        document.update(_search(
            file_test, project.all_files(), project.symbols_of,
            lambda file: make_test_fn(project, Granularity.SYMBOLS, file),
            run.options.get("k"), run.options.get("files_only", False)))
    except BisectFailure as e:
        document.update({"status": "failed", "files": [], "symbols": [], "file_level_only": [],
                         "evaluations": file_test.distinct_evaluations, "failure": str(e)})
    document["ground_truth"] = project.toJSON()
    if file_test(project.all_files()).value == 0:
        outcome = InjectionOutcome.NOT_MEASURABLE
    else:
        reported = [Element.of_symbol(s["file"], s["symbol"]) for s in document["symbols"]]
        outcome = classify(project, [f["file"] for f in document["files"]], reported)
    document["outcome"] = outcome.value
    _write_document(out_dir, f"sim-{run.seed}", document)
    return [document]


def cmd_bisect(run: RunConfig) -> int:
    documents = _bisect_sim(run) if run.backend == "sim" else _bisect_toolchain(run)
    for document in documents:
        _print_document(document)
    return max(_bisect_exit(d, run.options.get("check", False)) for d in documents)


def cmd_inject(run: RunConfig) -> int:
    out_dir = run.prepare_output()
    config = CampaignConfig(
        seed=run.seed,
        n_files=run.options.get("files", 45),
        symbols_per_file=run.options.get("symbols_per_file", 25),
        count=run.options.get("count", 500),
        mode=InjectionMode(run.options.get("mode", InjectionMode.INDEPENDENT.value)),
        k=run.options.get("k"),
        zero_rate=run.options.get("zero_rate", 0.0),
        jobs=run.worker_count())
    result = run_injection_campaign(config)
    with open(out_dir / "campaign.json", "w", encoding="utf-8") as f:
        json.dump(result.toJSON(), f, indent=3)
    print(result.summary_table())
    return ExitCode.SUCCESS


def cmd_oracle(run: RunConfig) -> int:
    """ground-truth verdict of a small simulated instance on standard output"""
    project = generate_project(
        run.seed, run.options.get("files", 8), 1, run.options.get("injections", 2),
        InjectionMode(run.options.get("mode", InjectionMode.INDEPENDENT.value)))
    universe = project.all_files()
    test = make_test_fn(project, Granularity.FILES)
    verdict = oracle_verdict(universe, test, run.options.get("cap", DEFAULT_CAP))
    report = bisect_all(test, universe)
    record = verdict.toJSON()
    record["bisect_found"] = [str(e) for e in report.found_elements]
    record["bisect_status"] = report.assertion_status.value
    record["match"] = set(report.found_elements) == set(verdict.av_set)
    print(json.dumps(record))
    return ExitCode.SUCCESS


def cmd_report_verb(run: RunConfig) -> int:
    print(cmd_report(run.options.get("results") or run.out_dir))
    return ExitCode.SUCCESS


def _add_sim_options(parser: argparse.ArgumentParser, files: int, symbols: int | None) -> None:
    parser.add_argument("--files", type=int, default=files, help="simulated files")
    if symbols is not None:
        parser.add_argument("--symbols-per-file", type=int, default=symbols, help="simulated symbols per file")
    parser.add_argument("--mode", choices=[m.value for m in InjectionMode], default=InjectionMode.INDEPENDENT.value,
                        help="injection mode of the simulated backend")


def build_parser() -> argparse.ArgumentParser:
    # initiate the input arguments parser
    parser = argparse.ArgumentParser(
        prog="compvar",
        description="locate compiler-induced result variability: sweep compilations, bisect files and symbols")
    parser.add_argument("--config", "-c", help="project configuration file (TOML)")
    parser.add_argument("--out", "-o", default="compvar-results", help="output directory")
    parser.add_argument("--backend", choices=["toolchain", "sim"], default="toolchain",
                        help="real builds, or the simulated backend")
    parser.add_argument("--jobs", "-j", type=int, default=None,
                        help="worker count for builds and campaigns (default: [run] jobs, else 1)")
    parser.add_argument("--seed", type=int, default=0, help="seed for simulated projects and campaigns")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    parser.add_argument("--quiet", "-q", action="store_true", help="warnings only")
    verbs = parser.add_subparsers(dest="verb", required=True, metavar="{check,sweep,bisect,inject,report}")

    check = verbs.add_parser("check", help="determinism preflight of every test")
    check.set_defaults(handler=cmd_check)

    sweep = verbs.add_parser("sweep", help="run the compilation matrix over all tests")
    sweep.add_argument("--runs", type=int, default=3, help="timed runs per cell (median taken)")
    sweep.add_argument("--resume", action="store_true", help="keep completed cells of a previous sweep")
    sweep.add_argument("--compilers", nargs="+", help="restrict the matrix to these compiler ids")
    sweep.add_argument("--skip-check", action="store_true", help="skip the determinism preflight")
    sweep.set_defaults(handler=cmd_sweep)

    bisect = verbs.add_parser("bisect", help="find the files and symbols causing variability")
    bisect.add_argument("--compiler", help="candidate compiler id (default: the baseline's)")
    bisect.add_argument("--level", default="O3", help="candidate optimization level")
    bisect.add_argument("--switches", default="", help="candidate switches, one quoted string")
    bisect.add_argument("--test", help="test to bisect")
    bisect.add_argument("--all-tests", action="store_true", help="bisect every configured test in turn")
    bisect.add_argument("--k", type=int, help="only the k biggest contributing symbols")
    bisect.add_argument("--files-only", action="store_true", help="stop at file level")
    bisect.add_argument("--check", action="store_true", help="exit code 1 when variability is found")
    _add_sim_options(bisect, 8, 8)
    bisect.add_argument("--injections", type=int, default=2, help="simulated injections")
    bisect.add_argument("--sub-file-cancellation", action="store_true",
                        help="simulated file scores below their biggest symbol")
    bisect.set_defaults(handler=cmd_bisect)

    inject = verbs.add_parser("inject", help="injection campaign over simulated projects")
    _add_sim_options(inject, 45, 25)
    inject.add_argument("--count", type=int, default=500, help="number of injections")
    inject.add_argument("--k", type=int, help="use the biggest-k search")
    inject.add_argument("--zero-rate", type=float, default=0.0, help="fraction of benign injections")
    inject.set_defaults(handler=cmd_inject)

    # hidden debugging verb
    oracle = verbs.add_parser("oracle")
    _add_sim_options(oracle, 8, None)
    oracle.add_argument("--injections", type=int, default=2, help="simulated injections")
    oracle.add_argument("--cap", type=int, default=DEFAULT_CAP, help="brute-force size cap")
    oracle.set_defaults(handler=cmd_oracle)
    verbs._choices_actions = [a for a in verbs._choices_actions if a.dest != "oracle"]

    report = verbs.add_parser("report", help="regenerate summaries from a results directory")
    report.add_argument("results", nargs="?", help="results directory (default: --out)")
    report.set_defaults(handler=cmd_report_verb)
    return parser


def exit_code_for(error: Exception) -> int:
    if isinstance(error, (BisectFailure, ToolchainError)):
        return ExitCode.TOOLCHAIN_FAILURE
    return ExitCode.CONFIG_ERROR


def main(argv: list[str] = None) -> int:
    args = build_parser().parse_args(argv)
    run = RunConfig.from_args(args)
    logging.basicConfig(level=run.verbosity, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    timestamp1 = DT.now()
    logger.info(f"{run.verb} started at {timestamp1}")
    try:
        code = int(args.handler(run))
    except (ConfigError, RecordError, ManifestError, ContractError, OracleSizeError) as e:
        logger.error(str(e))
        code = ExitCode.CONFIG_ERROR
    except CompVarError as e:
        logger.error(str(e))
        code = exit_code_for(e)
    except ValueError as e:
        # simulated project and campaign parameters
        logger.error(str(e))
        code = ExitCode.CONFIG_ERROR
    timestamp2 = DT.now()
    duration = timestamp2 - timestamp1
    logger.info(f"{run.verb} finished at {timestamp2} (duration {duration}), exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
