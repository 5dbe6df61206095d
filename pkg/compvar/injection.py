"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : injection.py
Classes   : CampaignConfig, InjectionRecord, InjectionCampaignResult
Summary   : Injection campaign over synthetic projects: inject, run the
            two-level search, classify what was reported against the known
            injection sites, aggregate precision and recall
Imports   : random, logging, dataclasses, concurrent.futures, pandas,
            bisection, biggest_k, enums, errors, synthetic
Example   : result = run_injection_campaign(CampaignConfig(seed=7, count=50))
            print(result.summary_table())
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
import pandas as pd

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from bisection import bisect_hierarchy
    from biggest_k import bisect_biggest_k
    from enums import Granularity, InjectionMode, InjectionOutcome, AssertionStatus
    from errors import BisectFailure
    from synthetic import SyntheticProject, generate_project, make_test_fn
else:
    from .bisection import bisect_hierarchy
    from .biggest_k import bisect_biggest_k
    from .enums import Granularity, InjectionMode, InjectionOutcome, AssertionStatus
    from .errors import BisectFailure
    from .synthetic import SyntheticProject, generate_project, make_test_fn

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 0
    n_files: int = 45
    symbols_per_file: int = 25
    count: int = 500
    mode: InjectionMode = InjectionMode.INDEPENDENT
    k: int | None = None            # BisectBiggestK instead of the full search
    zero_rate: float = 0.0          # fraction of injections made benign
    jobs: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("campaign count must be >= 1")
        if not 0.0 <= self.zero_rate <= 1.0:
            raise ValueError("zero_rate must lie in [0, 1]")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be >= 1")

    # sites per injection: coupled mode injects a pair
    @property
    def sites_per_injection(self) -> int:
        return 2 if self.mode == InjectionMode.COUPLED else 1

    def toJSON(self) -> dict:
        data = asdict(self)
        data["mode"] = self.mode.value
        return data


@dataclass
class LevelCount:
    """distinct evaluations of one search level: k found out of n"""
    found: int
    size: int
    evaluations: int


@dataclass
class InjectionRecord:
    index: int
    seed: int
    mode: InjectionMode
    outcome: InjectionOutcome | None
    evaluations: int = 0
    injected: list[str] = field(default_factory=list)
    reported_files: list[str] = field(default_factory=list)
    reported_symbols: list[str] = field(default_factory=list)
    assertion_status: AssertionStatus | None = None
    levels: list[LevelCount] = field(default_factory=list)
    failure: str | None = None

    @property
    def measurable(self) -> bool:
        return self.outcome not in (None, InjectionOutcome.NOT_MEASURABLE)

    def toJSON(self) -> dict:
        return {
            "index": self.index,
            "seed": self.seed,
            "mode": self.mode.value,
            "outcome": None if self.outcome is None else self.outcome.value,
            "evaluations": self.evaluations,
            "injected": self.injected,
            "reported_files": self.reported_files,
            "reported_symbols": self.reported_symbols,
            "assertion_status": None if self.assertion_status is None else self.assertion_status.value,
            "levels": [asdict(level) for level in self.levels],
            "failure": self.failure
        }


@dataclass
class InjectionCampaignResult:
    config: CampaignConfig
    records: list[InjectionRecord]

    @property
    def failures(self) -> list[InjectionRecord]:
        return [r for r in self.records if r.failure is not None]

    def counts(self) -> dict[InjectionOutcome, int]:
        counts = {outcome: 0 for outcome in InjectionOutcome}
        for record in self.records:
            if record.outcome is not None:
                counts[record.outcome] += 1
        return counts

    # found (exact or indirect) / (found + wrong); None without measurable injections
    @property
    def precision(self) -> float | None:
        counts = self.counts()
        hits = counts[InjectionOutcome.EXACT_FIND] + counts[InjectionOutcome.INDIRECT_FIND]
        total = hits + counts[InjectionOutcome.WRONG_FIND]
        return None if total == 0 else hits / total

    # found (exact or indirect) / (found + missed)
    @property
    def recall(self) -> float | None:
        counts = self.counts()
        hits = counts[InjectionOutcome.EXACT_FIND] + counts[InjectionOutcome.INDIRECT_FIND]
        total = hits + counts[InjectionOutcome.MISSED_FIND]
        return None if total == 0 else hits / total

    @property
    def mean_evaluations(self) -> float | None:
        done = [r.evaluations for r in self.records if r.failure is None]
        return None if len(done) == 0 else sum(done) / len(done)

    def summary_table(self) -> str:
        counts = self.counts()
        frame = pd.DataFrame(
            {"count": [counts[o] for o in InjectionOutcome]},
            index=[o.value for o in InjectionOutcome])
        frame.loc["campaign failures"] = len(self.failures)
        frame["percent"] = (100.0 * frame["count"] / max(len(self.records), 1)).round(1)
        lines = [
            frame.to_string(),
            "",
            f"precision         : {_format_ratio(self.precision)}",
            f"recall            : {_format_ratio(self.recall)}",
            f"mean evaluations  : {_format_ratio(self.mean_evaluations)}"
        ]
        return "\n".join(lines)

    def toJSON(self) -> dict:
        return {
            "config": self.config.toJSON(),
            "counts": {o.value: n for o, n in self.counts().items()},
            "failures": len(self.failures),
            "precision": self.precision,
            "recall": self.recall,
            "mean_evaluations": self.mean_evaluations,
            "injections": [r.toJSON() for r in self.records]
        }


def _format_ratio(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def classify(project: SyntheticProject, reported_files: list[str], reported_symbols: list) -> InjectionOutcome:
    """outcome of one measurable injection against its known sites"""
    sites = project.injected_sites
    ancestry_files = {e.file for e in sites}
    ancestry_symbols = set(sites) | {inj.caller for inj in project.injections if inj.caller is not None}

    if any(name not in ancestry_files for name in reported_files):
        return InjectionOutcome.WRONG_FIND
    if any(symbol not in ancestry_symbols for symbol in reported_symbols):
        return InjectionOutcome.WRONG_FIND
    if len(reported_files) == 0:
        return InjectionOutcome.MISSED_FIND

    exported = [e for e in sites if e.exported]
    hidden = [e for e in sites if not e.exported]
    if not all(e in reported_symbols for e in exported):
        return InjectionOutcome.MISSED_FIND
    # a hidden site counts as found through its own caller, or through its
    # file when it has no exported caller
    callers = {inj.site: inj.caller for inj in project.injections}
    for site in hidden:
        if site.file not in reported_files:
            return InjectionOutcome.MISSED_FIND
        caller = callers.get(site)
        if caller is not None and caller not in reported_symbols:
            return InjectionOutcome.MISSED_FIND
    return InjectionOutcome.EXACT_FIND if len(hidden) == 0 else InjectionOutcome.INDIRECT_FIND


def _injection_plan(config: CampaignConfig) -> list[tuple[int, int, InjectionMode]]:
    rng = random.Random(config.seed)
    plan = []
    for index in range(config.count):
        seed = rng.getrandbits(64)
        benign = config.zero_rate > 0 and rng.random() < config.zero_rate
        plan.append((index, seed, InjectionMode.ZERO_MAGNITUDE if benign else config.mode))
    return plan


def run_single_injection(config: CampaignConfig, index: int, seed: int, mode: InjectionMode) -> InjectionRecord:
    project = generate_project(
        seed, config.n_files, config.symbols_per_file, config.sites_per_injection, mode)
    record = InjectionRecord(index, seed, mode, None, injected=[str(e) for e in project.injected_sites])
    file_test = make_test_fn(project, Granularity.FILES)
    symbol_tests = {}

    def symbol_test_of(file):
        symbol_tests[file.file] = make_test_fn(project, Granularity.SYMBOLS, file)
        return symbol_tests[file.file]

    try:
        if file_test(project.all_files()).value == 0:
            record.outcome = InjectionOutcome.NOT_MEASURABLE
            record.evaluations = file_test.distinct_evaluations
            return record

        if config.k is None:
            report = bisect_hierarchy(file_test, project.all_files(), project.symbols_of, symbol_test_of)
            files = [e.file for e in report.found_files]
            symbols = [f.element for f in report.found_symbols]
            record.assertion_status = report.assertion_status
            record.levels.append(LevelCount(
                len(report.file_report.found), report.file_report.search_space_size,
                file_test.distinct_evaluations))
            for name, sub in report.symbol_reports.items():
                record.levels.append(LevelCount(
                    len(sub.found), sub.search_space_size, symbol_tests[name].distinct_evaluations))
            record.evaluations = file_test.distinct_evaluations + sum(
                fn.distinct_evaluations for fn in symbol_tests.values())
        else:
            report = bisect_biggest_k(
                file_test, project.all_files(), config.k, project.symbols_of, symbol_test_of)
            files = [f.element.file for f in report.found_files]
            symbols = [f.element for f in report.found]
            record.evaluations = report.distinct_evaluations
            record.assertion_status = report.assertion_status
    except BisectFailure as failure:
        record.failure = str(failure)
        logger.warning(f"injection {index}: {failure}")
        return record

    record.reported_files = files
    record.reported_symbols = [str(s) for s in symbols]
    record.outcome = classify(project, files, symbols)
    return record


def _run_one(args) -> InjectionRecord:
    return run_single_injection(*args)


def run_injection_campaign(config: CampaignConfig) -> InjectionCampaignResult:
    plan = _injection_plan(config)
    logger.info(
        f"injection campaign: {config.count} injection(s), mode={config.mode.value}, "
        f"{config.n_files} files x {config.symbols_per_file} symbols")
    jobs = [(config, index, seed, mode) for index, seed, mode in plan]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as executor:
            records = list(executor.map(_run_one, jobs, chunksize=16))
    else:
        records = [_run_one(job) for job in jobs]
    result = InjectionCampaignResult(config, sorted(records, key=lambda r: r.index))
    logger.info(
        f"injection campaign done: precision={_format_ratio(result.precision)} "
        f"recall={_format_ratio(result.recall)} mean evaluations={_format_ratio(result.mean_evaluations)}")
    return result
