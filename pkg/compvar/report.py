"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : report.py
Classes   : ResultsDirectory
Summary   : Regenerates summaries from a results directory: sweep summary,
            per-test CSV series, compiler table and a digest of the persisted
            bisect documents (queried with JSONPath)
Imports   : json, logging, pathlib, jsonpath_ng, config, errors, summary,
            sweep
Example   : results = ResultsDirectory("out/run-20261019")
            print(results.render())
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import json
import logging
from pathlib import Path
from jsonpath_ng.ext import parse

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from config import load_manifest
    from errors import ConfigError, RecordError
    from summary import SweepSummary, summarize
    from sweep import RECORDS_FILE, load_records
else:
    from .config import load_manifest
    from .errors import ConfigError, RecordError
    from .summary import SweepSummary, summarize
    from .sweep import RECORDS_FILE, load_records

logger = logging.getLogger(__name__)

CONFIG_SNAPSHOT = "config.toml"
BISECT_DIR = "bisect"
DIGEST_FILE = "bisect_digest.json"


class ResultsDirectory(object):
    """read-only view of one output directory; only derived files are written"""

    def __init__(self, path: str | Path) -> None:
        self._path = Path(path)

    @property
    def path(self) -> Path: return self._path

    @property
    def has_sweep(self) -> bool:
        return (self._path / RECORDS_FILE).is_file()

    def bisect_documents(self) -> list[Path]:
        folder = self._path / BISECT_DIR
        return sorted(folder.glob("*.json")) if folder.is_dir() else []

    def _load_json(self, path: Path):
        """load JSON data from file"""
        try:
            with open(path, "r", encoding="utf-8") as f:
                return json.load(f)
        except (OSError, ValueError) as e:
            raise RecordError(f"corrupt or unreadable record ({e})", str(path)) from None

    def find(self, pattern: str, data) -> list:
        """values matching a JSONPath pattern"""
        return [match.value for match in parse(pattern).find(data)]

    def sweep_summary(self) -> SweepSummary:
        snapshot = self._path / CONFIG_SNAPSHOT
        if not snapshot.is_file():
            raise RecordError("config snapshot missing, cannot locate the performance reference", str(snapshot))
        try:
            manifest = load_manifest(snapshot, check_files=False)
        except ConfigError as e:
            raise RecordError(f"config snapshot unusable ({e})", str(snapshot)) from None
        records = load_records(self._path / RECORDS_FILE)
        return summarize(records, manifest.performance_reference)

    def bisect_digest(self) -> list[dict]:
        digest = []
        for path in self.bisect_documents():
            data = self._load_json(path)
            if len(self.find("$.test", data)) == 0:
                raise RecordError("bisect document lacks a test name", str(path))
            digest.append({
                "document": path.name,
                "test": self.find("$.test", data)[0],
                "candidate": (self.find("$.candidate_label", data) or [""])[0],
                "status": (self.find("$.status", data) or ["unknown"])[0],
                "files": self.find("$.files[*].file", data),
                "symbols": self.find("$.symbols[*].display", data),
                "file_level_only": self.find("$.file_level_only[*]", data),
                "evaluations": (self.find("$.evaluations", data) or [0])[0],
                "failure": (self.find("$.failure", data) or [None])[0]
            })
        return digest

    def render(self) -> str:
        """write derived files and return the human-readable report"""
        documents = self.bisect_documents()
        if not self.has_sweep and len(documents) == 0:
            raise RecordError("nothing to report (no sweep records, no bisect documents)", str(self._path))

        lines = []
        if self.has_sweep:
            summary = self.sweep_summary()
            summary.write(self._path)
            lines += ["Compiler characterization", summary.compiler_table(), ""]
            for test, fastest in summary.fastest.items():
                lines.append(
                    f"{test}: fastest bitwise-equal = {_describe(fastest.get('bitwise_equal'))}, "
                    f"fastest variable = {_describe(fastest.get('variable'))}")
            lines.append("")

        if len(documents) > 0:
            digest = self.bisect_digest()
            with open(self._path / DIGEST_FILE, "w", encoding="utf-8") as f:
                json.dump(digest, f, indent=3)
            lines.append("Bisect digest")
            for item in digest:
                lines.append(f"{item['test']} [{item['candidate']}] {item['status']}, {item['evaluations']} evaluation(s)")
                for name in item["files"]:
                    lines.append(f"   file   {name}")
                for name in item["symbols"]:
                    lines.append(f"   symbol {name}")
                for name in item["file_level_only"]:
                    lines.append(f"   file-level only {name}")
                if item["failure"]:
                    lines.append(f"   failure: {item['failure']}")
        return "\n".join(lines)


def _describe(entry: dict | None) -> str:
    if entry is None:
        return "none"
    return f"{entry['compilation']} ({entry['speedup']:.3f}x)"


def cmd_report(results_dir: str | Path) -> str:
    return ResultsDirectory(results_dir).render()
