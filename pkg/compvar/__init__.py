#from .enums import *
from .compilation import Compilation
from .element import Element, ElementOrder, ElementSet, canonicalize
from .testscore import TestScore, TestSpec, TestValue
from .testfn import TestFn
from .comparator import Comparator, compare
from .bisection import BisectReport, HierarchyReport, bisect_all, bisect_hierarchy, bisect_one
from .biggest_k import bisect_biggest_k
from .oracle import compute_av, is_benign, is_minimal_set, oracle_verdict
from .synthetic import SyntheticProject, generate_project, make_test_fn
from .injection import CampaignConfig, run_injection_campaign
from .config import ProjectManifest, load_manifest
from .toolchain import BuildPlan, ToolchainBackend
from .toolchain_testfn import ToolchainSearch
from .sweep import SweepRecord, plan_matrix, run_sweep
from .summary import SweepSummary, summarize
from .report import ResultsDirectory
