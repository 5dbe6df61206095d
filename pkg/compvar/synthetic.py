"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : synthetic.py
Classes   : Injection, SyntheticProject
Summary   : Synthetic projects with known injected variability, giving a
            Test function without any compiler (files and symbols are
            simulated, Test values are exact sums of powers of two)
Imports   : math, random, dataclasses, logging, element, enums, testfn,
            testscore
Example   : project = generate_project(1, 4, 3, 2)
            test = make_test_fn(project, Granularity.FILES)
            test(project.file_order.full())  # 0.75
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
import logging
import math
import random
from dataclasses import dataclass, field

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from element import Element, ElementOrder, ElementSet
    from enums import Granularity, InjectionMode
    from testfn import TestFn
    from testscore import TestScore
else:
    from .element import Element, ElementOrder, ElementSet
    from .enums import Granularity, InjectionMode
    from .testfn import TestFn
    from .testscore import TestScore

logger = logging.getLogger(__name__)

# sums of distinct powers 2**-1 .. 2**-52 are exact in a double
MAX_INJECTIONS = 52
COLLISION_MAGNITUDE = 0.25


def mangle(name: str) -> str:
    """Itanium-style mangled name of a void function taking no arguments"""
    return f"_Z{len(name)}{name}v"


@dataclass(frozen=True)
class Injection:
    site: Element
    magnitude: float                    # signed, 0 for benign injections
    caller: Element | None = None       # exported symbol the site is attributed to
    partner: Element | None = None      # coupled: contributes only with partner present

    @property
    def elements(self) -> tuple[Element, ...]:
        return tuple(e for e in (self.site, self.partner) if e is not None)

    def toJSON(self) -> dict:
        return {
            "site": str(self.site),
            "exported": self.site.exported,
            "magnitude": self.magnitude,
            "caller": None if self.caller is None else str(self.caller),
            "partner": None if self.partner is None else str(self.partner)
        }


@dataclass
class SyntheticProject:
    seed: int
    mode: InjectionMode
    files: list[tuple[str, list[Element]]]
    injections: list[Injection] = field(default_factory=list)
    sub_file_cancellation: bool = False

    def __post_init__(self):
        self._file_order = ElementOrder(Element.of_file(name) for name, _ in self.files)
        self._symbol_orders = {
            name: ElementOrder(s for s in symbols if s.exported) for name, symbols in self.files
        }

    @property
    def file_order(self) -> ElementOrder: return self._file_order

    # per-symbol exported flag
    @property
    def exported_flags(self) -> dict[Element, bool]:
        return {s: s.exported for _, symbols in self.files for s in symbols}

    def all_files(self) -> ElementSet:
        return self._file_order.full()

    # exported symbols of one file, in symbol-table order
    def symbols_of(self, file: Element) -> ElementSet:
        return self._symbol_orders[file.file].full()

    @property
    def injected_sites(self) -> list[Element]:
        return [e for inj in self.injections for e in inj.elements]

    @property
    def injected_files(self) -> list[str]:
        names = {e.file for e in self.injected_sites}
        return [name for name, _ in self.files if name in names]

    # True when no injection can change a Test value
    @property
    def is_benign(self) -> bool:
        return all(inj.magnitude == 0 for inj in self.injections)

    def toJSON(self) -> dict:
        return {
            "seed": self.seed,
            "mode": self.mode.value,
            "files": len(self.files),
            "symbols": sum(len(symbols) for _, symbols in self.files),
            "sub_file_cancellation": self.sub_file_cancellation,
            "injections": [inj.toJSON() for inj in self.injections]
        }


def generate_project(
    seed: int,
    n_files: int,
    symbols_per_file: int,
    n_injections: int,
    mode: InjectionMode = InjectionMode.INDEPENDENT,
    sub_file_cancellation: bool = False,
    distinct_files: bool = False,
    attribute_to_caller: bool = True
) -> SyntheticProject:
    """deterministic in seed; injection sites are drawn without replacement

    distinct_files places every injection in a different file.
    attribute_to_caller (non-exported mode) designates an exported caller
    for each hidden site; without one the site is visible at file level only.
    """
    if n_files < 1 or symbols_per_file < 1:
        raise ValueError("a project needs at least one file and one symbol per file")
    if n_injections < 0 or n_injections > n_files * symbols_per_file:
        raise ValueError(f"n_injections={n_injections} outside 0..{n_files * symbols_per_file}")
    if n_injections > MAX_INJECTIONS:
        raise ValueError(f"n_injections={n_injections} above {MAX_INJECTIONS}, sums would not be exact")
    if distinct_files and n_injections > n_files:
        raise ValueError(f"{n_injections} injections cannot sit in {n_files} distinct files")
    if mode == InjectionMode.COUPLED and n_injections < 2:
        raise ValueError("coupled mode needs at least two injections")
    if mode == InjectionMode.NON_EXPORTED and attribute_to_caller and symbols_per_file < 2:
        raise ValueError("non-exported mode needs a second symbol per file as caller")
    if sub_file_cancellation and (n_injections < 2 or symbols_per_file < 2):
        raise ValueError("sub-file cancellation needs two injections in one file")
    if sub_file_cancellation and distinct_files:
        raise ValueError("sub-file cancellation puts two injections in one file")

    rng = random.Random(seed)
    names = [[f"f{fi:02d}_s{si:02d}" for si in range(symbols_per_file)] for fi in range(n_files)]
    paths = [f"src/f{fi:02d}.cpp" for fi in range(n_files)]

    # pick (file index, symbol index) sites
    slots = [(fi, si) for fi in range(n_files) for si in range(symbols_per_file)]
    if distinct_files:
        chosen_files = rng.sample(range(n_files), n_injections)
        sites = [(fi, rng.randrange(symbols_per_file)) for fi in chosen_files]
    else:
        sites = rng.sample(slots, n_injections)
    if sub_file_cancellation:
        # the second site shares the first site's file
        fi = sites[0][0]
        others = [si for si in range(symbols_per_file) if si != sites[0][1]]
        sites[1] = (fi, rng.choice(others))
        if len(set(sites)) != len(sites):
            taken = set(sites[:2])
            free = [slot for slot in slots if slot not in taken and slot not in sites[2:]]
            for i in range(2, len(sites)):
                if sites[i] in taken:
                    sites[i] = free.pop(rng.randrange(len(free)))
                taken.add(sites[i])

    hidden = set(sites) if mode == InjectionMode.NON_EXPORTED else set()
    symbols = {}
    files = []
    for fi in range(n_files):
        file_symbols = []
        for si in range(symbols_per_file):
            name = names[fi][si]
            element = Element.of_symbol(paths[fi], mangle(name), (fi, si) not in hidden, f"{name}()")
            symbols[(fi, si)] = element
            file_symbols.append(element)
        files.append((paths[fi], file_symbols))

    def magnitude(rank: int) -> float:
        if mode == InjectionMode.ZERO_MAGNITUDE:
            return 0.0
        if mode == InjectionMode.COLLISION:
            return COLLISION_MAGNITUDE
        value = math.ldexp(1.0, -(rank + 1))
        # second site partly cancels the first inside their shared file
        if sub_file_cancellation and rank == 1:
            value = -value
        return value

    injections = []
    if mode == InjectionMode.COUPLED:
        pairs = [sites[i:i + 2] for i in range(0, len(sites), 2)]
        for rank, pair in enumerate(pairs):
            partner = symbols[pair[1]] if len(pair) == 2 else None
            injections.append(Injection(symbols[pair[0]], magnitude(rank), partner=partner))
    else:
        for rank, site in enumerate(sites):
            caller = None
            if site in hidden and attribute_to_caller:
                fi, si = site
                candidates = [s for s in range(symbols_per_file) if (fi, s) not in hidden]
                if len(candidates) > 0:
                    caller = symbols[(fi, rng.choice(candidates))]
            injections.append(Injection(symbols[site], magnitude(rank), caller=caller))

    project = SyntheticProject(seed, mode, files, injections, sub_file_cancellation)
    logger.debug(f"generated project seed={seed} mode={mode.value} injections={len(injections)}")
    return project


def _file_contribution(project: SyntheticProject, items: ElementSet) -> float:
    present = {e.file for e in items}
    terms = []
    for inj in project.injections:
        if all(e.file in present for e in inj.elements):
            terms.append(inj.magnitude)
    return abs(math.fsum(terms))


def _symbol_contribution(project: SyntheticProject, items: ElementSet) -> float:
    terms = []
    for inj in project.injections:
        def active(element: Element) -> bool:
            if element.exported:
                return element in items
            return inj.caller is not None and inj.caller in items
        if all(active(e) for e in inj.elements):
            terms.append(inj.magnitude)
    return abs(math.fsum(terms))


def make_test_fn(project: SyntheticProject, granularity: Granularity, file: Element = None) -> TestFn:
    """Test over file sets, or over the exported symbols of one file
    with every other file held at the baseline"""
    if granularity == Granularity.FILES:
        return TestFn(lambda items: TestScore.measured(_file_contribution(project, items)), "sim-files")

    if file is None or file not in project.file_order:
        raise ValueError(f"symbol granularity needs a project file, got {file}")

    def evaluate(items: ElementSet) -> TestScore:
        # symbols of other files stay baseline
        local = ElementSet._trusted(tuple(e for e in items if e.file == file.file), items.order)
        return TestScore.measured(_symbol_contribution(project, local))

    return TestFn(evaluate, f"sim-symbols:{file.file}")
