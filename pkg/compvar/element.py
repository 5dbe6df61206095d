"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : element.py
Classes   : Element, ElementOrder, ElementSet
Summary   : Units of blame (source files, exported symbols within a file)
            and deterministic ordered, duplicate-free sets of them
Imports   : enums, errors
Example   : order = ElementOrder([Element.of_file("a.cpp"), Element.of_file("b.cpp")])
            items = canonicalize([Element.of_file("b.cpp")], order)
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from __future__ import annotations
from typing import Iterable, Iterator

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from enums import ElementKind
    from errors import ManifestError
else:
    from .enums import ElementKind
    from .errors import ManifestError


class Element(object):
    """a source file, or an exported function symbol within a file"""

    __slots__ = ("_kind", "_file", "_symbol", "_exported", "_display")

    def __init__(self,
        kind: ElementKind,
        file: str,
        symbol: str = None,
        exported: bool = True,
        display: str = None
    ) -> None:
        clean_file = (file or "").strip()
        if len(clean_file) == 0:
            raise ValueError("element file path must be non-empty")
        if clean_file.startswith("/"):
            raise ValueError(f"element file path must be project-relative: {clean_file}")
        clean_symbol = (symbol or "").strip()
        if kind == ElementKind.SYMBOL and len(clean_symbol) == 0:
            raise ValueError("symbol elements need a symbol name")
        if kind == ElementKind.FILE and len(clean_symbol) > 0:
            raise ValueError("file elements carry no symbol name")
        object.__setattr__(self, "_kind", kind)
        object.__setattr__(self, "_file", clean_file)
        object.__setattr__(self, "_symbol", clean_symbol or None)
        object.__setattr__(self, "_exported", bool(exported) if kind == ElementKind.SYMBOL else True)
        # demangled name, display only (not part of identity)
        object.__setattr__(self, "_display", display or clean_symbol or clean_file)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    @staticmethod
    def of_file(file: str) -> Element:
        return Element(ElementKind.FILE, file)

    @staticmethod
    def of_symbol(file: str, symbol: str, exported: bool = True, display: str = None) -> Element:
        return Element(ElementKind.SYMBOL, file, symbol, exported, display)

    @property
    def kind(self) -> ElementKind: return self._kind

    @property
    def file(self) -> str: return self._file

    @property
    def symbol(self) -> str | None: return self._symbol

    @property
    def exported(self) -> bool: return self._exported

    @property
    def display(self) -> str: return self._display

    def _key(self) -> tuple:
        return (self._kind.value, self._file, self._symbol or "", self._exported)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self._key() == other._key()
        return False

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        if self._kind == ElementKind.FILE:
            return self._file
        return f"{self._file}:{self._display}"

    def __repr__(self):
        return f"Element({self._kind.value}, {self._file!r}, {self._symbol!r})"

    def toJSON(self) -> dict:
        data = {"kind": self._kind.value, "file": self._file}
        if self._kind == ElementKind.SYMBOL:
            data["symbol"] = self._symbol
            data["exported"] = self._exported
            data["display"] = self._display
        return data

    @staticmethod
    def fromJSON(data: dict) -> Element:
        return Element(
            kind=ElementKind(data.get("kind", "file")),
            file=data.get("file", ""),
            symbol=data.get("symbol"),
            exported=data.get("exported", True),
            display=data.get("display"))


class ElementOrder(object):
    """canonical total order over the elements of one universe
    (manifest order for files, symbol-table order for symbols)"""

    def __init__(self, elements: Iterable[Element]) -> None:
        self._index = {}
        for element in elements:
            if element not in self._index:
                self._index[element] = len(self._index)
        self._elements = tuple(self._index)

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, element) -> bool:
        return element in self._index

    def position(self, element: Element) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise ManifestError(f"element not in manifest: {element}") from None

    def full(self) -> ElementSet:
        return ElementSet._trusted(self._elements, self)

    def empty(self) -> ElementSet:
        return ElementSet._trusted((), self)


class ElementSet(object):
    """ordered, duplicate-free, immutable set of elements in canonical order"""

    __slots__ = ("_elements", "_order", "_members")

    def __init__(self, elements: Iterable[Element], order: ElementOrder) -> None:
        unique = set(elements)
        for element in unique:
            order.position(element)
        self._elements = tuple(sorted(unique, key=order.position))
        self._order = order
        self._members = frozenset(self._elements)

    # internal constructor for tuples already known to be canonical
    @classmethod
    def _trusted(cls, elements: tuple, order: ElementOrder) -> ElementSet:
        instance = cls.__new__(cls)
        instance._elements = elements
        instance._order = order
        instance._members = frozenset(elements)
        return instance

    @property
    def order(self) -> ElementOrder: return self._order

    @property
    def elements(self) -> tuple[Element, ...]: return self._elements

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self._elements)

    def __contains__(self, element) -> bool:
        return element in self._members

    def __getitem__(self, index):
        if isinstance(index, slice):
            return ElementSet._trusted(self._elements[index], self._order)
        return self._elements[index]

    def __bool__(self) -> bool:
        return len(self._elements) > 0

    def union(self, other: Iterable[Element]) -> ElementSet:
        return ElementSet(list(self._elements) + list(other), self._order)

    def difference(self, other: Iterable[Element]) -> ElementSet:
        drop = other._members if isinstance(other, ElementSet) else set(other)
        return ElementSet._trusted(
            tuple(e for e in self._elements if e not in drop), self._order)

    def issubset(self, other: ElementSet) -> bool:
        return self._members <= other._members

    def __or__(self, other):
        return self.union(other)

    def __sub__(self, other):
        return self.difference(other)

    # identity is the member set; the order is implied by the universe
    def __eq__(self, other):
        if isinstance(other, ElementSet):
            return self._members == other._members
        return False

    def __hash__(self):
        return hash(self._members)

    def __str__(self):
        return "{" + ", ".join(str(e) for e in self._elements) + "}"

    def __repr__(self):
        return f"ElementSet({list(self._elements)!r})"

    def toJSON(self) -> list:
        return [e.toJSON() for e in self._elements]


def canonicalize(elements: Iterable[Element], order: ElementOrder) -> ElementSet:
    """duplicate-free canonical-order set; ManifestError for unknown elements"""
    if isinstance(elements, ElementSet) and elements.order is order:
        return elements
    return ElementSet(elements, order)


if __name__ == "__main__":
    files = [Element.of_file(f"src/f{n}.cpp") for n in range(4)]
    order = ElementOrder(files)
    print(canonicalize([files[3], files[1], files[1]], order))
