"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : wirelib.py
Summary   :
Regular expression patterns for the text formats CompVar reads from external
programs: the test-executable output protocol (C99 hexadecimal floating-point
literals) and symbol-table listings in nm format
Uses 'regex' lib rather than 're' for consistency with the pattern helpers
Imports   : regex, enums, errors, testscore
Example   : parse_output("SCALAR\\n0x1.8p+1\\n")  # TestValue.scalar(3.0)
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
from dataclasses import dataclass
import regex

if __package__ is None or __package__ == '':
    # uses current directory visibility
    from enums import ResultKind
    from errors import RunError
    from testscore import TestValue
else:
    from .enums import ResultKind
    from .errors import RunError
    from .testscore import TestValue

# common regex patterns as constant strings
SPACE = r"[ \t]"
SIGN = r"[+-]"
HEXDIGIT = r"[0-9a-f]"
DECIMAL = r"\d+"


# functions for constructing regex groups
# returns: '(?:value)' or '(?P<name>value)'
def group(value: str, name: str = None, repeater: str = None) -> str:
    clean_name = (name or "").strip()
    clean_val = (value or "").strip()
    clean_rep = (repeater or "").strip()

    if len(clean_name) > 0:
        return f"(?P<{clean_name}>{clean_val}){clean_rep}"
    else:
        return f"(?:{clean_val}){clean_rep}"


# returns: '(?:value)?' or '(?P<name>value)?'
def maybe(value: str, name: str = None) -> str:
    return group(value, name, "?")


# returns: '(?:value)+' or '(?P<name>value)+'
def oneormore(value: str, name: str = None) -> str:
    return group(value, name, "+")


# returns '(?:value1|value2|value3)' or '(?P<name>value1|value2|value3)'
def oneof(values: list, name: str = None) -> str:
    return group("|".join(values), name)


# C99 hexadecimal float as written by printf("%a"), e.g. "-0x1.8p+1"
HEXFRACTION = r"\." + group(HEXDIGIT, None, "*")
HEXMANTISSA = oneof([
    "0x" + oneormore(HEXDIGIT) + maybe(HEXFRACTION),
    r"0x\." + oneormore(HEXDIGIT)
])
HEXEXPONENT = f"p{maybe(SIGN)}{DECIMAL}"
HEXFLOAT = group(
    maybe(SIGN) + oneof([
        HEXMANTISSA + HEXEXPONENT,
        "inf(?:inity)?",
        "nan"
    ]), "value")

# output headers: "SCALAR", "VECTOR <n>", "STRING <bytes>"
HEADER = oneof([
    group("SCALAR", "scalar"),
    f"{group('VECTOR', 'vector')}{oneormore(SPACE)}{group(DECIMAL, 'count')}",
    f"{group('STRING', 'string')}{oneormore(SPACE)}{group(DECIMAL, 'size')}"
])

# nm line: address, one-letter symbol type, name (demangled names contain spaces)
NMLINE = (
    group("[0-9a-f]+", "address") +
    oneormore(SPACE) +
    group("[A-Za-z]", "type") +
    oneormore(SPACE) +
    group(".+", "name")
)


def parse_hexfloat(text: str) -> float:
    clean = (text or "").strip()
    found = regex.fullmatch(HEXFLOAT, clean, regex.IGNORECASE)
    if found is None:
        raise RunError(f"not a hexadecimal floating-point literal: {clean!r}")
    return float.fromhex(found.group("value"))


def format_hexfloat(value: float) -> str:
    return float(value).hex()


# one hexadecimal literal per line
def format_input(values) -> str:
    return "".join(f"{format_hexfloat(v)}\n" for v in values)


def _decode(data: bytes, encoding: str, what: str) -> str:
    try:
        return data.decode(encoding)
    except UnicodeDecodeError as e:
        raise RunError(f"{what} is not valid {encoding}: {data[e.start:e.start + 8]!r}") from None


def parse_output(output: bytes | str) -> TestValue:
    """decode the standard output of one test-executable run; STRING payloads
    are framed by their byte length and kept byte-exact"""
    data = output.encode("utf-8") if isinstance(output, str) else bytes(output or b"")
    raw_header, _, payload = data.partition(b"\n")
    header = _decode(raw_header, "ascii", "output header").strip()
    found = regex.fullmatch(HEADER, header)
    if found is None:
        raise RunError(f"malformed output header: {header[:80]!r}")

    if found.group("string"):
        size = int(found.group("size"))
        # a single trailing newline after the payload is tolerated
        if len(payload) == size + 1 and payload.endswith(b"\n"):
            payload = payload[:-1]
        if len(payload) != size:
            raise RunError(f"STRING payload has {len(payload)} bytes, header says {size}")
        return TestValue.of_text(_decode(payload, "utf-8", "STRING payload"))

    text = _decode(payload, "ascii", f"{header} payload")
    lines = [line.strip() for line in text.splitlines() if len(line.strip()) > 0]
    if found.group("scalar"):
        if len(lines) != 1:
            raise RunError(f"SCALAR output needs exactly one value, got {len(lines)}")
        return TestValue.scalar(parse_hexfloat(lines[0]))

    count = int(found.group("count"))
    if len(lines) != count:
        raise RunError(f"VECTOR {count} output has {len(lines)} values")
    return TestValue.vector(parse_hexfloat(line) for line in lines)


def format_output(value: TestValue) -> str:
    """encode a test value the way a test executable writes it"""
    if value.kind == ResultKind.TEXT:
        return f"STRING {len(value.text.encode('utf-8'))}\n{value.text}"
    if value.kind == ResultKind.SCALAR and len(value.numbers) == 1:
        return f"SCALAR\n{format_hexfloat(value.numbers[0])}\n"
    return f"VECTOR {len(value.numbers)}\n" + format_input(value.numbers)


@dataclass(frozen=True)
class SymbolEntry:
    address: str
    type: str
    name: str

    # global strong function defined in this object ('T')
    @property
    def is_exported_function(self) -> bool:
        return self.type == "T"


# returns SymbolEntry, or None for headers/blank/undefined lines
def parse_nm_line(line: str) -> SymbolEntry | None:
    found = regex.fullmatch(NMLINE, (line or "").rstrip(), regex.IGNORECASE)
    if found is None:
        return None
    return SymbolEntry(found.group("address"), found.group("type"), found.group("name").strip())


if __name__ == "__main__":
    print(parse_output("SCALAR\n0x1.8p+1\n"))
    print(parse_nm_line("0000000000000040 T _Z9kahan_sumPKdm"))
