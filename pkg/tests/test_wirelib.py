"""
=============================================================================
Project   : CompVar
Package   : compvar
Module    : test_wirelib.py
Summary   : Unit tests for the test-executable protocol and nm line parsing
Imports   : unittest, compvar.wirelib
Example   : python3 -m unittest tests.test_wirelib
=============================================================================
History
19/10/2026 Initially created script
=============================================================================
"""
import math
import unittest

from compvar import wirelib
from compvar.enums import ResultKind
from compvar.errors import RunError
from compvar.testscore import TestValue


class TestWireProtocol(unittest.TestCase):

    def test_parseHexfloat(self):
        self.assertEqual(3.0, wirelib.parse_hexfloat("0x1.8p+1"))
        self.assertEqual(-0.5, wirelib.parse_hexfloat("-0x1p-1"))
        self.assertEqual(0.0, wirelib.parse_hexfloat("0x0p+0"))

    def test_parseHexfloatSpecialValues(self):
        self.assertTrue(math.isinf(wirelib.parse_hexfloat("-inf")))
        self.assertTrue(math.isnan(wirelib.parse_hexfloat("nan")))

    def test_parseHexfloatRejectsDecimal(self):
        with self.assertRaises(RunError):
            wirelib.parse_hexfloat("1.5")

    def test_formatInput(self):
        expected = "0x1.0000000000000p+0\n0x1.8000000000000p+1\n"
        self.assertEqual(expected, wirelib.format_input([1.0, 3.0]))

    def test_parseScalar(self):
        value = wirelib.parse_output("SCALAR\n0x1.8p+1\n")
        self.assertEqual(TestValue.scalar(3.0), value)

    def test_parseVector(self):
        value = wirelib.parse_output("VECTOR 3\n0x1p+0\n0x1p+1\n-0x1p+2\n")
        self.assertEqual((1.0, 2.0, -4.0), value.numbers)
        self.assertEqual(ResultKind.VECTOR, value.kind)

    def test_parseVectorCountMismatch(self):
        with self.assertRaises(RunError):
            wirelib.parse_output("VECTOR 3\n0x1p+0\n")

    def test_parseString(self):
        value = wirelib.parse_output("STRING 5\nhello\n")
        self.assertEqual("hello", value.text)

    def test_parseStringWrongSize(self):
        with self.assertRaises(RunError):
            wirelib.parse_output("STRING 9\nhello")

    def test_parseBytes(self):
        self.assertEqual(TestValue.scalar(1.0), wirelib.parse_output(b"SCALAR\n0x1p+0\n"))

    def test_stringIsByteFramed(self):
        self.assertEqual("a\r\n", wirelib.parse_output(b"STRING 3\na\r\n").text)
        self.assertEqual("é", wirelib.parse_output("STRING 2\né").text)

    def test_invalidUtf8StringIsRunError(self):
        with self.assertRaises(RunError):
            wirelib.parse_output(b"STRING 2\n\xff\xfe")

    def test_nonAsciiOutputIsRunError(self):
        with self.assertRaises(RunError):
            wirelib.parse_output(b"\xffSCALAR\n0x1p+0\n")
        with self.assertRaises(RunError):
            wirelib.parse_output(b"VECTOR 1\n0x1p+0\xa0\n")

    def test_malformedHeader(self):
        with self.assertRaises(RunError):
            wirelib.parse_output("RESULT\n0x1p+0\n")

    def test_scalarNeedsOneValue(self):
        with self.assertRaises(RunError):
            wirelib.parse_output("SCALAR\n0x1p+0\n0x1p+1\n")

    def test_formatOutputIsParsedBack(self):
        for value in (TestValue.scalar(0.1), TestValue.vector([1e-300, -2.5]), TestValue.of_text("a b")):
            self.assertEqual(value, wirelib.parse_output(wirelib.format_output(value)))


class TestNmLines(unittest.TestCase):

    def test_exportedFunction(self):
        entry = wirelib.parse_nm_line("0000000000000040 T _Z9kahan_sumPKdm")
        self.assertEqual("_Z9kahan_sumPKdm", entry.name)
        self.assertTrue(entry.is_exported_function)

    def test_localFunction(self):
        entry = wirelib.parse_nm_line("0000000000000000 t _ZL10kahan_testRKSt6vectorIdSaIdEE")
        self.assertFalse(entry.is_exported_function)

    def test_weakFunction(self):
        entry = wirelib.parse_nm_line("0000000000000000 W _ZNSt6vectorIdSaIdEED2Ev")
        self.assertEqual("W", entry.type)
        self.assertFalse(entry.is_exported_function)

    def test_demangledNameWithSpaces(self):
        entry = wirelib.parse_nm_line("0000000000000080 T count_nonzero(double const*, unsigned long)")
        expected = "count_nonzero(double const*, unsigned long)"
        self.assertEqual(expected, entry.name)

    def test_undefinedLineIgnored(self):
        self.assertIsNone(wirelib.parse_nm_line("                 U printf"))
        self.assertIsNone(wirelib.parse_nm_line(""))


if __name__ == "__main__":
    unittest.main()
