import os
import tempfile
import unittest

from tautrenewal.api.internal import format_float, read_rows, write_rows


class CsvTest(unittest.TestCase):
    def test_format_float(self):
        self.assertEqual(format_float(0.1), "0.10000000000000001")
        self.assertEqual(format_float(2.0), "2")
        self.assertEqual(float(format_float(1 / 3)), 1 / 3)

    def test_rows_round_trip_as_text(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = os.path.join(tmp, "rows.csv")
            write_rows(target, ("i", "x", "flag", "side"), [(1, 0.5, True, "U")])
            with open(target, encoding="utf-8") as fh:
                self.assertEqual(fh.read(), "i,x,flag,side\n1,0.5,true,U\n")
            header, rows = read_rows(target)
        self.assertEqual(header, ["i", "x", "flag", "side"])
        self.assertEqual(rows, [["1", "0.5", "true", "U"]])

    def test_empty_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = os.path.join(tmp, "empty.csv")
            open(target, "w").close()
            self.assertEqual(read_rows(target), ([], []))
