import json
import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np
from numpy.testing import assert_array_equal
from openpyxl import load_workbook

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from thwaves.errors import ThwavesError
from thwaves.snapshot_writer import (
    Snapshot,
    format_bessel_table,
    format_csv,
    read_csv_snapshot,
    write_snapshot,
)


def sample_snapshot():
    data = np.array(
        [
            [-1.0, 0.1, 1.0 / 3.0],
            [0.0, 2.5e-17, -7.0],
            [1.0, 0.30000000000000004, 1e300],
        ]
    )
    return Snapshot(
        columns=["x", "u_full", "u_toeplitz"],
        data=data,
        metadata={"n_points": 3, "dx": 1.0, "j": 2, "t": np.float64(2.0), "method": "both", "exact_horizon_j": None},
    )


class CsvTest(unittest.TestCase):
    def test_layout(self):
        text = format_csv(sample_snapshot())
        lines = text.splitlines()

        self.assertEqual(
            lines[:6],
            ["# n_points=3", "# dx=1", "# j=2", "# t=2", "# method=both", "# exact_horizon_j="],
        )
        self.assertEqual(lines[6], "x,u_full,u_toeplitz")
        self.assertEqual(lines[7], "-1,0.10000000000000001,0.33333333333333331")
        self.assertTrue(text.endswith("\n"))

    def test_values_survive_written_form(self):
        snapshot = sample_snapshot()
        with tempfile.TemporaryDirectory() as tmp:
            path = write_snapshot(snapshot, Path(tmp) / "sub" / "snap.csv", "csv")
            parsed = read_csv_snapshot(path)

        self.assertEqual(parsed.columns, snapshot.columns)
        assert_array_equal(parsed.data, snapshot.data)
        self.assertEqual(parsed.metadata["method"], "both")
        self.assertEqual(parsed.metadata["j"], "2")

    def test_same_snapshot_same_bytes(self):
        with tempfile.TemporaryDirectory() as tmp:
            first = write_snapshot(sample_snapshot(), Path(tmp) / "a.csv", "csv")
            second = write_snapshot(sample_snapshot(), Path(tmp) / "b.csv", "csv")

            self.assertEqual(first.read_bytes(), second.read_bytes())


class JsonTest(unittest.TestCase):
    def test_payload(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_snapshot(sample_snapshot(), Path(tmp) / "snap.json", "json")
            payload = json.loads(path.read_text(encoding="utf-8"))

        self.assertEqual(payload["columns"], ["x", "u_full", "u_toeplitz"])
        self.assertEqual(payload["metadata"]["t"], 2.0)
        self.assertIsNone(payload["metadata"]["exact_horizon_j"])
        self.assertEqual(payload["rows"][2][1], 0.30000000000000004)
        self.assertEqual(len(payload["rows"]), 3)


class XlsxTest(unittest.TestCase):
    def test_workbook_sheets(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_snapshot(sample_snapshot(), Path(tmp) / "snap.xlsx", "xlsx")
            wb = load_workbook(path)

            self.assertEqual(wb.sheetnames, ["Snapshot", "Metadata"])
            ws = wb["Snapshot"]
            self.assertEqual([cell.value for cell in ws[1]], ["x", "u_full", "u_toeplitz"])
            self.assertEqual(ws["C2"].value, 1.0 / 3.0)
            self.assertEqual(ws["B2"].number_format, "0.0000000000000000E+00")

            meta = wb["Metadata"]
            self.assertEqual([cell.value for cell in meta[1]], ["Campo", "Valor"])
            self.assertEqual(meta["A2"].value, "n_points")
            self.assertEqual(meta["B2"].value, 3)
            self.assertEqual(meta.column_dimensions["B"].width, 40)


class WriterDispatchTest(unittest.TestCase):
    def test_unknown_format(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(ThwavesError) as ctx:
                write_snapshot(sample_snapshot(), Path(tmp) / "snap.bin", "bin")

        self.assertEqual(ctx.exception.code, "invalid_format")

    def test_column_lookup(self):
        assert_array_equal(sample_snapshot().column("u_toeplitz"), [1.0 / 3.0, -7.0, 1e300])


class BesselTableFormatTest(unittest.TestCase):
    def test_rows(self):
        self.assertEqual(format_bessel_table([1.0, 0.0, 0.0, 0.0]), "n,J_n\n0,1\n1,0\n2,0\n3,0\n")

    def test_single_row(self):
        value = 0.2238907791412357
        self.assertEqual(format_bessel_table([value]), "n,J_n\n0,%.17g\n" % value)


if __name__ == "__main__":
    unittest.main()
