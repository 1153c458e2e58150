import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np
from numpy.testing import assert_allclose

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from thwaves.config import RunConfig
from thwaves.errors import ConfigError
from thwaves.reference_oracles import gaussian_profile
from thwaves.simulation import (
    frame_filename,
    max_bessel_order,
    resolve_time,
    run_series,
    run_snapshot,
    series_indices,
)
from thwaves.spectral_core import make_grid


class ResolveTimeTest(unittest.TestCase):
    def test_snaps_to_time_grid(self):
        grid = make_grid(301)
        for t in (0.0, 0.3, 1.0, 3.7, 5.7, 0.0034):
            j, snapped, requested = resolve_time(RunConfig(t=t), grid)
            self.assertEqual(requested, t)
            self.assertEqual(snapped, j * grid.dt)
            self.assertLessEqual(abs(t - snapped), grid.dt / 2 + 1e-15)

    def test_index_given(self):
        grid = make_grid(11)

        self.assertEqual(resolve_time(RunConfig(j=7), grid), (7, 7 * grid.dt, 7 * grid.dt))

    def test_exact_time_keeps_requested(self):
        grid = make_grid(11)
        cfg = RunConfig(t=0.123, method="spectral", exact_time=True)

        self.assertEqual(resolve_time(cfg, grid), (None, 0.123, 0.123))


class SnapshotTest(unittest.TestCase):
    def test_both_methods_columns_agree(self):
        cfg = RunConfig(n_points=101, t=1.0, traversals=2, method="both")

        result = run_snapshot(cfg, generate_output=False)

        snapshot = result.snapshot
        self.assertIsNone(result.output_path)
        self.assertEqual(
            snapshot.columns,
            ["x", "u_full", "u_toeplitz", "u_hankel", "u_toeplitz_bessel", "u_hankel_bessel", "u_dalembert"],
        )
        self.assertEqual(snapshot.data.shape, (101, 7))
        assert_allclose(snapshot.column("u_toeplitz_bessel"), snapshot.column("u_toeplitz"), atol=1e-8)
        assert_allclose(snapshot.column("u_hankel_bessel"), snapshot.column("u_hankel"), atol=1e-8)
        assert_allclose(snapshot.column("u_toeplitz") + snapshot.column("u_hankel"), snapshot.column("u_full"), atol=1e-10)
        self.assertEqual(snapshot.metadata["j"], 50)
        self.assertEqual(snapshot.metadata["max_bessel_order"], max_bessel_order(cfg))
        self.assertGreaterEqual(result.metrics.bessel_ms, 0.0)

    def test_metadata_keys(self):
        result = run_snapshot(RunConfig(n_points=11, j=3, traversals=1), generate_output=False)

        self.assertEqual(
            list(result.snapshot.metadata),
            [
                "n_points",
                "dx",
                "j",
                "t",
                "t_requested",
                "traversals",
                "method",
                "max_bessel_order",
                "sigma",
                "exact_horizon_j",
            ],
        )
        self.assertEqual(result.snapshot.metadata["exact_horizon_j"], 4)

    def test_bessel_method_fills_plain_columns(self):
        result = run_snapshot(RunConfig(n_points=51, j=10, method="bessel"), generate_output=False)

        self.assertEqual(result.snapshot.columns, ["x", "u_full", "u_toeplitz", "u_hankel", "u_dalembert"])

    def test_spectral_initial_time_is_gaussian(self):
        cfg = RunConfig(n_points=301, t=0.0, method="spectral")
        result = run_snapshot(cfg, generate_output=False)

        expected = gaussian_profile(make_grid(301)).values
        assert_allclose(result.snapshot.column("u_full"), expected, atol=1e-12)
        self.assertEqual(result.snapshot.metadata["max_bessel_order"], 0)
        self.assertIsNone(result.snapshot.metadata["exact_horizon_j"])

    def test_exact_time_spectral(self):
        cfg = RunConfig(n_points=51, t=0.123, method="spectral", exact_time=True)
        result = run_snapshot(cfg, generate_output=False)

        self.assertIsNone(result.j)
        self.assertEqual(result.snapshot.metadata["t"], 0.123)

    def test_warns_beyond_horizon(self):
        cfg = RunConfig(n_points=11, j=9, traversals=1)

        with self.assertLogs("thwaves.simulation", level="WARNING") as logs:
            run_snapshot(cfg, generate_output=False)

        self.assertIn("horizonte", logs.output[0])

    def test_writes_default_file_and_skips_existing(self):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = RunConfig(n_points=11, j=3, output_dir=Path(tmp))
            first = run_snapshot(cfg)
            self.assertEqual(first.output_path, Path(tmp) / "snapshot_j000003.csv")
            self.assertFalse(first.skipped_existing)
            first.output_path.write_text("editado", encoding="utf-8")

            second = run_snapshot(cfg)
            self.assertTrue(second.skipped_existing)
            self.assertEqual(second.output_path.read_text(encoding="utf-8"), "editado")

            cfg.overwrite = True
            third = run_snapshot(cfg)
            self.assertFalse(third.skipped_existing)
            self.assertTrue(third.output_path.read_text(encoding="utf-8").startswith("# n_points=11"))

    def test_relative_output_goes_to_output_dir(self):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = RunConfig(n_points=11, j=1, output_dir=Path(tmp), output_path=Path("a/b.json"), output_format="json")
            result = run_snapshot(cfg)

            self.assertEqual(result.output_path, Path(tmp) / "a" / "b.json")
            self.assertTrue(result.output_path.exists())

    def test_missing_time_rejected(self):
        with self.assertRaises(ConfigError):
            run_snapshot(RunConfig(n_points=11), generate_output=False)


class SeriesTest(unittest.TestCase):
    def test_indices(self):
        grid = make_grid(11)
        cfg = RunConfig(n_points=11, t=0.2, until=1.0, every=2)

        self.assertEqual(series_indices(cfg, grid), [1, 3, 5])
        self.assertEqual(frame_filename(12, "csv"), "frame_000012.csv")

    def test_thread_count_does_not_change_output(self):
        with tempfile.TemporaryDirectory() as tmp:
            outputs = []
            for threads in (1, 3):
                out = Path(tmp) / f"hilos_{threads}"
                cfg = RunConfig(n_points=31, t=0.0, until=0.6, threads=threads, output_path=out, traversals=2)
                series = run_series(cfg)
                self.assertEqual([frame.j for frame in series.frames], list(range(10)))
                self.assertEqual(series.written, 10)
                outputs.append({path.name: path.read_bytes() for path in sorted(out.iterdir())})

            self.assertEqual(outputs[0], outputs[1])
            self.assertIn("frame_000009.csv", outputs[0])

    def test_existing_frames_skipped(self):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = RunConfig(n_points=11, t=0.0, until=0.4, threads=1, output_dir=Path(tmp))
            first = run_series(cfg)
            second = run_series(cfg)

            self.assertEqual(first.output_dir, Path(tmp) / "frames")
            self.assertEqual((first.written, first.skipped), (3, 0))
            self.assertEqual((second.written, second.skipped), (0, 3))

    def test_requires_until(self):
        with self.assertRaises(ConfigError):
            run_series(RunConfig(n_points=11, t=0.0))


if __name__ == "__main__":
    unittest.main()
