import io
import os
import json
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

import numpy as np
import pandas as pd

from rvfl.cli import EXIT_CONFIG, EXIT_DATA, EXIT_NUMERICAL, EXIT_OK, band_filename, curve_filename, main
from rvfl.errors import NumericalError

SYNTH = {"d": 5, "m": 2, "segment_length": 400, "n_segments": 2, "separation": 5.0, "seed": 3}


class CliTest(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def path(self, *parts):
        return os.path.join(self.tmp, *parts)

    def write_json(self, name, doc):
        path = self.path(name)
        with open(path, "w") as f:
            json.dump(doc, f)
        return path

    def run_main(self, argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(argv)
        return code, out.getvalue(), err.getvalue()

    def config(self, **overrides):
        doc = {
            "data": {"synthetic": SYNTH},
            "methods": [{"method": "rvfl_uniform"}, {"method": "lite", "theta": 1.003}],
            "seeds": [0, 1],
            "offline_count": 100,
            "window": 100,
            "output_dir": self.path("out"),
        }
        doc.update(overrides)
        return self.write_json("config.json", doc)


class CalibrateTest(CliTest):

    def test_default_theta(self):
        code, out, _ = self.run_main(["calibrate", "--alpha", "0.8", "--window", "500"])
        self.assertEqual(code, EXIT_OK)
        theta = float(out.split("\n")[0].split("=")[1])
        self.assertAlmostEqual(theta, 1.0032241, delta=1e-6)

    def test_alpha_out_of_range(self):
        code, out, err = self.run_main(["calibrate", "--alpha", "1.2", "--window", "500"])
        self.assertEqual(code, EXIT_CONFIG)
        self.assertEqual(out, "")
        self.assertIn("alpha", err)

    def test_bad_arguments(self):
        self.assertEqual(self.run_main([])[0], EXIT_CONFIG)
        self.assertEqual(self.run_main(["calibrate", "--alpha", "x", "--window", "5"])[0], EXIT_CONFIG)


class SynthTest(CliTest):

    def test_writes_stream(self):
        spec = self.write_json("spec.json", SYNTH)
        code, _, _ = self.run_main(["synth", "--spec", spec, "--out", self.path("a.csv")])
        self.assertEqual(code, EXIT_OK)
        with open(self.path("a.csv")) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], "x1,x2,x3,x4,x5,label")
        self.assertEqual(len(lines), 801)

    def test_reruns_are_identical(self):
        spec = self.write_json("spec.json", SYNTH)
        self.run_main(["synth", "--spec", spec, "--out", self.path("a.csv")])
        self.run_main(["synth", "--spec", spec, "--out", self.path("b.csv")])
        with open(self.path("a.csv"), "rb") as a, open(self.path("b.csv"), "rb") as b:
            self.assertEqual(a.read(), b.read())

    def test_zero_length_segment(self):
        spec = self.write_json("spec.json", {"segments": [{"length": 0, "class_means": [[0.0], [1.0]]}]})
        code, _, err = self.run_main(["synth", "--spec", spec, "--out", self.path("a.csv")])
        self.assertEqual(code, EXIT_CONFIG)
        self.assertIn("length", err)
        self.assertFalse(os.path.exists(self.path("a.csv")))

    def test_unwritable_output(self):
        spec = self.write_json("spec.json", SYNTH)
        code, _, _ = self.run_main(["synth", "--spec", spec, "--out", self.path("missing", "a.csv")])
        self.assertEqual(code, EXIT_DATA)


class RunTest(CliTest):

    def test_synthetic_run(self):
        code, out, _ = self.run_main(["run", "--config", self.config()])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("Lite-RVFL(theta=1.003)", out)
        for method in ("RVFL", "Lite-RVFL(theta=1.003)"):
            for seed in (0, 1):
                self.assertTrue(os.path.exists(self.path("out", "curves", curve_filename(method, seed))))
        self.assertTrue(os.path.exists(self.path("out", "summary.txt")))
        with open(self.path("out", "summary.json")) as f:
            summary = json.load(f)
        self.assertEqual(summary["seeds"], [0, 1])
        self.assertEqual(len(summary["runs"]), 4)
        ranks = dict((m["method"], m["accuracy_rank"]) for m in summary["methods"])
        self.assertLess(ranks["Lite-RVFL(theta=1.003)"], ranks["RVFL"])

    def test_parallel_matches_serial(self):
        config = self.config()
        self.run_main(["run", "--config", config, "--out", self.path("serial")])
        code, _, _ = self.run_main(["run", "--config", config, "--jobs", "2", "--out", self.path("parallel")])
        self.assertEqual(code, EXIT_OK)
        name = curve_filename("Lite-RVFL(theta=1.003)", 1)
        with open(self.path("serial", "curves", name)) as a, open(self.path("parallel", "curves", name)) as b:
            self.assertEqual(a.read(), b.read())

    def test_unknown_method(self):
        config = self.config(methods=[{"method": "boosted"}])
        code, _, err = self.run_main(["run", "--config", config])
        self.assertEqual(code, EXIT_CONFIG)
        self.assertIn("boosted", err)
        self.assertFalse(os.path.exists(self.path("out")))

    def test_every_problem_reported(self):
        config = self.config(methods=[{"method": "managed"}, {"method": "alt", "theta": 1.01}], window=0)
        code, _, err = self.run_main(["run", "--config", config])
        self.assertEqual(code, EXIT_CONFIG)
        self.assertIn("$.window", err)

    def test_missing_config(self):
        self.assertEqual(self.run_main(["run", "--config", self.path("nope.json")])[0], EXIT_CONFIG)

    def test_missing_data_file(self):
        config = self.config(data={"path": self.path("nope.csv"), "preset": "dsms"})
        code, _, _ = self.run_main(["run", "--config", config])
        self.assertEqual(code, EXIT_DATA)

    def test_stream_shorter_than_offline(self):
        config = self.config(offline_count=800)
        self.assertEqual(self.run_main(["run", "--config", config])[0], EXIT_DATA)

    def test_numerical_failure(self):
        error = NumericalError("update lost positive definiteness")
        with mock.patch("rvfl.cli.run_experiments", side_effect=error):
            code, _, err = self.run_main(["run", "--config", self.config()])
        self.assertEqual(code, EXIT_NUMERICAL)
        self.assertIn("numerical failure", err)

    def test_bad_jobs(self):
        self.assertEqual(self.run_main(["run", "--config", self.config(), "--jobs", "0"])[0], EXIT_CONFIG)

    def test_mean_std_curves(self):
        self.assertEqual(self.run_main(["run", "--config", self.config()])[0], EXIT_OK)
        method = "Lite-RVFL(theta=1.003)"
        band = pd.read_csv(self.path("out", "curves", band_filename(method)))
        self.assertEqual(list(band.columns),
                         ["step", "cumulative_mean", "cumulative_std", "windowed_mean", "windowed_std"])
        self.assertEqual(len(band), 700)
        runs = [pd.read_csv(self.path("out", "curves", curve_filename(method, seed))) for seed in (0, 1)]
        np.testing.assert_allclose(band["windowed_mean"],
                                   (runs[0]["windowed_accuracy"] + runs[1]["windowed_accuracy"]) / 2, rtol=1e-12)
        spread = (runs[0]["cumulative_accuracy"] - runs[1]["cumulative_accuracy"]).abs() / np.sqrt(2)
        np.testing.assert_allclose(band["cumulative_std"], spread, rtol=1e-9, atol=1e-15)
        self.assertTrue(os.path.exists(self.path("out", "curves", band_filename("RVFL"))))


class DataSectionTest(CliTest):

    def synth_csv(self):
        spec = self.write_json("spec.json", SYNTH)
        self.run_main(["synth", "--spec", spec, "--out", self.path("stream.csv")])
        return self.path("stream.csv")

    def test_csv_with_inline_schema(self):
        config = self.config(data={"path": self.synth_csv(), "schema": {"feature_count": 5, "label_column": "label"}})
        self.assertEqual(self.run_main(["run", "--config", config])[0], EXIT_OK)

    def test_path_with_generated_preset(self):
        config = self.config(data={"path": self.synth_csv(), "preset": "synthetic"})
        code, out, err = self.run_main(["run", "--config", config])
        self.assertEqual(code, EXIT_CONFIG)
        self.assertIn("$.data.preset", err)
        self.assertIn("dsms", err)
        self.assertEqual(out, "")
        self.assertFalse(os.path.exists(self.path("out")))

    def test_schema_fields_are_typed(self):
        schema = {"feature_count": "2", "label_column": 1.5, "label_values": {"a": "one"}, "colour": 1}
        config = self.config(data={"path": self.synth_csv(), "schema": schema})
        code, _, err = self.run_main(["run", "--config", config])
        self.assertEqual(code, EXIT_CONFIG)
        for fragment in ("$.data.schema.feature_count", "$.data.schema.label_column",
                         "$.data.schema.label_values.a", "unknown key 'colour'"):
            self.assertIn(fragment, err)
        self.assertFalse(os.path.exists(self.path("out")))

    def test_preset_beside_synthetic(self):
        config = self.config(data={"synthetic": SYNTH, "preset": "dsms"})
        code, _, err = self.run_main(["run", "--config", config])
        self.assertEqual(code, EXIT_CONFIG)
        self.assertIn("$.data.preset: applies to a 'path' only", err)


if __name__ == "__main__":
    unittest.main()
