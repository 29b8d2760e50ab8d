import os
import shutil
import tempfile
import unittest

import numpy as np
from numpy.testing import assert_array_equal

from rvfl.core import DesignMatrices, extend, init_enhancement
from rvfl.dataset_schemas import dataset_schemas
from rvfl.errors import DataIOError, InvalidArgumentError, ParseError
from rvfl.incremental import current_prediction, init_state
from rvfl.stream import (DemoStream, DriftSpec, LabeledStream, Segment, load_csv, mean_swap_spec,
                         split_offline_online, synth_drift_stream, write_csv)
from rvfl.weighting import WeightScheme

TOY_SCHEMA = {"feature_count": 2, "label_values": {"a": 1, "b": 2}, "name": "toy"}


class CsvTest(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def write(self, text, name="toy.csv"):
        path = os.path.join(self.tmp, name)
        with open(path, "w") as f:
            f.write(text)
        return path

    def test_load_toy(self):
        path = self.write("0.5,1.5,a\n-1,2,b\n3,4,a\n")
        s = load_csv(path, TOY_SCHEMA)
        self.assertEqual((len(s), s.d, s.m), (3, 2, 2))
        assert_array_equal(s.X, [[0.5, 1.5], [-1.0, 2.0], [3.0, 4.0]])
        assert_array_equal(s.labels, [1, 2, 1])
        self.assertEqual(s.name, "toy")

    def test_header_row(self):
        path = self.write("x1,x2,label\n0.5,1.5,a\n-1,2,b\n")
        s = load_csv(path, TOY_SCHEMA)
        self.assertEqual(len(s), 2)

    def test_named_label_column(self):
        path = self.write("class,x1,x2\nb,0.5,1.5\na,-1,2\n")
        schema = dict(TOY_SCHEMA, label_column="class")
        s = load_csv(path, schema)
        assert_array_equal(s.labels, [2, 1])
        assert_array_equal(s.X[0], [0.5, 1.5])

    def test_integer_labels(self):
        path = self.write("0.5,1.5,1\n-1,2,3\n")
        s = load_csv(path, {"feature_count": 2})
        self.assertEqual(s.m, 3)
        assert_array_equal(s.labels, [1, 3])

    def test_non_numeric_feature(self):
        path = self.write("0.5,1.5,a\n-1,oops,b\n3,4,a\n")
        with self.assertRaises(ParseError) as ctx:
            load_csv(path, TOY_SCHEMA)
        self.assertEqual(ctx.exception.row, 2)

    def test_missing_feature_after_header(self):
        path = self.write("x1,x2,label\n0.5,1.5,a\n-1,,b\n")
        with self.assertRaises(ParseError) as ctx:
            load_csv(path, TOY_SCHEMA)
        self.assertEqual(ctx.exception.row, 3)

    def test_label_outside_mapping(self):
        path = self.write("0.5,1.5,a\n-1,2,c\n")
        with self.assertRaises(ParseError) as ctx:
            load_csv(path, TOY_SCHEMA)
        self.assertEqual(ctx.exception.row, 2)
        self.assertIn("'c'", str(ctx.exception))

    def test_wrong_column_count(self):
        path = self.write("0.5,1.5,2.5,a\n")
        self.assertRaises(ParseError, load_csv, path, TOY_SCHEMA)

    def test_missing_file(self):
        self.assertRaises(DataIOError, load_csv, os.path.join(self.tmp, "nope.csv"), TOY_SCHEMA)

    def test_round_trip(self):
        stream = synth_drift_stream(mean_swap_spec(3, 2, 25, seed=4))
        path = os.path.join(self.tmp, "synth.csv")
        write_csv(stream, path)
        self.assertEqual(load_csv(path, {"feature_count": 3, "n_classes": 2}), stream)

    def test_published_counts_warning(self):
        path = self.write("0.5,1.5,a\n-1,2,b\n")
        schema = dict(TOY_SCHEMA, expected_class_counts={"1": 5, "2": 5})
        with self.assertLogs("rvfl.stream", level="WARNING"):
            load_csv(path, schema)


class LabeledStreamTest(unittest.TestCase):

    def test_frozen(self):
        s = LabeledStream([[0.0], [1.0]], [1, 2])
        with self.assertRaises(ValueError):
            s.X[0, 0] = 3.0

    def test_bad_labels(self):
        self.assertRaises(InvalidArgumentError, LabeledStream, [[0.0], [1.0]], [0, 1])
        self.assertRaises(InvalidArgumentError, LabeledStream, [[0.0], [1.0]], [1, 3], m=2)
        self.assertRaises(InvalidArgumentError, LabeledStream, [[0.0], [1.0]], [1])

    def test_class_counts_and_frame(self):
        s = LabeledStream([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]], [1, 2, 2], m=3)
        self.assertEqual(s.class_counts(), {1: 1, 2: 2, 3: 0})
        self.assertEqual(list(s.to_frame().columns), ["x1", "x2", "label"])

    def test_split(self):
        s = LabeledStream(np.arange(10.0).reshape(10, 1), np.ones(10, dtype=int))
        offline, online = split_offline_online(s, 3)
        self.assertEqual((len(offline), len(online)), (3, 7))
        self.assertEqual(online.X[0, 0], 3.0)
        self.assertRaises(InvalidArgumentError, split_offline_online, s, 10)
        self.assertRaises(InvalidArgumentError, split_offline_online, s, 0)


class SynthTest(unittest.TestCase):

    def test_deterministic(self):
        spec = mean_swap_spec(4, 3, 100, seed=11)
        self.assertEqual(synth_drift_stream(spec), synth_drift_stream(spec))
        self.assertNotEqual(synth_drift_stream(spec), synth_drift_stream(mean_swap_spec(4, 3, 100, seed=12)))

    def test_labels_cycle(self):
        s = synth_drift_stream(mean_swap_spec(4, 3, 9))
        assert_array_equal(s.labels, [1, 2, 3] * 6)

    def test_class_means_per_segment(self):
        spec = mean_swap_spec(6, 3, 900, separation=4.0, scale=0.5, seed=2)
        s = synth_drift_stream(spec)
        for j, segment in enumerate(spec.segments):
            part = s[j * 900:(j + 1) * 900]
            for c in range(1, 4):
                rows = part.X[part.labels == c]
                bound = 3 * segment.scale * np.sqrt(spec.d / float(len(rows)))
                self.assertLessEqual(np.linalg.norm(rows.mean(axis=0) - segment.class_means[c - 1]), bound)

    def test_separable_then_swapped(self):
        spec = mean_swap_spec(6, 2, 1000, separation=10.0, scale=1.0, seed=3)
        s = synth_drift_stream(spec)
        emap = init_enhancement(6, 5, 5, seed=0)
        first = s[:1000]
        state = init_state(DesignMatrices.from_samples(first.X[:200], first.labels[:200], emap, 2),
                           WeightScheme.uniform(), 0.1)

        def accuracy(part):
            hits = [current_prediction(state, extend(x, emap))[1] == label for x, label in part]
            return np.mean(hits)

        self.assertGreaterEqual(accuracy(first[200:]), 0.99)
        self.assertLessEqual(accuracy(s[1000:]), 0.05)

    def test_segment_validation(self):
        self.assertRaises(InvalidArgumentError, Segment, 0, [[1.0]])
        self.assertRaises(InvalidArgumentError, Segment, 10, [[1.0]], scale=0.0)
        self.assertRaises(InvalidArgumentError, DriftSpec, [])
        self.assertRaises(InvalidArgumentError, DriftSpec, [Segment(5, [[1.0, 0.0]]), Segment(5, [[1.0]])])
        self.assertRaises(InvalidArgumentError, mean_swap_spec, 2, 3, 10)

    def test_spec_from_dict(self):
        spec = DriftSpec.from_dict({"seed": 1, "segments": [{"length": 4, "class_means": [[0.0], [1.0]]}]})
        self.assertEqual((spec.m, spec.d, spec.length), (2, 1, 4))
        again = DriftSpec.from_dict(spec.to_dict())
        self.assertEqual(synth_drift_stream(again), synth_drift_stream(spec))

    def test_demo_stream(self):
        s = DemoStream()
        self.assertEqual((len(s), s.d, s.m), (6000, 10, 3))
        self.assertEqual(s.drift_index, 3000)
        self.assertEqual(s.spec.boundaries, [3000])
        self.assertEqual(s, DemoStream())
        self.assertEqual(s.class_counts(), {1: 2000, 2: 2000, 3: 2000})


@unittest.skipUnless(os.environ.get("RVFL_DSMS_PATH"), "set RVFL_DSMS_PATH to run against the DSMS file")
class DsmsLoadTest(unittest.TestCase):

    def test_load(self):
        schema = dataset_schemas["dsms"]
        s = load_csv(os.environ["RVFL_DSMS_PATH"], schema)
        self.assertEqual(len(s), schema["expected_length"])
        self.assertEqual(s.d, 24)
        self.assertEqual(s.m, 3)


if __name__ == "__main__":
    unittest.main()
