import unittest

import numpy as np
from numpy.testing import assert_array_equal

from rvfl.core import DesignMatrices, encode_label, extend, init_enhancement
from rvfl.detectors import DRIFT, IN_CONTROL, HDDM_A
from rvfl.errors import InvalidArgumentError
from rvfl.incremental import init_state, step
from rvfl.managed import BUFFER_SIZE, ManagedModel, managed_step
from rvfl.weighting import WeightScheme


class NeverFires(object):

    def __init__(self):
        self.signals = []

    def update(self, signal):
        self.signals.append(signal)
        return IN_CONTROL


class Scripted(object):
    """Reports drift on the listed 0-based calls."""

    def __init__(self, fire_at):
        self.fire_at = set(fire_at)
        self.calls = 0

    def update(self, signal):
        status = DRIFT if self.calls in self.fire_at else IN_CONTROL
        self.calls += 1
        return status


def toy_data(n, d=4, m=3, seed=0):
    rng = np.random.default_rng(seed)
    labels = np.arange(n) % m + 1
    X = 3.0 * np.eye(m, d)[labels - 1] + rng.standard_normal((n, d))
    return X, labels


class ManagedTest(unittest.TestCase):

    def setUp(self):
        self.emap = init_enhancement(4, 2, 3, seed=5)
        self.X, self.labels = toy_data(500)

    def managed(self, detector, n_offline=50, **kwargs):
        return ManagedModel.from_offline(self.emap, self.X[:n_offline], self.labels[:n_offline], 3, 0.1,
                                         detector, **kwargs)

    def test_transparent_without_drift(self):
        detector = NeverFires()
        mm = self.managed(detector)
        design = DesignMatrices.from_samples(self.X[:50], self.labels[:50], self.emap, 3)
        plain = init_state(design, WeightScheme.uniform(), 0.1)
        for x, label in zip(self.X[50:], self.labels[50:]):
            predicted, fired = managed_step(mm, x, label)
            self.assertFalse(fired)
            step(plain, extend(x, self.emap), encode_label(label, 3))
        assert_array_equal(mm.state.W, plain.W)
        self.assertEqual(mm.retrain_count, 0)
        self.assertEqual(len(detector.signals), 450)
        self.assertTrue(set(detector.signals) <= {0, 1})

    def test_error_signal(self):
        detector = NeverFires()
        mm = self.managed(detector)
        predicted, _ = managed_step(mm, self.X[50], self.labels[50])
        self.assertEqual(detector.signals, [0 if predicted == self.labels[50] else 1])

    def test_forced_drift_retrains_on_buffer(self):
        mm = self.managed(NeverFires())
        for x, label in zip(self.X[50:300], self.labels[50:300]):
            managed_step(mm, x, label)
        _, fired = managed_step(mm, self.X[300], self.labels[300], force_drift=True)
        self.assertTrue(fired)
        self.assertEqual(mm.retrain_count, 1)
        buffer_X = self.X[101:301]
        buffer_labels = self.labels[101:301]
        design = DesignMatrices.from_samples(buffer_X, buffer_labels, self.emap, 3)
        expected = init_state(design, WeightScheme.uniform(), 0.1)
        assert_array_equal(mm.state.W, expected.W)
        self.assertEqual(mm.state.n, BUFFER_SIZE)

    def test_buffer_keeps_newest(self):
        mm = self.managed(NeverFires())
        self.assertEqual(len(mm.buffer), 50)
        for x, label in zip(self.X[50:400], self.labels[50:400]):
            managed_step(mm, x, label)
        self.assertEqual(len(mm.buffer), BUFFER_SIZE)
        assert_array_equal(mm.buffer[0][0], self.X[200])
        assert_array_equal(mm.buffer[-1][0], self.X[399])
        self.assertEqual(mm.buffer[-1][1], self.labels[399])

    def test_scripted_retrains(self):
        mm = self.managed(Scripted([10, 20, 300]))
        fired = [managed_step(mm, x, label)[1] for x, label in zip(self.X[50:], self.labels[50:])]
        self.assertEqual([i for i, f in enumerate(fired) if f], [10, 20, 300])
        self.assertEqual(mm.retrain_count, 3)

    def test_underfull_buffer_warns(self):
        mm = self.managed(NeverFires(), n_offline=20)
        with self.assertLogs("rvfl.managed", level="WARNING") as logs:
            managed_step(mm, self.X[20], self.labels[20], force_drift=True)
        self.assertIn("21 buffered samples", logs.output[0])
        self.assertEqual(mm.state.n, 21)

    def test_emap_kept_across_retrains(self):
        mm = self.managed(Scripted([0]))
        managed_step(mm, self.X[50], self.labels[50])
        self.assertIs(mm.emap, self.emap)
        self.assertRaises(InvalidArgumentError, managed_step, mm, self.X[51], self.labels[51],
                          emap=init_enhancement(4, 2, 3, seed=6))
        self.assertRaises(InvalidArgumentError, managed_step, mm, self.X[51], self.labels[51], lam=0.5)

    def test_uniform_scheme_only(self):
        design = DesignMatrices.from_samples(self.X[:50], self.labels[:50], self.emap, 3)
        state = init_state(design, WeightScheme.exponential(1.003), 0.1)
        self.assertRaises(InvalidArgumentError, ManagedModel, self.emap, state, NeverFires())

    def test_detector_by_name(self):
        mm = self.managed("hddm_a", buffer_size=100)
        self.assertIsInstance(mm.detector, HDDM_A)
        self.assertEqual(mm.buffer_size, 100)
        self.assertEqual(mm.lam, 0.1)


if __name__ == "__main__":
    unittest.main()
