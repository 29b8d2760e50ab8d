"""
Stream learners the harness drives with ``predict_one(x)`` followed by
``learn_one(x, label)``.
"""
import logging
from collections import deque

import numpy as np

from .core import DesignMatrices, Standardizer, encode_label, extend
from .incremental import DIRECT, current_prediction, init_state, step
from .managed import BUFFER_SIZE, ManagedModel, managed_step

logger = logging.getLogger(__name__)


class StreamLearner(object):
    """Interface shared by every learner the harness can run."""

    drifts_detected = None

    def predict_one(self, x):
        raise NotImplementedError

    def learn_one(self, x, label):
        raise NotImplementedError


class IncrementalLearner(StreamLearner):
    """
    An RVFL updated one sample at a time under a weight scheme. Covers plain
    RVFL (uniform), Lite-RVFL (exponential) and Alt-RVFL (polynomial).

    Parameters
    ----------
    emap: EnhancementMap
    scheme: WeightScheme
    lam: float
    m: int
        class count
    mode: str
        "direct" or "rescaled"
    standardizer: Standardizer, optional
    retrain_every: int, optional
        rebuild from the last ``buffer_size`` samples after every this many
        online samples; the weight ladder restarts at the oldest of them
    buffer_size: int
    """

    def __init__(self, emap, scheme, lam, m, mode=DIRECT, standardizer=None,
                 retrain_every=None, buffer_size=BUFFER_SIZE):
        self.emap = emap
        self.scheme = scheme
        self.lam = lam
        self.m = m
        self.mode = mode
        self.standardizer = standardizer
        self.retrain_every = retrain_every
        self.buffer = deque(maxlen=buffer_size)
        self.state = None
        self.retrain_count = 0
        self._seen = 0
        self._pending = None

    def _prepare(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.standardizer is not None:
            x = self.standardizer.transform(x)
        return x

    def _rebuild(self, X, labels):
        design = DesignMatrices.from_samples(X, labels, self.emap, self.m)
        self.state = init_state(design, self.scheme, self.lam, self.mode)

    def fit_offline(self, X, labels):
        X = np.vstack([self._prepare(x) for x in X])
        self._rebuild(X, labels)
        for x, label in zip(X, labels):
            self.buffer.append((x, int(label)))
        return self

    def predict_one(self, x):
        x = self._prepare(x)
        x_ext = extend(x, self.emap)
        _, label = current_prediction(self.state, x_ext)
        self._pending = (x, x_ext)
        return label

    def learn_one(self, x, label):
        if self._pending is not None:
            x, x_ext = self._pending
            self._pending = None
        else:
            x = self._prepare(x)
            x_ext = extend(x, self.emap)
        step(self.state, x_ext, encode_label(label, self.m))
        self._seen += 1
        if self.retrain_every:
            self.buffer.append((x, int(label)))
            if self._seen % self.retrain_every == 0:
                X = np.vstack([b[0] for b in self.buffer])
                self._rebuild(X, np.array([b[1] for b in self.buffer]))
                self.retrain_count += 1
                logger.debug("periodic retrain %d after %d online samples", self.retrain_count, self._seen)


class ManagedLearner(StreamLearner):
    """A ManagedModel behind the learner interface."""

    def __init__(self, emap, detector, lam, m, standardizer=None, buffer_size=BUFFER_SIZE):
        self.emap = emap
        self.detector = detector
        self.lam = lam
        self.m = m
        self.standardizer = standardizer
        self.buffer_size = buffer_size
        self.model = None

    def _prepare(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.standardizer is not None:
            x = self.standardizer.transform(x)
        return x

    @property
    def drifts_detected(self):
        return self.model.retrain_count

    def fit_offline(self, X, labels):
        X = np.vstack([self._prepare(x) for x in X])
        self.model = ManagedModel.from_offline(self.emap, X, labels, self.m, self.lam,
                                               self.detector, buffer_size=self.buffer_size)
        return self

    def predict_one(self, x):
        _, label = current_prediction(self.model.state, extend(self._prepare(x), self.emap))
        return label

    def learn_one(self, x, label):
        managed_step(self.model, self._prepare(x), label)


def fit_standardizer(X, enabled):
    return Standardizer.fit(X) if enabled else None
