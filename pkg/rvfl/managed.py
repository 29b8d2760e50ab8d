"""
Plain uniform-weight RVFL guarded by a drift detector. On drift the output
weights are rebuilt from the most recent samples.
"""
import logging
from collections import deque

import numpy as np

from .core import DesignMatrices, encode_label, extend
from .detectors import DRIFT, make_detector
from .incremental import current_prediction, init_state, step
from .errors import InvalidArgumentError
from .weighting import WeightScheme

logger = logging.getLogger(__name__)

BUFFER_SIZE = 200


class ManagedModel(object):
    """
    A uniform-scheme IncrementalState, a detector fed with the error
    indicator, and a ring of the last ``buffer_size`` (features, label) pairs.

    Parameters
    ----------
    emap: EnhancementMap
        shared by every retrain
    state: IncrementalState
        offline-trained uniform model
    detector: Detector
        anything with ``update(signal) -> status``
    offline: iterable of (x, label), optional
        seeds the buffer so an early drift can retrain on real data
    buffer_size: int
    """

    def __init__(self, emap, state, detector, offline=None, buffer_size=BUFFER_SIZE):
        if state.scheme != WeightScheme.uniform():
            raise InvalidArgumentError("managed models use the uniform scheme, got {0!r}".format(state.scheme))
        self.emap = emap
        self.state = state
        self.detector = detector
        self.buffer = deque(maxlen=buffer_size)
        self.retrain_count = 0
        self.n_classes = state.n_classes
        for x, label in offline or ():
            self.buffer.append((np.asarray(x, dtype=np.float64), int(label)))

    @classmethod
    def from_offline(cls, emap, X, labels, m, lam, detector, buffer_size=BUFFER_SIZE):
        """
        Train on the offline block and wrap the result.

        Examples
        --------
        >>> from rvfl import init_enhancement
        >>> emap = init_enhancement(2, 2, 2, seed=0)
        >>> mm = ManagedModel.from_offline(emap, [[0., 1.], [1., 0.]], [1, 2], 2, 0.1, "hddm_a")
        >>> mm.retrain_count
        0
        """
        if not hasattr(detector, "update"):
            detector = make_detector(detector)
        design = DesignMatrices.from_samples(X, labels, emap, m)
        state = init_state(design, WeightScheme.uniform(), lam)
        return cls(emap, state, detector, offline=zip(X, labels), buffer_size=buffer_size)

    @property
    def buffer_size(self):
        return self.buffer.maxlen

    @property
    def lam(self):
        return self.state.lam

    def retrain(self):
        """Rebuild the state from the buffer with uniform weights."""
        if len(self.buffer) < self.buffer_size:
            logger.warning("retraining on %d buffered samples (capacity %d)", len(self.buffer), self.buffer_size)
        X = np.vstack([x for x, _ in self.buffer])
        labels = np.array([label for _, label in self.buffer])
        design = DesignMatrices.from_samples(X, labels, self.emap, self.n_classes)
        self.state = init_state(design, WeightScheme.uniform(), self.lam)
        self.retrain_count += 1
        logger.debug("retrain %d on %d samples", self.retrain_count, len(self.buffer))

    def __str__(self):
        return "ManagedModel<{0}, retrains={1}>".format(self.detector, self.retrain_count)

    def __repr__(self):
        return self.__str__()


def managed_step(mm, x_raw, s_true, emap=None, lam=None, force_drift=False):
    """
    One prequential step of a managed model.

    Predicts, feeds the 0/1 error to the detector, absorbs the sample, pushes
    it into the buffer and, if the detector reported drift, retrains on the
    buffer.

    Parameters
    ----------
    mm: ManagedModel
    x_raw: array, shape (d,)
    s_true: int
        true class in 1..m
    emap: EnhancementMap, optional
        must be the model's own map when given
    lam: float, optional
        must be the model's own ridge coefficient when given
    force_drift: bool
        treat this step as a drift regardless of the detector

    Returns
    -------
    (predicted label, drift fired)
    """
    if emap is not None and emap is not mm.emap:
        raise InvalidArgumentError("managed models keep the enhancement map they were trained with")
    if lam is not None and float(lam) != mm.lam:
        raise InvalidArgumentError("lambda {0} differs from the model's {1}".format(lam, mm.lam))
    x = np.asarray(x_raw, dtype=np.float64)
    x_ext = extend(x, mm.emap)
    _, predicted = current_prediction(mm.state, x_ext)
    error = 0 if predicted == s_true else 1
    fired = mm.detector.update(error) == DRIFT or force_drift
    step(mm.state, x_ext, encode_label(s_true, mm.n_classes))
    mm.buffer.append((x, int(s_true)))
    if fired:
        mm.retrain()
    return predicted, fired
