"""
Drift detectors that watch the per-sample error indicator (0 correct, 1
wrong): ADWIN, HDDM-A, HDDM-W and Page-Hinkley, with the default settings of
the usual streaming-library configurations.

Every detector exposes ``update(signal) -> status`` and ``reset()``. A
detector that reports drift resets itself before returning.
"""
import logging
import math

from prettytable import PrettyTable

from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)

IN_CONTROL = "in_control"
WARNING = "warning"
DRIFT = "drift"


class Detector(object):
    """
    Shared bookkeeping. Subclasses implement ``_reset_statistics`` and
    ``_consume(signal) -> status``.
    """

    name = None

    def __init__(self):
        self.status = IN_CONTROL
        self.n_detections = 0
        self.n_seen = 0
        self._reset_statistics()

    def reset(self):
        """Back to in-control with empty accumulators."""
        self.status = IN_CONTROL
        self._reset_statistics()

    def update(self, signal):
        """
        Consume one observation and return the new status.

        Parameters
        ----------
        signal: float
            error indicator in [0, 1]
        """
        signal = float(signal)
        if not (math.isfinite(signal) and 0.0 <= signal <= 1.0):
            raise InvalidArgumentError("detector signal must lie in [0, 1], got {0}".format(signal))
        self.n_seen += 1
        status = self._consume(signal)
        if status == DRIFT:
            self.n_detections += 1
            logger.debug("%s reported drift after %d observations", self.name, self.n_seen)
            self._reset_statistics()
        self.status = status
        return status

    def __str__(self):
        return "{0}<{1}, drifts={2}>".format(self.__class__.__name__, self.status, self.n_detections)

    def __repr__(self):
        return self.__str__()

    def _reset_statistics(self):
        raise NotImplementedError

    def _consume(self, signal):
        raise NotImplementedError


class PageHinkley(Detector):
    """
    Page-Hinkley test on the running mean.

    Parameters
    ----------
    min_instances: int
        observations before the test may fire
    delta: float
        tolerated magnitude of change
    threshold: float
        alarm level for the cumulative deviation
    alpha: float
        fading factor of the cumulative deviation
    """

    name = "page_hinkley"

    def __init__(self, min_instances=30, delta=0.005, threshold=50, alpha=0.9999):
        self.min_instances = min_instances
        self.delta = delta
        self.threshold = threshold
        self.alpha = alpha
        super(PageHinkley, self).__init__()

    def _reset_statistics(self):
        self.sample_count = 1
        self.x_mean = 0.0
        self.sum = 0.0

    def _consume(self, x):
        self.x_mean = self.x_mean + (x - self.x_mean) / float(self.sample_count)
        self.sum = max(0.0, self.alpha * self.sum + (x - self.x_mean - self.delta))
        self.sample_count += 1
        if self.sample_count < self.min_instances:
            return IN_CONTROL
        if self.sum > self.threshold:
            return DRIFT
        return IN_CONTROL


class HDDM_A(Detector):
    """
    Hoeffding-bound drift detection on moving averages (A-test).

    Tracks the point where the running mean plus its Hoeffding bound was
    smallest and reports an increase of the mean beyond it. With the two-sided
    option a significant decrease silently restarts the statistics.
    """

    name = "hddm_a"

    def __init__(self, drift_conf=0.001, warn_conf=0.005, two_sided=True):
        self.drift_conf = drift_conf
        self.warn_conf = warn_conf
        self.two_sided = two_sided
        super(HDDM_A, self).__init__()

    def _reset_statistics(self):
        self.n_min = 0
        self.c_min = 0.0
        self.n_max = 0
        self.c_max = 0.0
        self.total_n = 0
        self.total_c = 0.0

    def _bound(self, n):
        return math.sqrt(1.0 / (2 * n) * math.log(1.0 / self.drift_conf))

    def _mean_increased(self, confidence):
        if self.n_min == self.total_n:
            return False
        m = (self.total_n - self.n_min) / float(self.n_min) * (1.0 / self.total_n)
        cota = math.sqrt(m / 2 * math.log(2.0 / confidence))
        return self.total_c / self.total_n - self.c_min / self.n_min >= cota

    def _mean_decreased(self):
        if self.n_max == self.total_n:
            return False
        m = (self.total_n - self.n_max) / float(self.n_max) * (1.0 / self.total_n)
        cota = math.sqrt(m / 2 * math.log(2.0 / self.drift_conf))
        return self.c_max / self.n_max - self.total_c / self.total_n >= cota

    def _consume(self, x):
        self.total_n += 1
        self.total_c += x
        if self.n_min == 0:
            self.n_min, self.c_min = self.total_n, self.total_c
        if self.n_max == 0:
            self.n_max, self.c_max = self.total_n, self.total_c

        mean = self.total_c / self.total_n
        cota_total = self._bound(self.total_n)
        if self.c_min / self.n_min + self._bound(self.n_min) >= mean + cota_total:
            self.n_min, self.c_min = self.total_n, self.total_c
        if self.c_max / self.n_max - self._bound(self.n_max) <= mean - cota_total:
            self.n_max, self.c_max = self.total_n, self.total_c

        if self._mean_increased(self.drift_conf):
            return DRIFT
        if self._mean_increased(self.warn_conf):
            status = WARNING
        else:
            status = IN_CONTROL
        if self.two_sided and self._mean_decreased():
            self._reset_statistics()
        return status


class _Ewma(object):
    """EWMA estimate plus the sum of squared weights that bounds its spread."""

    def __init__(self):
        self.estimate = -1.0
        self.bound_sum = 0.0

    @property
    def empty(self):
        return self.estimate < 0

    def add(self, x, lam):
        if self.empty:
            self.estimate = x
            self.bound_sum = 1.0
        else:
            self.estimate = lam * x + (1.0 - lam) * self.estimate
            self.bound_sum = lam * lam + (1.0 - lam) ** 2 * self.bound_sum

    def copy_from(self, other):
        self.estimate = other.estimate
        self.bound_sum = other.bound_sum


class HDDM_W(Detector):
    """
    Hoeffding-bound drift detection on EWMA estimates (W-test).
    """

    name = "hddm_w"

    def __init__(self, drift_conf=0.001, warn_conf=0.005, ewma_lambda=0.05, two_sided=True):
        self.drift_conf = drift_conf
        self.warn_conf = warn_conf
        self.ewma_lambda = ewma_lambda
        self.two_sided = two_sided
        super(HDDM_W, self).__init__()

    def _reset_statistics(self):
        self.total = _Ewma()
        self.incr_ref = _Ewma()
        self.incr_recent = _Ewma()
        self.decr_ref = _Ewma()
        self.decr_recent = _Ewma()
        self.incr_cutpoint = float("inf")
        self.decr_cutpoint = float("-inf")

    def _epsilon(self, confidence):
        return math.sqrt(self.total.bound_sum * math.log(1.0 / confidence) / 2)

    @staticmethod
    def _increased(earlier, later, confidence):
        if earlier.empty or later.empty:
            return False
        bound = math.sqrt((earlier.bound_sum + later.bound_sum) * math.log(1.0 / confidence) / 2)
        return later.estimate - earlier.estimate > bound

    def _consume(self, x):
        lam = self.ewma_lambda
        self.total.add(x, lam)

        eps = self._epsilon(self.drift_conf)
        if self.total.estimate + eps < self.incr_cutpoint:
            self.incr_cutpoint = self.total.estimate + eps
            self.incr_ref.copy_from(self.total)
            self.incr_recent = _Ewma()
        else:
            self.incr_recent.add(x, lam)

        if self.total.estimate - eps > self.decr_cutpoint:
            self.decr_cutpoint = self.total.estimate - eps
            self.decr_ref.copy_from(self.total)
            self.decr_recent = _Ewma()
        else:
            self.decr_recent.add(x, lam)

        if self._increased(self.incr_ref, self.incr_recent, self.drift_conf):
            return DRIFT
        if self._increased(self.incr_ref, self.incr_recent, self.warn_conf):
            status = WARNING
        else:
            status = IN_CONTROL
        if self.two_sided and self._increased(self.decr_recent, self.decr_ref, self.drift_conf):
            self._reset_statistics()
        return status


class ADWIN(Detector):
    """
    Adaptive windowing over an exponential histogram.

    Row i of the histogram holds buckets of 2 ** i observations, oldest first;
    a row keeps at most ``max_buckets`` buckets before its two oldest merge
    into the next row. Every ``clock`` observations each split of the window
    at a bucket boundary is tested; any significant difference between the
    older and newer sub-window means is drift.

    Parameters
    ----------
    delta: float
        confidence of the cut test
    max_buckets: int
    clock: int
        observations between cut tests
    min_window_length: int
        smallest sub-window a cut may leave on either side
    """

    name = "adwin"

    def __init__(self, delta=0.002, max_buckets=5, clock=32, min_window_length=5, min_width=10):
        self.delta = delta
        self.max_buckets = max_buckets
        self.clock = clock
        self.min_window_length = min_window_length
        self.min_width = min_width
        super(ADWIN, self).__init__()

    def _reset_statistics(self):
        self.rows = []
        self.width = 0
        self.total = 0.0
        self.variance = 0.0
        self._ticks = 0

    @property
    def n_buckets(self):
        return sum(len(row) for row in self.rows)

    def _insert(self, x):
        if self.width > 0:
            mean = self.total / self.width
            self.variance += self.width * (x - mean) ** 2 / (self.width + 1)
        self.width += 1
        self.total += x
        if not self.rows:
            self.rows.append([])
        self.rows[0].append([x, 0.0])
        self._compress()

    def _compress(self):
        i = 0
        while i < len(self.rows) and len(self.rows[i]) > self.max_buckets:
            size = 2 ** i
            (t1, v1), (t2, v2) = self.rows[i][0], self.rows[i][1]
            del self.rows[i][:2]
            diff = t1 / size - t2 / size
            merged = [t1 + t2, v1 + v2 + size * size * diff * diff / (2.0 * size)]
            if i + 1 == len(self.rows):
                self.rows.append([])
            self.rows[i + 1].append(merged)
            i += 1

    def _cut_found(self):
        var = self.variance / self.width
        dd = math.log(2.0 * math.log(self.width) / self.delta)
        mwl = self.min_window_length
        n0, u0 = 0, 0.0
        n1, u1 = self.width, self.total
        for i in reversed(range(len(self.rows))):
            size = 2 ** i
            for total, _ in self.rows[i]:
                n0 += size
                u0 += total
                n1 -= size
                u1 -= total
                if n1 <= 0:
                    return False
                if n0 < mwl or n1 < mwl:
                    continue
                m = 1.0 / (n0 - mwl + 1) + 1.0 / (n1 - mwl + 1)
                eps = math.sqrt(2.0 * m * var * dd) + 2.0 / 3.0 * dd * m
                if abs(u0 / n0 - u1 / n1) > eps:
                    return True
        return False

    def _consume(self, x):
        self._insert(x)
        self._ticks += 1
        if self._ticks % self.clock == 0 and self.width > self.min_width and self._cut_found():
            return DRIFT
        return IN_CONTROL


class DetectorKind(object):
    """
    Which detector to build and with what parameters. Unspecified parameters
    take the defaults in ``DEFAULTS``.

    Examples
    --------
    >>> DetectorKind("hddm_w").params["ewma_lambda"]
    0.05
    """

    DEFAULTS = {
        "adwin": {"delta": 0.002},
        "hddm_a": {"drift_conf": 0.001, "warn_conf": 0.005},
        "hddm_w": {"drift_conf": 0.001, "warn_conf": 0.005, "ewma_lambda": 0.05},
        "page_hinkley": {"min_instances": 30, "delta": 0.005, "threshold": 50, "alpha": 0.9999},
    }

    LABELS = {
        "adwin": "ADWIN",
        "hddm_a": "HDDMa",
        "hddm_w": "HDDMw",
        "page_hinkley": "PageHinkley",
    }

    def __init__(self, name, **params):
        if name not in self.DEFAULTS:
            raise InvalidArgumentError("Unknown detector '{0}'. Must be one of: {1}".format(
                name, ", ".join(sorted(self.DEFAULTS))))
        unknown = set(params) - set(self.DEFAULTS[name])
        if unknown:
            raise InvalidArgumentError("Unknown parameter(s) for {0}: {1}".format(name, ", ".join(sorted(unknown))))
        merged = dict(self.DEFAULTS[name])
        merged.update(params)
        for key in ("delta", "drift_conf", "warn_conf", "ewma_lambda"):
            if key in merged and not 0 < merged[key] < 1:
                raise InvalidArgumentError("{0}.{1} must lie in (0, 1), got {2}".format(name, key, merged[key]))
        if "threshold" in merged and not merged["threshold"] > 0:
            raise InvalidArgumentError("page_hinkley.threshold must be > 0, got {0}".format(merged["threshold"]))
        if "alpha" in merged and not 0 < merged["alpha"] <= 1:
            raise InvalidArgumentError("page_hinkley.alpha must lie in (0, 1], got {0}".format(merged["alpha"]))
        if "min_instances" in merged and not (int(merged["min_instances"]) == merged["min_instances"]
                                              and merged["min_instances"] >= 1):
            raise InvalidArgumentError("page_hinkley.min_instances must be a positive integer")
        self.name = name
        self.params = merged

    @property
    def label(self):
        return self.LABELS[self.name]

    def build(self):
        return DETECTORS[self.name](**self.params)

    def to_dict(self):
        return {"detector": self.name, "params": dict(self.params)}

    def __repr__(self):
        args = ", ".join("{0}={1}".format(k, self.params[k]) for k in sorted(self.params))
        return "DetectorKind({0}, {1})".format(self.name, args)

    def __eq__(self, other):
        return isinstance(other, DetectorKind) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.params.items()))))


DETECTORS = {
    "adwin": ADWIN,
    "hddm_a": HDDM_A,
    "hddm_w": HDDM_W,
    "page_hinkley": PageHinkley,
}


def make_detector(kind):
    """Build a fresh detector from a DetectorKind or a detector name."""
    if not isinstance(kind, DetectorKind):
        kind = DetectorKind(kind)
    return kind.build()


def detector_update(detector, signal):
    """Feed one observation; returns (detector, status)."""
    status = detector.update(signal)
    return detector, status


def list_detectors():
    """
    Table of the available detectors and their defaults.

    Examples
    --------
    >>> print(list_detectors())  # doctest: +SKIP
    """
    tbl = PrettyTable(["Detector", "Label", "Defaults"])
    tbl.align["Detector"] = "l"
    tbl.align["Defaults"] = "l"
    for name in sorted(DetectorKind.DEFAULTS):
        defaults = DetectorKind.DEFAULTS[name]
        tbl.add_row([name, DetectorKind.LABELS[name],
                     ", ".join("{0}={1}".format(k, defaults[k]) for k in sorted(defaults))])
    return tbl
