"""
Prequential (test-then-train) runs, accuracy series and multi-seed summaries.
"""
import sys
import time
import logging
import threading

import numpy as np
import pandas as pd
from prettytable import PrettyTable

from .core import init_enhancement
from .detectors import DetectorKind
from .errors import InvalidArgumentError, NumericalError
from .incremental import DIRECT, MODES
from .learners import IncrementalLearner, ManagedLearner, fit_standardizer
from .stream import split_offline_online
from .weighting import WeightScheme

logger = logging.getLogger(__name__)

RVFL_UNIFORM = "rvfl_uniform"
LITE = "lite"
ALT = "alt"
MANAGED = "managed"
METHODS = (RVFL_UNIFORM, LITE, ALT, MANAGED)

DEFAULT_SEEDS = (0, 1, 2, 3, 4)


class ExperimentConfig(object):
    """
    One method and everything needed to run it on a stream.

    Parameters
    ----------
    method: str
        "rvfl_uniform", "lite", "alt" or "managed"
    theta: float
        growth factor for "lite"
    k: int
        power for "alt"
    detector: DetectorKind or str
        detector for "managed"
    offline_count: int
    seeds: list of int
    window: int
        windowed-accuracy length
    periodic_retrain_every: int, optional
    lam, n_groups, nodes_per_group: ridge and enhancement sizes
    standardize: bool
        scale raw features with statistics of the offline split
    mode: str
        "direct" or "rescaled" (lite only)

    Examples
    --------
    >>> ExperimentConfig("lite", theta=1.003).label
    'Lite-RVFL(theta=1.003)'
    """

    def __init__(self, method, theta=1.003, k=2, detector=None, offline_count=200, seeds=DEFAULT_SEEDS,
                 window=500, periodic_retrain_every=None, lam=0.1, n_groups=10, nodes_per_group=10,
                 standardize=False, mode=DIRECT):
        if method not in METHODS:
            raise InvalidArgumentError("Unknown method '{0}'. Must be one of: {1}".format(method, ", ".join(METHODS)))
        if method == MANAGED:
            if detector is None:
                raise InvalidArgumentError("managed runs need a detector")
            if not isinstance(detector, DetectorKind):
                detector = DetectorKind(detector)
            if periodic_retrain_every:
                raise InvalidArgumentError("periodic retraining does not apply to managed runs")
        if mode not in MODES:
            raise InvalidArgumentError("Unknown mode '{0}'. Must be one of: {1}".format(mode, ", ".join(MODES)))
        if offline_count < 1:
            raise InvalidArgumentError("offline_count must be >= 1, got {0}".format(offline_count))
        if window < 1:
            raise InvalidArgumentError("window must be >= 1, got {0}".format(window))
        if periodic_retrain_every is not None and periodic_retrain_every < 1:
            raise InvalidArgumentError("periodic_retrain_every must be >= 1, got {0}".format(periodic_retrain_every))
        if not seeds:
            raise InvalidArgumentError("at least one seed is required")
        self.method = method
        self.theta = float(theta) if method == LITE else None
        self.k = int(k) if method == ALT else None
        self.detector = detector if method == MANAGED else None
        self.offline_count = int(offline_count)
        self.seeds = list(seeds)
        self.window = int(window)
        self.periodic_retrain_every = periodic_retrain_every
        self.lam = float(lam)
        self.n_groups = n_groups
        self.nodes_per_group = nodes_per_group
        self.standardize = bool(standardize)
        self.mode = mode if method == LITE else DIRECT
        # validates theta / k
        self.scheme

    @property
    def scheme(self):
        if self.method == LITE:
            return WeightScheme.exponential(self.theta)
        if self.method == ALT:
            return WeightScheme.polynomial(self.k)
        return WeightScheme.uniform()

    @property
    def label(self):
        if self.method == LITE:
            return "Lite-RVFL(theta={0})".format(self.theta)
        if self.method == ALT:
            return "Alt-RVFL(k={0})".format(self.k)
        if self.method == MANAGED:
            return "RVFL-{0}".format(self.detector.label)
        return "RVFL"

    def build_learner(self, seed, d, m, X_offline):
        emap = init_enhancement(d, self.n_groups, self.nodes_per_group, seed)
        standardizer = fit_standardizer(X_offline, self.standardize)
        if self.method == MANAGED:
            return ManagedLearner(emap, self.detector.build(), self.lam, m, standardizer=standardizer)
        return IncrementalLearner(emap, self.scheme, self.lam, m, mode=self.mode, standardizer=standardizer,
                                  retrain_every=self.periodic_retrain_every)

    def to_dict(self):
        d = {
            "method": self.method,
            "offline_count": self.offline_count,
            "seeds": self.seeds,
            "window": self.window,
            "periodic_retrain_every": self.periodic_retrain_every,
            "lambda": self.lam,
            "n_groups": self.n_groups,
            "nodes_per_group": self.nodes_per_group,
            "standardize": self.standardize,
            "mode": self.mode,
        }
        if self.method == LITE:
            d["theta"] = self.theta
        if self.method == ALT:
            d["k"] = self.k
        if self.method == MANAGED:
            d.update(self.detector.to_dict())
        return d

    def __repr__(self):
        return "ExperimentConfig({0})".format(self.label)


def windowed_accuracy(correctness, window):
    """
    Element t is the mean of correctness over the trailing min(t + 1, window)
    entries.

    Examples
    --------
    >>> windowed_accuracy([1, 0, 1, 0], 2).tolist()
    [1.0, 0.5, 0.5, 0.5]
    """
    if window < 1:
        raise InvalidArgumentError("window must be >= 1, got {0}".format(window))
    c = np.asarray(correctness, dtype=np.int64)
    if c.size == 0:
        return np.zeros(0)
    csum = np.concatenate([[0], np.cumsum(c)])
    t = np.arange(1, c.size + 1)
    lo = np.maximum(t - window, 0)
    return (csum[t] - csum[lo]) / (t - lo).astype(np.float64)


def cumulative_accuracy(correctness):
    """
    >>> cumulative_accuracy([1, 0, 1, 1]).tolist()
    [1.0, 0.5, 0.6666666666666666, 0.75]
    """
    c = np.asarray(correctness, dtype=np.int64)
    if c.size == 0:
        return np.zeros(0)
    return np.cumsum(c) / np.arange(1, c.size + 1, dtype=np.float64)


class RunResult(object):
    """
    Outcome of one (method, seed) run over the online part of a stream.
    """

    def __init__(self, method, seed, correctness, window, wall_time_seconds, drifts_detected=None,
                 retrain_count=0):
        self.method = method
        self.seed = seed
        self.correctness = np.asarray(correctness, dtype=np.int8)
        self.window = window
        self.wall_time_seconds = wall_time_seconds
        self.drifts_detected = drifts_detected
        self.retrain_count = retrain_count

    @property
    def cumulative_accuracy(self):
        return cumulative_accuracy(self.correctness)

    @property
    def windowed_accuracy(self):
        return windowed_accuracy(self.correctness, self.window)

    @property
    def final_accuracy(self):
        if self.correctness.size == 0:
            return 0.0
        return float(self.correctness.mean())

    def to_frame(self):
        """Learning curve: step, correct, cumulative_accuracy, windowed_accuracy."""
        return pd.DataFrame({
            "step": np.arange(self.correctness.size),
            "correct": self.correctness.astype(int),
            "cumulative_accuracy": self.cumulative_accuracy,
            "windowed_accuracy": self.windowed_accuracy,
        }, columns=["step", "correct", "cumulative_accuracy", "windowed_accuracy"])

    def to_dict(self):
        return {
            "method": self.method,
            "seed": self.seed,
            "n_online": int(self.correctness.size),
            "final_accuracy": self.final_accuracy,
            "wall_time_seconds": self.wall_time_seconds,
            "drifts_detected": self.drifts_detected,
        }

    def _tablify(self):
        tbl = PrettyTable(["Method", "Seed", "Samples", "Accuracy", "Time (s)", "Drifts"])
        tbl.align["Method"] = "l"
        drifts = "-" if self.drifts_detected is None else self.drifts_detected
        tbl.add_row([self.method, self.seed, self.correctness.size, "{0:.4f}".format(self.final_accuracy),
                     "{0:.3f}".format(self.wall_time_seconds), drifts])
        return tbl

    def __repr__(self):
        return str(self._tablify())

    def __str__(self):
        return "RunResult({0}, seed={1})<{2:.4f}>".format(self.method, self.seed, self.final_accuracy)

    def _repr_html_(self):
        return self._tablify().get_html_string()


def run_prequential(config, stream, seed=None, learner=None):
    """
    Train on the first ``offline_count`` samples, then for every remaining
    sample predict, score, and only then learn from its label.

    Parameters
    ----------
    config: ExperimentConfig
    stream: LabeledStream
    seed: int, optional
        enhancement-map seed; defaults to the first of ``config.seeds``
    learner: StreamLearner, optional
        used instead of the one the config would build

    Returns
    -------
    RunResult
        wall time covers the online loop only

    Examples
    --------
    >>> from rvfl import DemoStream
    >>> result = run_prequential(ExperimentConfig("lite"), DemoStream(), seed=0)  # doctest: +SKIP
    """
    if seed is None:
        seed = config.seeds[0]
    offline, online = split_offline_online(stream, config.offline_count)
    if learner is None:
        learner = config.build_learner(seed, stream.d, stream.m, offline.X)
    try:
        learner.fit_offline(offline.X, offline.labels)
    except NumericalError as e:
        raise e.with_context(step=None, method=config.label, seed=seed)

    logger.info("run started: %s seed=%s on %d online samples", config.label, seed, len(online))
    correctness = np.zeros(len(online), dtype=np.int8)
    X, labels = online.X, online.labels
    t = 0
    start = time.perf_counter()
    try:
        for t in range(len(online)):
            label = int(labels[t])
            correctness[t] = learner.predict_one(X[t]) == label
            learner.learn_one(X[t], label)
    except NumericalError as e:
        raise e.with_context(step=t, method=config.label, seed=seed)
    elapsed = time.perf_counter() - start

    result = RunResult(config.label, seed, correctness, config.window, elapsed,
                       drifts_detected=learner.drifts_detected,
                       retrain_count=getattr(learner, "retrain_count", 0))
    logger.info("run finished: %s seed=%s accuracy=%.4f seconds=%.3f", config.label, seed,
                result.final_accuracy, elapsed)
    return result


def run_experiments(configs, stream, jobs=1, progress=False):
    """
    Run every (config, seed) pair, up to ``jobs`` at a time on worker threads.
    Results come back in submission order. If any run fails the first failure
    is raised once every thread has joined.
    """
    if jobs < 1:
        raise InvalidArgumentError("jobs must be >= 1, got {0}".format(jobs))
    tasks = [(config, seed) for config in configs for seed in config.seeds]
    results = [None] * len(tasks)
    errors = [None] * len(tasks)
    if progress:
        sys.stderr.write("Running {0} experiments".format(len(tasks)))

    def run_task(i):
        config, seed = tasks[i]
        try:
            results[i] = run_prequential(config, stream, seed)
        except Exception as e:
            errors[i] = e
        if progress:
            sys.stderr.write(".")

    for batch_start in range(0, len(tasks), jobs):
        threads = []
        for i in range(batch_start, min(batch_start + jobs, len(tasks))):
            t = threading.Thread(target=run_task, args=(i, ))
            t.start()
            threads.append(t)

        # join all threads
        for t in threads:
            t.join()
    if progress:
        sys.stderr.write("done!\n")

    for e in errors:
        if e is not None:
            raise e
    return results


class Summary(object):
    """
    Per-method mean and sample standard deviation of accuracy and time, with
    ranks. ``frame`` is the underlying DataFrame, one row per method.
    """

    COLUMNS = ["method", "runs", "accuracy_mean", "accuracy_std", "time_mean", "time_std",
               "drifts_mean", "accuracy_rank", "time_rank"]

    def __init__(self, frame):
        self.frame = frame

    def to_records(self):
        records = []
        for row in self.frame.to_dict(orient="records"):
            rec = {}
            for key in self.COLUMNS:
                value = row[key]
                if key in ("runs", "accuracy_rank", "time_rank"):
                    value = int(value)
                elif key == "drifts_mean":
                    value = None if pd.isnull(value) else float(value)
                elif key != "method":
                    value = float(value)
                rec[key] = value
            records.append(rec)
        return records

    def row(self, method):
        return self.frame.set_index("method").loc[method]

    def _tablify(self):
        tbl = PrettyTable(["Method", "Accuracy (%)", "Acc. rank", "Time (s)", "Time rank", "Drifts"])
        tbl.align["Method"] = "l"
        for rec in self.to_records():
            drifts = "-" if rec["drifts_mean"] is None else "{0:g}".format(rec["drifts_mean"])
            tbl.add_row([
                rec["method"],
                "{0:.2f} +/- {1:.2f}".format(100 * rec["accuracy_mean"], 100 * rec["accuracy_std"]),
                rec["accuracy_rank"],
                "{0:.2f} +/- {1:.2f}".format(rec["time_mean"], rec["time_std"]),
                rec["time_rank"],
                drifts,
            ])
        return tbl

    def __repr__(self):
        return str(self._tablify())

    def _repr_html_(self):
        return self._tablify().get_html_string()


def _rank(values, names, ascending):
    order = sorted(range(len(values)), key=lambda i: ((values[i] if ascending else -values[i]), names[i]))
    ranks = [0] * len(values)
    for position, i in enumerate(order):
        ranks[i] = position + 1
    return ranks


def aggregate_runs(results):
    """
    Summarise runs by method. Standard deviations are sample (n - 1)
    deviations and are 0 for a single run. Accuracy ranks descend, time ranks
    ascend; ties go to the method name.
    """
    df = pd.DataFrame([{
        "method": r.method,
        "accuracy": r.final_accuracy,
        "time": r.wall_time_seconds,
        "drifts": np.nan if r.drifts_detected is None else float(r.drifts_detected),
    } for r in results], columns=["method", "accuracy", "time", "drifts"])
    grouped = df.groupby("method", sort=True)
    frame = pd.DataFrame({
        "runs": grouped["accuracy"].count(),
        "accuracy_mean": grouped["accuracy"].mean(),
        "accuracy_std": grouped["accuracy"].std(ddof=1).fillna(0.0),
        "time_mean": grouped["time"].mean(),
        "time_std": grouped["time"].std(ddof=1).fillna(0.0),
        "drifts_mean": grouped["drifts"].mean(),
    }).reset_index()
    names = list(frame["method"])
    frame["accuracy_rank"] = _rank(list(frame["accuracy_mean"]), names, ascending=False)
    frame["time_rank"] = _rank(list(frame["time_mean"]), names, ascending=True)
    frame = frame.sort_values(["accuracy_rank"]).reset_index(drop=True)
    return Summary(frame[Summary.COLUMNS])


def _sample_std(rows):
    if rows.shape[0] < 2:
        return np.zeros(rows.shape[1])
    return rows.std(axis=0, ddof=1)


def mean_curves(results):
    """
    Learning curves averaged over seeds, one DataFrame per method with
    columns step, cumulative_mean, cumulative_std, windowed_mean and
    windowed_std. Deviations are sample (n - 1) deviations and are 0 for a
    single run.

    Examples
    --------
    >>> runs = [RunResult("A", 0, [1, 1], 2, 0.0), RunResult("A", 1, [1, 0], 2, 0.0)]
    >>> mean_curves(runs)["A"]["windowed_mean"].tolist()
    [1.0, 0.75]
    """
    by_method = {}
    for r in results:
        by_method.setdefault(r.method, []).append(r)
    curves = {}
    for method, runs in sorted(by_method.items()):
        lengths = sorted(set(r.correctness.size for r in runs))
        if len(lengths) != 1:
            raise InvalidArgumentError("runs of {0} have different lengths: {1}".format(method, lengths))
        cumulative = np.vstack([r.cumulative_accuracy for r in runs])
        windowed = np.vstack([r.windowed_accuracy for r in runs])
        curves[method] = pd.DataFrame({
            "step": np.arange(lengths[0]),
            "cumulative_mean": cumulative.mean(axis=0),
            "cumulative_std": _sample_std(cumulative),
            "windowed_mean": windowed.mean(axis=0),
            "windowed_std": _sample_std(windowed),
        }, columns=["step", "cumulative_mean", "cumulative_std", "windowed_mean", "windowed_std"])
    return curves
