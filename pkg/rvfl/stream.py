import re
import logging

import numpy as np
import pandas as pd
from prettytable import PrettyTable

from .dataset_schemas import dataset_schemas
from .errors import DataIOError, InvalidArgumentError, ParseError

logger = logging.getLogger(__name__)


def _frozen(arr, dtype):
    arr = np.array(arr, dtype=dtype)
    arr.setflags(write=False)
    return arr


class LabeledStream(object):
    """
    An ordered, immutable sequence of (features, label) samples. Labels are
    class indices 1..m.

    Parameters
    ----------
    X: array, shape (n, d)
    labels: array of int, shape (n,)
    m: int
        class count; defaults to the largest label
    name: str
    label_names: list of str, optional
        display name of each class, in class-index order

    Examples
    --------
    >>> s = LabeledStream([[0.0, 1.0], [1.0, 0.0]], [1, 2], name="toy")
    >>> len(s), s.d, s.m
    (2, 2, 2)
    """

    def __init__(self, X, labels, m=None, name="stream", label_names=None):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1 and X.size == 0:
            X = X.reshape(0, 0)
        if X.ndim != 2:
            raise InvalidArgumentError("features must be an n x d matrix, got shape {0}".format(X.shape))
        labels = np.asarray(labels)
        if labels.ndim != 1 or labels.shape[0] != X.shape[0]:
            raise InvalidArgumentError("got {0} feature rows but {1} labels".format(X.shape[0], labels.size))
        if labels.size and not np.all(labels == np.round(labels)):
            raise InvalidArgumentError("labels must be integer class indices")
        labels = labels.astype(np.int64)
        if m is None:
            m = int(labels.max()) if labels.size else 1
        if labels.size and (labels.min() < 1 or labels.max() > m):
            raise InvalidArgumentError("labels must lie in 1..{0}".format(m))
        if label_names is not None and len(label_names) != m:
            raise InvalidArgumentError("expected {0} label names, got {1}".format(m, len(label_names)))
        self.X = _frozen(X, np.float64)
        self.labels = _frozen(labels, np.int64)
        self.m = int(m)
        self.name = name
        self.label_names = list(label_names) if label_names is not None else None

    @property
    def d(self):
        return self.X.shape[1]

    @property
    def n(self):
        return self.X.shape[0]

    def __len__(self):
        return self.n

    def __iter__(self):
        for x, label in zip(self.X, self.labels):
            yield x, int(label)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return LabeledStream(self.X[key], self.labels[key], self.m, self.name, self.label_names)
        return self.X[key], int(self.labels[key])

    def __eq__(self, other):
        return (isinstance(other, LabeledStream) and self.m == other.m
                and np.array_equal(self.X, other.X) and np.array_equal(self.labels, other.labels))

    def __ne__(self, other):
        return not self == other

    __hash__ = object.__hash__

    def class_counts(self):
        """{class index: count} for every class 1..m."""
        counts = np.bincount(self.labels, minlength=self.m + 1)[1:]
        return dict((c + 1, int(counts[c])) for c in range(self.m))

    def to_frame(self):
        """DataFrame with columns x1..xd, label."""
        df = pd.DataFrame(self.X, columns=["x{0}".format(j + 1) for j in range(self.d)])
        df["label"] = self.labels
        return df

    def _tablify(self):
        tbl = PrettyTable(["Class", "Name", "Samples"])
        tbl.align["Name"] = "l"
        for c, count in sorted(self.class_counts().items()):
            name = self.label_names[c - 1] if self.label_names else ""
            tbl.add_row([c, name, count])
        return tbl

    def __repr__(self):
        tbl = str(self._tablify())
        r = tbl.split('\n')[0]
        brk = "+" + "-" * (len(r) - 2) + "+"
        title = "|" + "{0} (n={1}, d={2})".format(self.name, self.n, self.d).center(len(r) - 2) + "|"
        return brk + "\n" + title + "\n" + tbl

    def __str__(self):
        return "LabeledStream({0})<n={1}, d={2}, m={3}>".format(self.name, self.n, self.d, self.m)

    def _repr_html_(self):
        return self._tablify().get_html_string()


class Segment(object):
    """One stationary stretch of a synthetic stream."""

    def __init__(self, length, class_means, scale=1.0):
        if isinstance(length, bool) or int(length) != length or length < 1:
            raise InvalidArgumentError("segment length must be a positive integer, got {0}".format(length))
        class_means = np.atleast_2d(np.asarray(class_means, dtype=np.float64))
        if not np.all(np.isfinite(class_means)):
            raise InvalidArgumentError("class means must be finite")
        if not scale > 0:
            raise InvalidArgumentError("segment scale must be > 0, got {0}".format(scale))
        self.length = int(length)
        self.class_means = class_means
        self.scale = float(scale)

    def to_dict(self):
        return {"length": self.length, "class_means": self.class_means.tolist(), "scale": self.scale}


class DriftSpec(object):
    """
    A list of segments sharing d and m, plus the generator seed. Drift happens
    wherever consecutive segments place the class means differently.
    """

    def __init__(self, segments, seed=0):
        if not segments:
            raise InvalidArgumentError("a drift spec needs at least one segment")
        segments = [s if isinstance(s, Segment) else Segment(**s) for s in segments]
        shape = segments[0].class_means.shape
        for i, s in enumerate(segments):
            if s.class_means.shape != shape:
                raise InvalidArgumentError("segment {0} has class means of shape {1}, expected {2}".format(
                    i + 1, s.class_means.shape, shape))
        if isinstance(seed, bool) or int(seed) != seed or seed < 0:
            raise InvalidArgumentError("seed must be a non-negative integer, got {0}".format(seed))
        self.segments = segments
        self.seed = int(seed)

    @property
    def m(self):
        return self.segments[0].class_means.shape[0]

    @property
    def d(self):
        return self.segments[0].class_means.shape[1]

    @property
    def length(self):
        return sum(s.length for s in self.segments)

    @property
    def boundaries(self):
        """Index of the first sample of every segment after the first."""
        return [int(b) for b in np.cumsum([s.length for s in self.segments])[:-1]]

    def to_dict(self):
        return {"seed": self.seed, "segments": [s.to_dict() for s in self.segments]}

    @classmethod
    def from_dict(cls, d):
        """Build from the JSON form; ``d`` may also be a mean-swap preset."""
        if "segments" in d:
            return cls(d["segments"], seed=d.get("seed", 0))
        params = dict(d)
        params.pop("name", None)
        return mean_swap_spec(**params)


def mean_swap_spec(d, m, segment_length, n_segments=2, separation=5.0, scale=1.0, seed=0, shift=1):
    """
    Segments whose class means are ``separation`` times the first m unit
    vectors, rotated by ``shift`` classes at every boundary. With m = 2 each
    boundary swaps the two classes.
    """
    if m > d:
        raise InvalidArgumentError("mean-swap streams need d >= m, got d={0}, m={1}".format(d, m))
    if n_segments < 1:
        raise InvalidArgumentError("n_segments must be >= 1, got {0}".format(n_segments))
    base = np.zeros((m, d))
    base[np.arange(m), np.arange(m)] = separation
    segments = [Segment(segment_length, np.roll(base, shift * j, axis=0), scale) for j in range(n_segments)]
    return DriftSpec(segments, seed=seed)


def synth_drift_stream(spec, name="synthetic"):
    """
    Draw a stream from a DriftSpec.

    Within a segment labels cycle 1, 2, ..., m, 1, 2, ... and each sample is
    its class mean plus isotropic Gaussian noise of the segment's scale.

    Examples
    --------
    >>> s = synth_drift_stream(mean_swap_spec(4, 2, 10, seed=1))
    >>> len(s), list(s.labels[:4])
    (20, [1, 2, 1, 2])
    """
    rng = np.random.default_rng(spec.seed)
    X, labels = [], []
    for segment in spec.segments:
        y = np.arange(segment.length) % spec.m + 1
        noise = rng.standard_normal((segment.length, spec.d))
        X.append(segment.class_means[y - 1] + segment.scale * noise)
        labels.append(y)
    return LabeledStream(np.vstack(X), np.concatenate(labels), m=spec.m, name=name)


def split_offline_online(stream, n_offline):
    """
    Order-preserving (prefix, suffix) split.

    >>> s = LabeledStream([[0.0], [1.0], [2.0]], [1, 1, 1])
    >>> [len(part) for part in split_offline_online(s, 1)]
    [1, 2]
    """
    if isinstance(n_offline, bool) or int(n_offline) != n_offline or n_offline < 1:
        raise InvalidArgumentError("offline count must be a positive integer, got {0}".format(n_offline))
    if n_offline >= len(stream):
        raise InvalidArgumentError("offline count {0} leaves no online samples in a stream of {1}".format(
            n_offline, len(stream)))
    return stream[:n_offline], stream[n_offline:]


def _is_number(value):
    try:
        float(value)
    except (TypeError, ValueError):
        return False
    return True


def _failed_line(message):
    match = re.search(r"line (\d+)", str(message))
    return int(match.group(1)) if match else None


def load_csv(path, schema):
    """
    Read a stream from a comma-separated file: one sample per row, features
    then label unless ``label_column`` says otherwise. A first row that is not
    entirely numeric in its feature columns is taken as a header.

    Parameters
    ----------
    path: str
    schema: dict
        feature_count: int
        label_column: int or str, default -1 (last column)
        label_values: dict mapping the file's label text to 1..m, optional;
            without it labels must already be integers 1..m
        label_names: list of str, optional
        n_classes: int, optional
        name: str, optional

    Returns
    -------
    LabeledStream
    """
    feature_count = schema["feature_count"]
    label_column = schema.get("label_column", -1)
    label_values = schema.get("label_values")
    try:
        raw = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (IOError, OSError) as e:
        raise DataIOError("Could not read {0}: {1}".format(path, e))
    except pd.errors.EmptyDataError:
        raise ParseError("{0} is empty".format(path), row=1)
    except pd.errors.ParserError as e:
        row = _failed_line(e)
        raise ParseError("{0}: row {1} has the wrong number of fields".format(path, row), row=row)

    n_cols = raw.shape[1]
    if n_cols != feature_count + 1:
        raise ParseError("{0}: expected {1} features plus a label, found {2} columns".format(
            path, feature_count, n_cols), row=1)

    header = None
    if isinstance(label_column, str):
        header = list(raw.iloc[0])
        if label_column not in header:
            raise ParseError("{0}: no column named '{1}' in the header".format(path, label_column), row=1)
        label_idx = header.index(label_column)
    else:
        label_idx = label_column % n_cols
    feature_idx = [j for j in range(n_cols) if j != label_idx]

    first_row = 1
    if header is not None or not all(_is_number(raw.iat[0, j]) for j in feature_idx):
        raw = raw.iloc[1:]
        first_row = 2

    features = raw.iloc[:, feature_idx].apply(pd.to_numeric, errors="coerce").to_numpy(dtype=np.float64)
    bad = ~np.isfinite(features).all(axis=1)
    if bad.any():
        row = first_row + int(np.argmax(bad))
        raise ParseError("{0}: row {1} has a missing or non-numeric feature".format(path, row), row=row)

    text = raw.iloc[:, label_idx].str.strip()
    if label_values is not None:
        mapping = dict((str(k).strip(), int(v)) for k, v in label_values.items())
        labels = text.map(mapping)
        missing = labels.isna().to_numpy()
        if missing.any():
            row = first_row + int(np.argmax(missing))
            raise ParseError("{0}: row {1} has label '{2}' outside the label mapping".format(
                path, row, text.iloc[int(np.argmax(missing))]), row=row)
        m = schema.get("n_classes", max(mapping.values()))
    else:
        labels = pd.to_numeric(text, errors="coerce")
        m = schema.get("n_classes")
        bad = (labels.isna() | (labels < 1) | (labels != labels.round())).to_numpy()
        if m is not None:
            bad |= (labels > m).to_numpy()
        if bad.any():
            row = first_row + int(np.argmax(bad))
            raise ParseError("{0}: row {1} has an invalid label '{2}'".format(
                path, row, text.iloc[int(np.argmax(bad))]), row=row)
    labels = labels.to_numpy().astype(np.int64)

    name = schema.get("name", "stream")
    stream = LabeledStream(features, labels, m=m, name=name, label_names=schema.get("label_names"))
    logger.info("loaded %d samples from %s", len(stream), path)
    expected = schema.get("expected_class_counts")
    if expected:
        counts = stream.class_counts()
        expected = dict((int(k), v) for k, v in expected.items())
        if counts != expected:
            logger.warning("%s class counts %s differ from the published %s", name, counts, expected)
    return stream


def write_csv(stream, path, header=True):
    """
    Write a stream in the format load_csv reads; floats carry 17 significant
    digits so a reload is exact.
    """
    try:
        stream.to_frame().to_csv(path, index=False, header=header, float_format="%.17g")
    except (IOError, OSError) as e:
        raise DataIOError("Could not write {0}: {1}".format(path, e))


class DemoStream(LabeledStream):
    """
    The fixed two-segment mean-swap stream: d = 10, m = 3, two segments of
    3,000 samples, class means 5 e_c with unit noise, seed 7. The second
    segment rotates the class means by one class.

    Examples
    --------
    >>> s = DemoStream()
    >>> len(s), s.d, s.m
    (6000, 10, 3)
    """

    def __init__(self):
        preset = dataset_schemas["synthetic"]
        spec = DriftSpec.from_dict(preset)
        demo = synth_drift_stream(spec, name="demo")
        super(DemoStream, self).__init__(demo.X, demo.labels, m=demo.m, name="demo")
        self.spec = spec

    @property
    def drift_index(self):
        return self.spec.boundaries[0]
