"""
Random vector functional-link network: fixed random enhancement features,
one-hot label encoding, weighted ridge training and prediction.
"""
import logging
from collections import namedtuple

import numpy as np
from prettytable import PrettyTable
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import expit

from .errors import InvalidArgumentError, NumericalError

logger = logging.getLogger(__name__)

ACTIVATIONS = {
    "sigmoid": expit,
}

OneHotLabel = namedtuple("OneHotLabel", ["class_index", "vector"])


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def _check_dim(name, value):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise InvalidArgumentError("{0} must be a positive integer, got {1}".format(name, value))
    return int(value)


class EnhancementMap(object):
    """
    The fixed random projection that lifts raw features to extended features.

    Column block j of ``projection`` (and the matching slice of ``bias``) is
    enhancement group j; each group has ``nodes_per_group`` nodes. Nothing in
    the map changes after construction.

    Parameters
    ----------
    input_dim: int
        raw feature count d
    n_groups: int
        number of enhancement groups N1
    nodes_per_group: int
        nodes per group N2
    projection: array, shape (d, N1 * N2)
    bias: array, shape (N1 * N2,)
    seed: int, None
        seed the arrays were drawn from (None for hand-built maps)
    activation: str
        name of the activation, only "sigmoid" ships
    """

    def __init__(self, input_dim, n_groups, nodes_per_group, projection, bias, seed=None, activation="sigmoid"):
        self.input_dim = _check_dim("input_dim", input_dim)
        self.n_groups = _check_dim("n_groups", n_groups)
        self.nodes_per_group = _check_dim("nodes_per_group", nodes_per_group)
        if activation not in ACTIVATIONS:
            raise InvalidArgumentError("Unknown activation '{0}'. Must be one of: {1}".format(
                activation, ", ".join(sorted(ACTIVATIONS))))
        width = self.n_groups * self.nodes_per_group
        projection = _frozen(projection)
        bias = _frozen(bias)
        if projection.shape != (self.input_dim, width):
            raise InvalidArgumentError("projection must have shape {0}, got {1}".format(
                (self.input_dim, width), projection.shape))
        if bias.shape != (width,):
            raise InvalidArgumentError("bias must have shape {0}, got {1}".format((width,), bias.shape))
        self.projection = projection
        self.bias = bias
        self.seed = seed
        self.activation = activation

    @property
    def enhancement_dim(self):
        return self.n_groups * self.nodes_per_group

    @property
    def extended_dim(self):
        """D = d + N1 * N2"""
        return self.input_dim + self.enhancement_dim

    def group(self, j):
        """(W_e_j, b_e_j) for enhancement group j (0-based)."""
        if not 0 <= j < self.n_groups:
            raise InvalidArgumentError("group index {0} out of range 0..{1}".format(j, self.n_groups - 1))
        block = slice(j * self.nodes_per_group, (j + 1) * self.nodes_per_group)
        return self.projection[:, block], self.bias[block]

    def __repr__(self):
        tbl = PrettyTable(["Input dim", "Groups", "Nodes/group", "Extended dim", "Activation", "Seed"])
        tbl.add_row([self.input_dim, self.n_groups, self.nodes_per_group, self.extended_dim,
                     self.activation, self.seed])
        return str(tbl)

    def __str__(self):
        return "EnhancementMap({0}x{1}x{2})<{3}>".format(self.input_dim, self.n_groups,
                                                         self.nodes_per_group, self.seed)


def init_enhancement(d, n_groups, nodes_per_group, seed):
    """
    Draw a new EnhancementMap. Every entry of W_e and b_e is uniform on
    [-1, 1]; the same arguments always give the same map.

    Examples
    --------
    >>> init_enhancement(24, 10, 10, seed=42).extended_dim
    124
    """
    d = _check_dim("d", d)
    n_groups = _check_dim("n_groups", n_groups)
    nodes_per_group = _check_dim("nodes_per_group", nodes_per_group)
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < 2 ** 64:
        raise InvalidArgumentError("seed must be a 64-bit unsigned integer, got {0}".format(seed))
    rng = np.random.default_rng(int(seed))
    width = n_groups * nodes_per_group
    projection = rng.uniform(-1.0, 1.0, size=(d, width))
    bias = rng.uniform(-1.0, 1.0, size=width)
    return EnhancementMap(d, n_groups, nodes_per_group, projection, bias, seed=int(seed))


def extend(x, emap):
    """
    Extended feature of one raw sample: x followed by phi(x W_e + b_e).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != emap.input_dim:
        raise InvalidArgumentError("expected a vector of length {0}, got shape {1}".format(
            emap.input_dim, x.shape))
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("input contains non-finite values")
    z = ACTIVATIONS[emap.activation](x @ emap.projection + emap.bias)
    return np.concatenate([x, z])


def extend_many(X, emap):
    """Row-wise extend for an n x d matrix."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != emap.input_dim:
        raise InvalidArgumentError("expected a matrix with {0} columns, got shape {1}".format(
            emap.input_dim, X.shape))
    if not np.all(np.isfinite(X)):
        raise InvalidArgumentError("input contains non-finite values")
    Z = ACTIVATIONS[emap.activation](X @ emap.projection + emap.bias)
    return np.hstack([X, Z])


def encode_label(s, m):
    """
    One-hot encoding of class s in 1..m.

    Examples
    --------
    >>> encode_label(2, 3).vector
    array([0., 1., 0.])
    """
    m = _check_dim("m", m)
    if isinstance(s, bool) or int(s) != s or not 1 <= s <= m:
        raise InvalidArgumentError("class index {0} outside 1..{1}".format(s, m))
    vector = np.zeros(m)
    vector[int(s) - 1] = 1.0
    return OneHotLabel(int(s), vector)


def encode_labels(labels, m):
    """n x m matrix of one-hot rows."""
    labels = np.asarray(labels)
    m = _check_dim("m", m)
    if labels.ndim != 1:
        raise InvalidArgumentError("labels must be a vector")
    if labels.size and (labels.min() < 1 or labels.max() > m):
        raise InvalidArgumentError("class indices must lie in 1..{0}".format(m))
    S = np.zeros((labels.shape[0], m))
    S[np.arange(labels.shape[0]), labels.astype(int) - 1] = 1.0
    return S


def one_hot_vector(label):
    """Accept either a OneHotLabel or a plain vector."""
    return np.asarray(getattr(label, "vector", label), dtype=np.float64)


class DesignMatrices(object):
    """
    Extended features A (n x D) and one-hot targets S (n x m), rows in arrival
    order.
    """

    def __init__(self, A, S):
        A = np.atleast_2d(np.asarray(A, dtype=np.float64))
        S = np.atleast_2d(np.asarray(S, dtype=np.float64))
        if A.shape[0] != S.shape[0]:
            raise InvalidArgumentError("A has {0} rows but S has {1}".format(A.shape[0], S.shape[0]))
        if A.shape[0] == 0:
            raise InvalidArgumentError("design matrices are empty")
        if not (np.all((S == 0) | (S == 1)) and np.all(S.sum(axis=1) == 1)):
            raise InvalidArgumentError("every row of S must be one-hot")
        self.A = A
        self.S = S

    @classmethod
    def from_samples(cls, X, labels, emap, m):
        return cls(extend_many(X, emap), encode_labels(labels, m))

    @property
    def n_rows(self):
        return self.A.shape[0]

    @property
    def extended_dim(self):
        return self.A.shape[1]

    @property
    def n_classes(self):
        return self.S.shape[1]

    def __len__(self):
        return self.n_rows


class HyperParams(object):
    """
    Parameters
    ----------
    lam: float
        ridge coefficient, > 0
    n_groups: int
    nodes_per_group: int
    seed: int
    """

    def __init__(self, lam=0.1, n_groups=10, nodes_per_group=10, seed=0):
        if not lam > 0:
            raise InvalidArgumentError("lambda must be > 0, got {0}".format(lam))
        self.lam = float(lam)
        self.n_groups = _check_dim("n_groups", n_groups)
        self.nodes_per_group = _check_dim("nodes_per_group", nodes_per_group)
        self.seed = seed

    def __repr__(self):
        return "HyperParams(lam={0}, n_groups={1}, nodes_per_group={2}, seed={3})".format(
            self.lam, self.n_groups, self.nodes_per_group, self.seed)


class OutputWeights(object):
    """The D x m output weight matrix W_b."""

    def __init__(self, W):
        W = _frozen(np.atleast_2d(W))
        if not np.all(np.isfinite(W)):
            raise NumericalError("output weights contain non-finite entries")
        self.W = W

    @property
    def shape(self):
        return self.W.shape


def squared_sample_weights(scheme, n, start=1):
    """w_i ** 2 for i = start..start + n - 1 as a float array."""
    out = np.empty(n)
    for j in range(n):
        c = scheme.squared_weight_at(start + j)
        if c is None:
            raise NumericalError("squared weight of sample {0} overflows".format(start + j), rows=n)
        out[j] = c
    return out


def weighted_normal_equations(A, S, lam, row_weights):
    """(lam I + A' T'T A, A' T'T S) for squared row weights."""
    WA = A * row_weights[:, None]
    G = WA.T @ A
    G[np.diag_indices_from(G)] += lam
    return G, WA.T @ S


def spd_solve(G, B, rows=None):
    """Solve G X = B for symmetric positive definite G via Cholesky."""
    if not (np.all(np.isfinite(G)) and np.all(np.isfinite(B))):
        raise NumericalError("normal equations contain non-finite values after {0} rows".format(rows), rows=rows)
    try:
        factor = cho_factor(G, lower=True, check_finite=False)
    except LinAlgError as e:
        raise NumericalError("Cholesky factorization failed after {0} rows: {1}".format(rows, e), rows=rows)
    return cho_solve(factor, B, check_finite=False)


def train_batch(design, scheme, params):
    """
    Weighted ridge solution over the whole design,
    W_b = (lam I + A' T'T A)^-1 A' T'T S.

    Parameters
    ----------
    design: DesignMatrices
    scheme: WeightScheme
        weight law over rows 1..n
    params: HyperParams

    Returns
    -------
    OutputWeights
    """
    n = design.n_rows
    G, R = weighted_normal_equations(design.A, design.S, params.lam, squared_sample_weights(scheme, n))
    W = spd_solve(G, R, rows=n)
    logger.debug("batch solve over %d rows with %r", n, scheme)
    return OutputWeights(W)


def scores_to_label(scores):
    """1 + argmax; np.argmax already returns the first (lowest) index on ties."""
    return int(np.argmax(scores)) + 1


def predict_extended(x_ext, W):
    W = getattr(W, "W", W)
    x_ext = np.asarray(x_ext, dtype=np.float64)
    if x_ext.ndim != 1 or x_ext.shape[0] != W.shape[0]:
        raise InvalidArgumentError("extended feature has length {0}, weights expect {1}".format(
            x_ext.shape[-1] if x_ext.ndim else 0, W.shape[0]))
    scores = x_ext @ W
    return scores, scores_to_label(scores)


def predict(x, emap, W):
    """
    Scores x~' W_b and the predicted class (1-based).

    Examples
    --------
    >>> emap = init_enhancement(2, 1, 1, seed=0)
    >>> predict([0.5, 0.5], emap, OutputWeights(np.zeros((3, 2))))[1]
    1
    """
    W = getattr(W, "W", W)
    if W.shape[0] != emap.extended_dim:
        raise InvalidArgumentError("weights have {0} rows, map produces {1} features".format(
            W.shape[0], emap.extended_dim))
    return predict_extended(extend(x, emap), W)


class Standardizer(object):
    """
    Per-column mean/std scaling estimated once, on the offline split.
    Columns with zero variance are centred but not scaled.
    """

    def __init__(self, mean, scale):
        self.mean = _frozen(mean)
        self.scale = _frozen(scale)

    @classmethod
    def fit(cls, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[0] == 0:
            raise InvalidArgumentError("cannot fit a standardizer on zero rows")
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
        return cls(X.mean(axis=0), scale)

    def transform(self, X):
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.scale
