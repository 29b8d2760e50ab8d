"""
Exact rank-1 evolution of the weighted ridge solution.

After n samples the state holds

    P = (lam I + A' T'T A)^-1     Q = A' T'T S     W = P Q

and absorbing sample n + 1 with squared weight c = w_{n+1} ** 2 is

    dM = 1 / (1 + c a P a')
    dP = c P a' dM a P
    dQ = c a' s
    W <- W + P dQ - dP Q - dP dQ      (P, Q before the update)
    P <- P - dP,  Q <- Q + dQ

For exponential weights c = theta ** (2n) leaves double range near
n = 118,000 at theta = 1.003. The rescaled mode keeps

    C = theta ** (-2(n-1)) (lam I + A' T'T A),  H = C^-1,  R = theta ** (-2(n-1)) Q

so the newest sample always has unit weight and older ones decay by
mu = theta ** -2 per step; H R is the same W.
"""
import logging

import numpy as np

from .core import (one_hot_vector, predict_extended, spd_solve, squared_sample_weights,
                   weighted_normal_equations)
from .errors import InvalidArgumentError, NumericalError, WeightOverflowError
from .weighting import EXPONENTIAL, WeightScheme
from .utils import decode_array, dump_to_json, encode_array, load_from_json

logger = logging.getLogger(__name__)

DIRECT = "direct"
RESCALED = "rescaled"
MODES = (DIRECT, RESCALED)

SNAPSHOT_FORMAT_VERSION = 1


class IncrementalState(object):
    """
    The running (P, Q, W, n) of one model. In rescaled mode ``P`` and ``Q``
    hold H and R instead.

    A state is single-writer: step it from one place at a time.
    """

    def __init__(self, P, Q, W, n, scheme, lam, mode=DIRECT):
        if mode not in MODES:
            raise InvalidArgumentError("Unknown mode '{0}'. Must be one of: direct, rescaled".format(mode))
        if mode == RESCALED and scheme.variant != EXPONENTIAL:
            raise InvalidArgumentError("rescaled mode needs the exponential scheme, got {0!r}".format(scheme))
        self.P = P
        self.Q = Q
        self.W = W
        self.n = int(n)
        self.scheme = scheme
        self.lam = float(lam)
        self.mode = mode

    @property
    def H(self):
        return self.P

    @property
    def R(self):
        return self.Q

    @property
    def extended_dim(self):
        return self.W.shape[0]

    @property
    def n_classes(self):
        return self.W.shape[1]

    def __str__(self):
        return "IncrementalState({0}, {1!r}, n={2})".format(self.mode, self.scheme, self.n)

    def __repr__(self):
        return self.__str__()


def init_state(offline, scheme, lam, mode=DIRECT):
    """
    Batch-train on the offline block and return the state the online phase
    starts from.

    Parameters
    ----------
    offline: DesignMatrices
    scheme: WeightScheme
    lam: float
        ridge coefficient
    mode: str
        "direct" or "rescaled" (exponential scheme only)
    """
    if mode not in MODES:
        raise InvalidArgumentError("Unknown mode '{0}'. Must be one of: direct, rescaled".format(mode))
    if mode == RESCALED and scheme.variant != EXPONENTIAL:
        raise InvalidArgumentError("rescaled mode needs the exponential scheme, got {0!r}".format(scheme))
    if not lam > 0:
        raise InvalidArgumentError("lambda must be > 0, got {0}".format(lam))
    A, S = offline.A, offline.S
    n = offline.n_rows
    D = A.shape[1]

    if mode == DIRECT:
        weights = squared_sample_weights(scheme, n)
        ridge = lam
    else:
        # weights relative to the newest offline row: theta ** (2(i - n))
        log_theta = np.log(scheme.theta)
        weights = np.exp(2.0 * (np.arange(1, n + 1) - n) * log_theta)
        ridge = lam * np.exp(-2.0 * (n - 1) * log_theta)

    G, Q = weighted_normal_equations(A, S, ridge, weights)
    P = spd_solve(G, np.eye(D), rows=n)
    P = 0.5 * (P + P.T)
    W = P @ Q
    logger.debug("initialised %s state on %d offline rows with %r", mode, n, scheme)
    return IncrementalState(P, Q, W, n, scheme, lam, mode)


def _check_sample(state, x_ext, s_vec):
    if x_ext.ndim != 1 or x_ext.shape[0] != state.extended_dim:
        raise InvalidArgumentError("extended feature has shape {0}, state expects ({1},)".format(
            x_ext.shape, state.extended_dim))
    if s_vec.ndim != 1 or s_vec.shape[0] != state.n_classes:
        raise InvalidArgumentError("label vector has shape {0}, state expects ({1},)".format(
            s_vec.shape, state.n_classes))


def step(state, x_ext, s_new, verify_spd=False):
    """
    Absorb one sample into a direct-mode state in place and return it.

    Parameters
    ----------
    state: IncrementalState
    x_ext: array, shape (D,)
        extended feature of the new sample
    s_new: OneHotLabel or array, shape (m,)
    verify_spd: bool
        run the full Cholesky check on the updated inverse

    Raises
    ------
    WeightOverflowError
        c = w_{n+1} ** 2 is not a finite double; use rescaled mode
    NumericalError
        the Sherman-Morrison denominator is not positive, or verify_spd is
        set and the updated inverse is not SPD
    """
    if state.mode == RESCALED:
        return step_rescaled(state, x_ext, s_new, verify_spd=verify_spd)
    a = np.asarray(x_ext, dtype=np.float64)
    s = one_hot_vector(s_new)
    _check_sample(state, a, s)

    c = state.scheme.squared_weight_at(state.n + 1)
    if c is None:
        raise WeightOverflowError(
            "squared weight of sample {0} under {1!r} exceeds double range; "
            "use rescaled mode for streams this long".format(state.n + 1, state.scheme),
            step=state.n + 1)

    P, Q = state.P, state.Q
    Pa = P @ a
    denom = 1.0 + c * (a @ Pa)
    if not (denom > 0 and np.isfinite(denom)):
        raise NumericalError("rank-1 denominator is {0} at sample {1}; state is corrupted".format(
            denom, state.n + 1), step=state.n + 1)
    g = c / denom
    PaQ = Pa @ Q
    # W + P dQ - dP Q - dP dQ, every term rank-1 along Pa
    W = state.W + np.outer(Pa, c * s - g * PaQ - g * c * (a @ Pa) * s)
    P = P - g * np.outer(Pa, Pa)
    P = 0.5 * (P + P.T)
    if verify_spd and not check_spd(P):
        raise NumericalError("P lost positive definiteness at sample {0}".format(state.n + 1), step=state.n + 1)
    state.W = W
    state.P = P
    state.Q = Q + c * np.outer(a, s)
    state.n += 1
    return state


def step_rescaled(state, x_ext, s_new, verify_spd=False):
    """
    Rescaled-mode counterpart of step:

        H' = (1 / mu) [H - H a' a H / (mu + a H a')],  R' = mu R + a' s,  W = H' R'

    with mu = theta ** -2. Every step checks that the diagonal of H stays
    positive, which SPD requires; ``verify_spd`` adds the full Cholesky check.
    """
    if state.mode != RESCALED:
        raise InvalidArgumentError("state is in {0} mode; step_rescaled needs rescaled mode".format(state.mode))
    a = np.asarray(x_ext, dtype=np.float64)
    s = one_hot_vector(s_new)
    _check_sample(state, a, s)

    mu = state.scheme.theta ** -2
    H, R = state.P, state.Q
    Ha = H @ a
    denom = mu + a @ Ha
    if not (denom > 0 and np.isfinite(denom)):
        raise NumericalError("rank-1 denominator is {0} at sample {1}; state is corrupted".format(
            denom, state.n + 1), step=state.n + 1)
    H = (H - np.outer(Ha, Ha) / denom) / mu
    H = 0.5 * (H + H.T)
    if not np.all(np.diag(H) > 0) or (verify_spd and not check_spd(H)):
        raise NumericalError("H lost positive definiteness at sample {0}".format(state.n + 1), step=state.n + 1)
    R = mu * R + np.outer(a, s)
    state.P = H
    state.Q = R
    state.W = H @ R
    state.n += 1
    return state


def current_prediction(state, x_ext):
    """(scores, label) for an extended feature under the state's weights."""
    return predict_extended(x_ext, state.W)


def check_spd(matrix, rtol=1e-9):
    """True when matrix is symmetric to rtol and has a Cholesky factor."""
    matrix = np.asarray(matrix)
    scale = max(np.abs(matrix).max(), np.finfo(float).tiny)
    if np.abs(matrix - matrix.T).max() > rtol * scale:
        return False
    try:
        np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        return False
    return True


def snapshot(state):
    """Dict form of a state; matrices are base64 float64 so nothing is lost."""
    return {
        "format_version": SNAPSHOT_FORMAT_VERSION,
        "mode": state.mode,
        "scheme": state.scheme.to_dict(),
        "lambda": state.lam,
        "n": state.n,
        "P": encode_array(state.P),
        "Q": encode_array(state.Q),
        "W": encode_array(state.W),
    }


def restore(data):
    version = data.get("format_version")
    if version != SNAPSHOT_FORMAT_VERSION:
        raise InvalidArgumentError("Unsupported snapshot format version {0}".format(version))
    return IncrementalState(decode_array(data["P"]), decode_array(data["Q"]), decode_array(data["W"]),
                            data["n"], WeightScheme.from_dict(data["scheme"]), data["lambda"], data["mode"])


def save_state(state, path):
    """
    Write a state snapshot to path as JSON.

    >>> from rvfl import DesignMatrices, WeightScheme
    >>> s = init_state(DesignMatrices([[1.0]], [[1.0]]), WeightScheme.uniform(), 1.0)
    >>> save_state(s, "/tmp/rvfl-state.json")
    """
    dump_to_json(path, snapshot(state))


def load_state(path):
    data = load_from_json(path)
    if data is None:
        raise InvalidArgumentError("No snapshot found at {0}".format(path))
    return restore(data)
