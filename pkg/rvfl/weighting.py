"""
Per-sample weight laws and how much of the total weight the newest samples
hold.

Sample ``i`` (1-based, in arrival order) gets weight ``w_i``:

    uniform          1
    exponential(t)   t ** (i - 1)
    polynomial(k)    i ** k

The ridge objective squares these weights, so incremental updates use
``w_i ** 2``. Proportions reported here are over the unsquared weights, the
way the recency argument is usually stated.
"""
import math
from fractions import Fraction

from prettytable import PrettyTable

from .errors import InvalidArgumentError

UNIFORM = "uniform"
EXPONENTIAL = "exponential"
POLYNOMIAL = "polynomial"

# log of the largest finite double
LOG_FLOAT_MAX = math.log(1.7976931348623157e308)


class WeightScheme(object):
    """
    A per-sample weight law.

    Parameters
    ----------
    variant: str
        one of "uniform", "exponential", "polynomial"
    theta: float
        growth factor for the exponential law (theta >= 1)
    k: int
        power for the polynomial law (k >= 1)

    Examples
    --------
    >>> WeightScheme.exponential(1.003)
    WeightScheme(exponential, theta=1.003)
    >>> WeightScheme.polynomial(2).weight_at(3)
    9.0
    """

    def __init__(self, variant, theta=None, k=None):
        if variant == UNIFORM:
            theta, k = None, None
        elif variant == EXPONENTIAL:
            if theta is None or not math.isfinite(theta) or theta < 1:
                raise InvalidArgumentError("exponential weights need theta >= 1, got {0}".format(theta))
            theta = float(theta)
            k = None
        elif variant == POLYNOMIAL:
            if isinstance(k, bool) or not isinstance(k, int) or k < 1:
                raise InvalidArgumentError("polynomial weights need an integer k >= 1, got {0}".format(k))
            theta = None
        else:
            raise InvalidArgumentError("Unknown weight scheme '{0}'. Must be one of: uniform, exponential, polynomial".format(variant))
        self.variant = variant
        self.theta = theta
        self.k = k

    @classmethod
    def uniform(cls):
        return cls(UNIFORM)

    @classmethod
    def exponential(cls, theta):
        return cls(EXPONENTIAL, theta=theta)

    @classmethod
    def polynomial(cls, k):
        return cls(POLYNOMIAL, k=k)

    def __repr__(self):
        if self.variant == EXPONENTIAL:
            return "WeightScheme(exponential, theta={0})".format(self.theta)
        if self.variant == POLYNOMIAL:
            return "WeightScheme(polynomial, k={0})".format(self.k)
        return "WeightScheme(uniform)"

    def __eq__(self, other):
        return isinstance(other, WeightScheme) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.variant, self.theta, self.k))

    def log_weight_at(self, i):
        """Natural log of the weight of sample i."""
        _check_index(i)
        if self.variant == EXPONENTIAL:
            return (i - 1) * math.log(self.theta)
        if self.variant == POLYNOMIAL:
            return self.k * math.log(i)
        return 0.0

    def weight_at(self, i):
        return weight_at(self, i)

    def squared_weight_at(self, i):
        """
        w_i ** 2, the factor sample i carries in the normal equations.

        Returns None when the value would not be a finite double; callers turn
        that into a WeightOverflowError with their own context.
        """
        if 2.0 * self.log_weight_at(i) > LOG_FLOAT_MAX:
            return None
        return weight_at(self, i) ** 2

    def to_dict(self):
        return {"variant": self.variant, "theta": self.theta, "k": self.k}

    @classmethod
    def from_dict(cls, d):
        return cls(d["variant"], theta=d.get("theta"), k=d.get("k"))


class ProportionReport(object):
    """
    Share of the total weight held by the newest L of n samples.

    ``limit`` is the value the share tends to as n grows (None for the
    uniform law, where the share is simply L/n).
    """

    def __init__(self, scheme, n, L, p, limit):
        self.scheme = scheme
        self.n = n
        self.L = L
        self.p = p
        self.limit = limit

    def _tablify(self):
        tbl = PrettyTable(["Scheme", "n", "L", "Proportion", "Limit"])
        tbl.align["Scheme"] = "l"
        limit = "-" if self.limit is None else "{0:.6f}".format(self.limit)
        tbl.add_row([repr(self.scheme), self.n, self.L, "{0:.6f}".format(self.p), limit])
        return tbl

    def __repr__(self):
        return str(self._tablify())

    def _repr_html_(self):
        return self._tablify().get_html_string()


def _check_index(i):
    if isinstance(i, bool) or int(i) != i or i < 1:
        raise InvalidArgumentError("sample index is 1-based, got {0}".format(i))


def weight_at(scheme, i):
    """
    Weight of sample i (1-based) under scheme.

    Examples
    --------
    >>> weight_at(WeightScheme.exponential(1.003), 1)
    1.0
    >>> weight_at(WeightScheme.polynomial(2), 3)
    9.0
    """
    _check_index(i)
    i = int(i)
    if scheme.variant == EXPONENTIAL:
        return scheme.theta ** (i - 1)
    if scheme.variant == POLYNOMIAL:
        return float(i ** scheme.k)
    return 1.0


def _stirling2_row(k):
    """S(k, j) for j = 0..k, Stirling numbers of the second kind."""
    row = [1]
    for n in range(1, k + 1):
        nxt = [0] * (n + 1)
        for j in range(1, n + 1):
            nxt[j] = j * (row[j] if j < len(row) else 0) + row[j - 1]
        row = nxt
    return row


def power_sum(n, k):
    """
    Exact sum of i ** k for i = 1..n as a Python integer.

    Uses sum_j S(k, j) j! C(n + 1, j + 1), so the cost depends on k only.
    """
    if n <= 0:
        return 0
    stirling = _stirling2_row(k)
    total = 0
    for j in range(1, k + 1):
        total += stirling[j] * math.factorial(j) * math.comb(n + 1, j + 1)
    return total


def proportion_recent(scheme, n, L):
    """
    Share of the total weight of n samples held by the newest L of them.

    Parameters
    ----------
    scheme: WeightScheme
    n: int
        stream length
    L: int
        window length, 1 <= L <= n

    Examples
    --------
    >>> round(proportion_recent(WeightScheme.exponential(1.003), 1000, 100).p, 3)
    0.272
    >>> round(proportion_recent(WeightScheme.polynomial(2), 1000, 100).p, 5)
    0.27088
    """
    if L < 1 or n < 1:
        raise InvalidArgumentError("need n >= 1 and L >= 1, got n={0}, L={1}".format(n, L))
    if L > n:
        raise InvalidArgumentError("window L={0} is longer than the stream n={1}".format(L, n))

    if scheme.variant == EXPONENTIAL and scheme.theta > 1:
        log_theta = math.log(scheme.theta)
        # (1 - theta^-L) / (1 - theta^-n) without cancellation for theta near 1
        p = math.expm1(-L * log_theta) / math.expm1(-n * log_theta)
        limit = -math.expm1(-L * log_theta)
    elif scheme.variant == EXPONENTIAL:
        p = L / float(n)
        limit = 0.0
    elif scheme.variant == POLYNOMIAL:
        w_all = power_sum(n, scheme.k)
        w_recent = w_all - power_sum(n - L, scheme.k)
        p = float(Fraction(w_recent, w_all))
        limit = 0.0
    else:
        p = L / float(n)
        limit = None
    return ProportionReport(scheme, n, L, min(1.0, max(0.0, p)), limit)


def limit_proportion(theta, L):
    """
    Long-run share of the newest L samples under exponential weights,
    1 - theta ** -L.
    """
    if not theta > 1:
        raise InvalidArgumentError("the limit is only defined for theta > 1, got {0}".format(theta))
    if L < 1:
        raise InvalidArgumentError("window must be >= 1, got {0}".format(L))
    return -math.expm1(-L * math.log(theta))


def calibrate_theta(alpha, L):
    """
    The theta for which the newest L samples end up holding a share alpha of
    the weight, (1 - alpha) ** (-1 / L).

    Examples
    --------
    >>> round(calibrate_theta(0.8, 500), 7)
    1.0032241
    """
    if not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must lie in (0, 1), got {0}".format(alpha))
    if L < 1:
        raise InvalidArgumentError("window must be >= 1, got {0}".format(L))
    return math.exp(-math.log1p(-alpha) / L)
