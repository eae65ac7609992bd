"""Closed-form predictions for the vacant set of a random walk.

A simple random walk on a random r-regular graph leaves behind a shrinking
vacant set (the vertices it has not yet visited).  The functions here give
the asymptotic predictions for that set: its expected size, the survival
probability of a half-edge into the vacant set, the binomial degree profile,
the critical walk length where the giant vacant component breaks apart, the
size of the giant while it exists, and the expected number of small tree
components.  A second group of functions covers the Erdos-Renyi style models
G(n,p) and its directed variant, where the interesting walk lengths sit on a
log-log schedule instead of a linear one.

Everything in this module is deterministic arithmetic; the Monte Carlo side
lives in `experiments`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "return_constant",
    "critical_time",
    "expected_vacant_count",
    "vacant_neighbor_prob",
    "degree_profile",
    "extinction_prob",
    "giant_fraction",
    "er_giant_fraction",
    "molloy_reed_weighted_sum",
    "molloy_reed_criterion",
    "root_subtree_count",
    "count_subtrees_by_enumeration",
    "expected_tree_count",
    "tree_size_thresholds",
    "cover_time_estimate",
    "RegularPrediction",
    "GnpSchedule",
    "gnp_schedule",
]

_FIXED_POINT_TOL = 1e-12
_ONE_MINUS = 1.0 - 1e-9  # upper end of the bracket, keeps the root u = 1 out


def _check_r(r: int) -> int:
    if int(r) != r or r < 3:
        raise ValueError(f"degree r must be an integer >= 3, got {r!r}")
    return int(r)


def return_constant(r: int) -> float:
    """Expected number of visits to a typical vertex per excursion, (r-1)/(r-2).

    This is the limit of the short-horizon return count R_v used to convert
    the stationary visit rate into a first-visit rate.
    """
    r = _check_r(r)
    return (r - 1.0) / (r - 2.0)


def critical_time(r: int) -> float:
    """Coefficient c such that the vacant phase transition happens near c*n steps.

    Equals r(r-1)log(r-1)/(r-2)^2 with natural log.  For walk length t below
    this multiple of n the vacant set has a giant component; above it, only
    small components survive.
    """
    r = _check_r(r)
    return r * (r - 1.0) * math.log(r - 1.0) / (r - 2.0) ** 2


def expected_vacant_count(n: int, r: int, t: float) -> float:
    """Expected number of unvisited vertices after t steps, n*exp(-t/(rho*n))."""
    r = _check_r(r)
    if t < 0:
        raise ValueError("walk length t must be >= 0")
    return n * math.exp(-t / (return_constant(r) * n))


def vacant_neighbor_prob(n: int, r: int, t: float) -> float:
    """Survival probability of one half-edge of a vacant vertex after t steps.

    The degree of a vacant vertex inside the vacant set is Binomial(r, p)
    with this p.  Decays like exp(-(r-2)t/(rho*r*n)); equals 1/(r-1) exactly
    at the critical walk length.
    """
    r = _check_r(r)
    if t < 0:
        raise ValueError("walk length t must be >= 0")
    rho = return_constant(r)
    return math.exp(-(r - 2.0) * t / (rho * r * n))


def degree_profile(p: float, r: int) -> np.ndarray:
    """Binomial(r, p) profile: entry s is the predicted fraction of vacant
    vertices with exactly s vacant neighbours."""
    r = _check_r(r)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability p must be in [0, 1], got {p}")
    s = np.arange(r + 1)
    return np.array([math.comb(r, int(k)) for k in s]) * p**s * (1.0 - p) ** (r - s)


def extinction_prob(p: float, r: int) -> float:
    """Extinction probability u of the Binomial(r-1, p) branching process.

    Smallest root of u = (1 - p + p*u)^(r-1) in [0, 1], found by bisection to
    absolute tolerance 1e-12.  Returns 1.0 in the subcritical regime
    p <= 1/(r-1) and exactly 0.0 at p = 1.
    """
    r = _check_r(r)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability p must be in [0, 1], got {p}")
    if p <= 1.0 / (r - 1.0):
        return 1.0
    if p == 1.0:
        return 0.0

    def f(u: float) -> float:
        return (1.0 - p + p * u) ** (r - 1) - u

    lo, hi = 0.0, _ONE_MINUS
    if f(hi) > 0.0:
        # root squeezed against 1 (barely supercritical); the bracket top is
        # already within tolerance of it
        return hi
    while hi - lo > _FIXED_POINT_TOL:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def giant_fraction(p: float, r: int) -> float:
    """Fraction of the vacant set inside the giant component, 1-(1-p+p*u)^r.

    Survival probability of the two-stage branching process: a vertex whose
    r half-edges each survive independently with probability p and continue
    with offspring law Binomial(r-1, p).  Exactly 0.0 when p <= 1/(r-1).
    """
    u = extinction_prob(p, r)
    return 1.0 - (1.0 - p + p * u) ** r


def er_giant_fraction(lam: float) -> float:
    """Giant component fraction of an Erdos-Renyi graph with mean degree lam.

    Positive root of beta = 1 - exp(-lam*beta), by bisection; 0.0 for
    lam <= 1.
    """
    if lam < 0:
        raise ValueError("mean degree must be >= 0")
    if lam <= 1.0:
        return 0.0

    def f(b: float) -> float:
        return 1.0 - math.exp(-lam * b) - b

    lo, hi = 1e-9, 1.0
    if f(lo) <= 0.0:
        return 0.0
    while hi - lo > _FIXED_POINT_TOL:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def molloy_reed_weighted_sum(probs) -> float:
    """Sum of s(s-2)*probs[s]: positive means a giant component, negative none."""
    total = 0.0
    for s, q in enumerate(probs):
        total += s * (s - 2.0) * q
    return total


def molloy_reed_criterion(p: float, r: int) -> float:
    """Closed form of the weighted sum for the Binomial(r, p) profile: rp((r-1)p - 1).

    Vanishes exactly at p = 1/(r-1) and equals r(r-2) at p = 1.
    """
    r = _check_r(r)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability p must be in [0, 1], got {p}")
    return r * p * ((r - 1.0) * p - 1.0)


def root_subtree_count(r: int, k: int) -> int:
    """Number of k-vertex subtrees of the infinite r-regular tree containing the root.

    Exact integer r/((r-2)k + 2) * C((r-1)k, k-1), evaluated with arbitrary
    precision integers so there is no overflow for any k.
    """
    r = _check_r(r)
    if int(k) != k or k < 1:
        raise ValueError(f"tree size k must be an integer >= 1, got {k!r}")
    k = int(k)
    num = r * math.comb((r - 1) * k, k - 1)
    den = (r - 2) * k + 2
    if num % den != 0:
        raise ArithmeticError(f"subtree count not integral for r={r}, k={k}")
    return num // den


def count_subtrees_by_enumeration(r: int, k_max: int) -> list[int]:
    """Independent oracle for `root_subtree_count`: exhaustive recursive count.

    Counts rooted subtrees directly.  The root offers r attachment slots and
    every vertex below it offers r-1; a subtree is a choice of occupied slots,
    counted by recursing over how many vertices hang below each slot.  No
    closed form is used.  Returns counts for k = 1..k_max.
    """
    r = _check_r(r)
    if int(k_max) != k_max or not 1 <= k_max <= 12:
        raise ValueError("k_max must be an integer in [1, 12]")

    @lru_cache(maxsize=None)
    def forest(slots: int, j: int) -> int:
        # number of ways to hang j vertices below `slots` distinguishable slots
        if j == 0:
            return 1
        if slots == 0:
            return 0
        total = forest(slots - 1, j)  # last slot left empty
        for a in range(1, j + 1):  # last slot carries a subtree of a vertices
            total += subtree(a) * forest(slots - 1, j - a)
        return total

    @lru_cache(maxsize=None)
    def subtree(a: int) -> int:
        # subtrees of a vertices rooted at a non-root vertex (r-1 free slots)
        return forest(r - 1, a - 1)

    return [forest(r, k - 1) for k in range(1, int(k_max) + 1)]


def expected_tree_count(n: int, r: int, k: int, t: float) -> float:
    """Expected number of tree components with exactly k vertices in the vacant set.

    N_t * (b_k / k) * p^(k-1) * (1-p)^((r-2)k + 2) with b_k the rooted subtree
    count and p the half-edge survival probability.  Evaluated in log space so
    large k does not overflow.
    """
    r = _check_r(r)
    if int(k) != k or k < 1:
        raise ValueError(f"tree size k must be an integer >= 1, got {k!r}")
    k = int(k)
    p = vacant_neighbor_prob(n, r, t)
    if p >= 1.0:  # t = 0: the vacant set is the whole graph, no small trees
        return 0.0
    log_eta = (
        math.log(n)
        - t / (return_constant(r) * n)
        + math.log(r)
        - math.log(k)
        - math.log((r - 2) * k + 2)
        + _log_comb((r - 1) * k, k - 1)
        + ((r - 2) * k + 2) * math.log1p(-p)
    )
    if k > 1:
        if p == 0.0:
            return 0.0
        log_eta += (k - 1) * math.log(p)
    return math.exp(log_eta)


def _log_comb(a: int, b: int) -> float:
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


@dataclass(frozen=True)
class TreeSizeThresholds:
    """Walk-length thresholds for the largest surviving tree size.

    For walk length t between `time[k]` and `time[k-1]` the largest vacant
    tree component has about k vertices, and its count at that scale is
    `size_scale[k]` = n^(1-1/k).  `time[0]` is the cover time scale
    rho*n*log(n).
    """

    n: int
    r: int
    k: np.ndarray
    size_scale: np.ndarray
    time: np.ndarray


def tree_size_thresholds(n: int, r: int, k_max: int = 10) -> TreeSizeThresholds:
    r = _check_r(r)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    ks = np.arange(0, k_max + 1)
    rho = return_constant(r)
    with np.errstate(divide="ignore"):
        scale = np.where(ks > 0, n ** (1.0 - 1.0 / np.maximum(ks, 1)), 0.0)
    times = rho * r * n * math.log(n) / (ks * (r - 2) + r)
    return TreeSizeThresholds(n=n, r=r, k=ks, size_scale=scale, time=times)


def cover_time_estimate(n: int, r: int) -> float:
    """Leading-order cover time rho*n*log(n); equals 2n*log(n) for r = 3."""
    r = _check_r(r)
    return return_constant(r) * n * math.log(n)


@dataclass(frozen=True)
class RegularPrediction:
    """Bundle of the vacant-set predictions for one (n, r) pair."""

    n: int
    r: int

    def __post_init__(self) -> None:
        _check_r(self.r)
        if self.n <= self.r:
            raise ValueError("need n > r")

    @property
    def rho(self) -> float:
        return return_constant(self.r)

    @property
    def critical_steps(self) -> float:
        """Walk length of the phase transition (already scaled by n)."""
        return critical_time(self.r) * self.n

    @property
    def cover_steps(self) -> float:
        return cover_time_estimate(self.n, self.r)

    def vacant_count(self, t: float) -> float:
        return expected_vacant_count(self.n, self.r, t)

    def neighbor_prob(self, t: float) -> float:
        return vacant_neighbor_prob(self.n, self.r, t)

    def degree_profile(self, t: float) -> np.ndarray:
        return degree_profile(self.neighbor_prob(t), self.r)

    def giant_vacant_fraction(self, t: float) -> float:
        return giant_fraction(self.neighbor_prob(t), self.r)

    def molloy_reed(self, t: float) -> float:
        return molloy_reed_criterion(self.neighbor_prob(t), self.r)

    def tree_count(self, k: int, t: float) -> float:
        return expected_tree_count(self.n, self.r, k, t)


@dataclass(frozen=True)
class GnpSchedule:
    """One probe point on the G(n,p) walk-length schedule.

    `t` is the walk length for offset theta, `vacant_pred` the predicted
    vacant count n/(c^(1+theta) log n) there, and `lam` = c^(-theta) the
    predicted mean vacant degree (vacant_pred * p exactly).
    """

    n: int
    p: float
    theta: float
    c: float
    t: float
    vacant_pred: float
    lam: float


def gnp_schedule(n: int, p: float, theta: float) -> GnpSchedule:
    """Walk-length schedule t = n(log log n + (1+theta) log c) with c = np/log n.

    theta < 0 probes the regime with a giant vacant component, theta > 0 the
    shattered one.  Requires c > 1 (below that the graph itself is not in the
    connected regime and the schedule is meaningless).
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability p must be in (0, 1), got {p}")
    c = n * p / math.log(n)
    if c <= 1.0:
        raise ValueError(f"np/log(n) = {c:.4f} <= 1: outside the schedule's regime")
    t = n * (math.log(math.log(n)) + (1.0 + theta) * math.log(c))
    vacant_pred = n / (c ** (1.0 + theta) * math.log(n))
    return GnpSchedule(
        n=n, p=p, theta=theta, c=c, t=t, vacant_pred=vacant_pred, lam=c ** (-theta)
    )
