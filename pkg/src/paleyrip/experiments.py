"""Reproducible numerical experiments on the Paley construction.

Covers the empirical RIP lower-bound curves d(j) and their worst-case
variant over many random supports, exhaustive exact RIP at tiny scale, the
log-log power-law fit, the bordered-bound sharpness study, and the
quadratic-residue pair searches behind the square-root-barrier conjecture.

Determinism contract: every result is a pure function of its arguments
including the master seed.  Per-trial sub-seeds come from rng.sub_seed, so
outcomes do not depend on evaluation order or on how many worker threads
run the trials (capped by the PALEY_THREADS environment variable).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import spectra
from .errors import MalformedInputError, NotPrimeError, ParameterRangeError
from .frame import SupportSet, as_support, gram_analytic
from .numtheory import PaleyPrime, as_paley_prime, chi_table, is_prime
from .rng import random_subset, sub_seed

EXACT_RIP_GUARD = 10**6
DEFAULT_FIT_JMIN = 3


def _thread_count(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get("PALEY_THREADS", "1")
        try:
            threads = int(raw)
        except ValueError as exc:
            raise ParameterRangeError(f"PALEY_THREADS must be an integer, got {raw!r}") from exc
    if threads < 1:
        raise ParameterRangeError(f"thread count must be positive, got {threads}")
    return threads


def _odd_prime(p) -> int:
    p = int(getattr(p, "p", p))
    if p < 3 or not is_prime(p):
        raise NotPrimeError(f"need an odd prime, got {p}")
    return p


@dataclass(frozen=True)
class RipEstimate:
    """Empirical RIP lower-bound curve d(1..k) with full provenance.

    d[0] (order 1) is 0 by convention; within a trial the supports are
    nested prefixes of one random draw, so d is nondecreasing by eigenvalue
    interlacing of principal submatrices.
    """

    p: int
    k: int
    seed: int
    trials: int
    d: np.ndarray = field(repr=False)
    supports: tuple[tuple[int, ...], ...] | None = None


def _deviation_curve(pp: PaleyPrime, support: tuple[int, ...]) -> np.ndarray:
    """d(j) over the nested prefixes of one ordered support."""
    k = len(support)
    g = gram_analytic(pp, support)
    d = np.zeros(k)
    for j in range(2, k + 1):
        w = spectra.hermitian_spectrum(g[:j, :j])
        d[j - 1] = max(w[-1] - 1.0, 1.0 - w[0])
    return d


def estimate_rip_single(p, k: int, seed: int = 0) -> RipEstimate:
    """d(j) for j = 1..k from one uniformly random k-subset.

    The extreme eigenvalues of every nested prefix Gramian G_j feed
    d(j) = max(lambda_max(G_j) - 1, 1 - lambda_min(G_j)); the draw is a
    pure function of (p, k, seed).
    """
    pp = as_paley_prime(p)
    k = int(k)
    if not 2 <= k <= pp.p:
        raise ParameterRangeError(f"k must be in [2, p], got k={k}, p={pp.p}")
    support = random_subset(pp.p, k, seed)
    d = _deviation_curve(pp, support)
    return RipEstimate(pp.p, k, int(seed), 1, d, (support,))


def estimate_rip_worst(p, k: int, trials: int, seed: int = 0,
                       threads: int | None = None,
                       keep_supports: bool = True) -> RipEstimate:
    """Pointwise max of d(j) over `trials` independent single-support runs.

    Trial t uses sub_seed(seed, t), so the curve is identical for any
    execution order or worker count.
    """
    pp = as_paley_prime(p)
    trials = int(trials)
    if trials < 1:
        raise ParameterRangeError(f"trials must be >= 1, got {trials}")
    k = int(k)
    if not 2 <= k <= pp.p:
        raise ParameterRangeError(f"k must be in [2, p], got k={k}, p={pp.p}")

    supports = [random_subset(pp.p, k, sub_seed(seed, t)) for t in range(trials)]
    workers = min(_thread_count(threads), trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            curves = list(pool.map(lambda s: _deviation_curve(pp, s), supports))
    else:
        curves = [_deviation_curve(pp, s) for s in supports]
    d = np.maximum.reduce(curves)
    return RipEstimate(pp.p, k, int(seed), trials, d,
                       tuple(supports) if keep_supports else None)


def exact_rip(p, k: int) -> float:
    """Worst eigenvalue deviation over all k-subsets (tiny scale only).

    Guarded by binomial(p, k) <= 10^6; this is the brute-force oracle the
    closed-form bounds are checked against.
    """
    pp = as_paley_prime(p)
    k = int(k)
    if not 1 <= k <= pp.p:
        raise ParameterRangeError(f"k must be in [1, p], got k={k}, p={pp.p}")
    if math.comb(pp.p, k) > EXACT_RIP_GUARD:
        raise ParameterRangeError(
            f"binomial({pp.p}, {k}) exceeds the exhaustive guard {EXACT_RIP_GUARD}"
        )
    worst = 0.0
    for subset in combinations(range(pp.p), k):
        g = gram_analytic(pp, subset)
        w = spectra.hermitian_spectrum(g)
        worst = max(worst, w[-1] - 1.0, 1.0 - w[0])
    return worst


def fit_power_law(est: RipEstimate, j_min: int = DEFAULT_FIT_JMIN) -> tuple[float, float, float]:
    """Least-squares slope of log d(j) on log j over j in [j_min, k].

    Nonpositive d(j) are skipped.  Returns (beta, intercept, r2).  The
    default window starts at 3 because d(2) and d(3) are deterministic for
    this construction and would bias the slope of the stochastic regime.
    """
    if j_min < 2:
        raise ParameterRangeError(f"j_min must be >= 2, got {j_min}")
    j = np.arange(1, est.k + 1)
    mask = (j >= j_min) & (est.d > 0.0) & np.isfinite(est.d)
    if mask.sum() < 3:
        raise MalformedInputError(
            f"power-law fit needs >= 3 positive points in the window, got {int(mask.sum())}"
        )
    x = np.log(j[mask].astype(float))
    y = np.log(est.d[mask])
    xm, ym = float(x.mean()), float(y.mean())
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    beta = sxy / sxx
    intercept = ym - beta * xm
    resid = y - (beta * x + intercept)
    sst = float(np.sum((y - ym) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / sst if sst > 0 else 1.0
    return beta, intercept, r2


@dataclass(frozen=True)
class DemboRatioRow:
    j: int
    lambda_max: float
    dembo_bound: float
    gershgorin_bound: float
    dembo_ratio: float
    gershgorin_ratio: float


def dembo_ratio_study(p, k: int, seed: int = 0) -> list[DemboRatioRow]:
    """Sharpness of the one-step bordered bound against the disk bound.

    One random support; for each prefix order j the bordered bound is fed
    the exact previous top eigenvalue (the idealized recursion) and the
    squared border norm (j-1)/p, then both bounds are divided by the true
    lambda_max of the prefix Gramian.
    """
    pp = as_paley_prime(p)
    k = int(k)
    if not 3 <= k <= pp.p:
        raise ParameterRangeError(f"k must be in [3, p], got k={k}, p={pp.p}")
    support = random_subset(pp.p, k, seed)
    g = gram_analytic(pp, support)
    sqrt_p = math.sqrt(pp.p)
    rows = []
    lam_prev = 1.0  # top eigenvalue of the 1x1 prefix
    for j in range(2, k + 1):
        w = spectra.hermitian_spectrum(g[:j, :j])
        lam = float(w[-1])
        dembo = spectra.dembo_upper(1.0, lam_prev, (j - 1) / pp.p)
        gersh = 1.0 + (j - 1) / sqrt_p
        rows.append(DemboRatioRow(j, lam, dembo, gersh, dembo / lam, gersh / lam))
        lam_prev = lam
    return rows


# --- quadratic-residue pair experiments -------------------------------------


@dataclass(frozen=True)
class ConjectureRecord:
    """Best balanced pair found in one support.

    `numerator` is the exact integer |sum over the one-sided difference set
    of chi(r_i - r_l) chi(r_j - r_l)|; ratio = numerator / (k - 2).
    `zero_terms` counts chi-arguments that vanished mod p (impossible for a
    validated distinct support, kept for transparency).
    """

    p: int
    support: tuple[int, ...]
    pair: tuple[int, int]
    ratio: float
    alpha: float
    satisfied: bool
    numerator: int = 0
    zero_terms: int = 0


def _chi_matrix(p: int, indices: tuple[int, ...]) -> np.ndarray:
    chi = chi_table(p)
    idx = np.asarray(indices)
    return chi[(idx[:, None] - idx[None, :]) % p]


def one_sided_ratio(p, support, i: int, j: int) -> float:
    """Normalized character sum over the one-sided difference set of (i, j).

    With a = r_j - r_i the summand chi(r_i - r_l) chi(r_i - r_l + a) equals
    chi(r_i - r_l) chi(r_j - r_l); the numerator is accumulated as an exact
    integer and divided by |support| - 2.
    """
    p = _odd_prime(p)
    T = as_support(p, support)
    k = len(T)
    if k < 3:
        raise ParameterRangeError(f"need |support| >= 3, got {k}")
    if i == j or not (0 <= i < k and 0 <= j < k):
        raise ParameterRangeError(f"invalid pair positions ({i}, {j}) for size {k}")
    cm = _chi_matrix(p, T.indices)
    num = int(np.dot(cm[i], cm[j]))  # diagonal chi(0) = 0 drops l in {i, j}
    return abs(num) / (k - 2)


def conjecture_search(p, support, alpha: float = 0.8) -> ConjectureRecord:
    """Exhaustive pair scan for the smallest one-sided ratio.

    All ordered pairs are admissible (the summand is symmetric in i and j,
    so the minimum lands on the lexicographically smallest position pair).
    """
    p = _odd_prime(p)
    T = as_support(p, support)
    k = len(T)
    if k < 3:
        raise ParameterRangeError(f"need |support| >= 3, got {k}")
    cm = _chi_matrix(p, T.indices)
    nums = cm @ cm.T  # entry (i, j): exact pair numerator, diagonal irrelevant
    best = None
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            n = abs(int(nums[i, j]))
            if best is None or n < best[0]:
                best = (n, i, j)
    n, i, j = best
    zero_terms = int(np.sum(cm[i] == 0) + np.sum(cm[j] == 0)) - 2  # beyond chi(0) diag
    ratio = n / (k - 2)
    return ConjectureRecord(
        p=p, support=T.indices, pair=(i, j), ratio=ratio, alpha=float(alpha),
        satisfied=ratio < alpha, numerator=n, zero_terms=max(zero_terms, 0),
    )


def greedy_peel(p, support, alpha: float = 0.8, m_alpha: int = 5) -> list[ConjectureRecord]:
    """Repeatedly remove the best balanced pair until < m_alpha elements remain.

    Mirrors the inductive peeling argument: each step must find a pair with
    ratio below alpha among the surviving elements.  Returns the full trace;
    the final residual has m_alpha - 1 or m_alpha - 2 elements, matching the
    parity of the starting size.
    """
    p = _odd_prime(p)
    T = as_support(p, support)
    if m_alpha < 3:
        raise ParameterRangeError(f"m_alpha must be >= 3, got {m_alpha}")
    if len(T) < m_alpha:
        raise ParameterRangeError(f"need |support| >= m_alpha, got {len(T)} < {m_alpha}")
    remaining = list(T.indices)
    trace = []
    while len(remaining) >= m_alpha:
        rec = conjecture_search(p, SupportSet(p, tuple(remaining)), alpha)
        trace.append(rec)
        i, j = rec.pair
        for pos in sorted((i, j), reverse=True):
            remaining.pop(pos)
    return trace


@dataclass(frozen=True)
class ConjectureScanSummary:
    p: int
    k: int
    trials: int
    seed: int
    alpha: float
    records: tuple[ConjectureRecord, ...]
    fraction_satisfied: float
    worst_ratio: float
    worst_support: tuple[int, ...]


def conjecture_scan(p, k: int, trials: int, alpha: float = 0.8, seed: int = 0,
                    threads: int | None = None) -> ConjectureScanSummary:
    """Best-pair search over many random supports; reports the worst case.

    Trial sub-seeding matches estimate_rip_worst, so extending the trial
    count only appends trials and can never lower the worst best-ratio.
    """
    p = _odd_prime(p)
    trials = int(trials)
    if trials < 1:
        raise ParameterRangeError(f"trials must be >= 1, got {trials}")
    k = int(k)
    if not 3 <= k <= p:
        raise ParameterRangeError(f"k must be in [3, p], got k={k}, p={p}")

    supports = [random_subset(p, k, sub_seed(seed, t)) for t in range(trials)]
    search = lambda s: conjecture_search(p, SupportSet(p, s), alpha)
    workers = min(_thread_count(threads), trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = tuple(pool.map(search, supports))
    else:
        records = tuple(search(s) for s in supports)
    worst = max(range(trials), key=lambda t: (records[t].ratio, -t))
    frac = sum(r.satisfied for r in records) / trials
    return ConjectureScanSummary(
        p=p, k=k, trials=trials, seed=int(seed), alpha=float(alpha),
        records=records, fraction_satisfied=frac,
        worst_ratio=records[worst].ratio, worst_support=supports[worst],
    )
