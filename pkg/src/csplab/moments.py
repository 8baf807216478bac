"""First- and second-moment computations for the IID constraint model.

Everything is computed in the log domain with exact combinatorial factors,
so second moments stay finite-representable up to n ~ 10^4; the linear-scale
wrappers overflow to inf where a float cannot hold the value.

Closed forms assume constraints drawn independently and uniformly (the IID
model); the DISTINCT_SET model has no product form here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .core import ConstraintModel, ProblemKind


class UnsupportedModelError(ValueError):
    """No closed form under the requested constraint model."""


def _logsumexp(terms: list[float]) -> float:
    finite = [t for t in terms if t != -math.inf]
    if not finite:
        return -math.inf
    mx = max(finite)
    return mx + math.log(sum(math.exp(t - mx) for t in finite))


def log_expected_count(kind: ProblemKind, n: int, m: int, k: int,
                       model: ConstraintModel = ConstraintModel.IID) -> float:
    """log E[#solutions] of a random instance.

    SAT: 2^n (1-2^-k)^m; NAE: 2^n (1-2^(1-k))^m; coloring: exact sum over
    color-class size profiles of multinomial(n) * (1 - b/C(n,2))^m with
    b = sum C(n_i, 2).
    """
    if model is not ConstraintModel.IID:
        raise UnsupportedModelError("closed forms hold only for the IID model")
    if n < 1 or m < 0 or k < 2:
        raise ValueError(f"invalid (n={n}, m={m}, k={k})")
    if kind is ProblemKind.KSAT:
        return n * math.log(2.0) + m * math.log1p(-(2.0 ** -k))
    if kind is ProblemKind.KNAE:
        return n * math.log(2.0) + m * math.log1p(-(2.0 ** (1 - k)))
    return _log_coloring_expected_count(n, m, k)


def _log_coloring_expected_count(n: int, m: int, k: int) -> float:
    pairs = math.comb(n, 2)
    if pairs == 0:
        if m > 0:
            raise ValueError("no edges exist on a single vertex")
        return n * math.log(k)
    terms: list[float] = []

    def rec(color: int, remaining: int, logcoef: float, b: int):
        if color == k:
            b_total = b + math.comb(remaining, 2)
            if m == 0:
                terms.append(logcoef)
            elif b_total < pairs:
                terms.append(logcoef + m * math.log1p(-b_total / pairs))
            return
        for take in range(remaining + 1):
            rec(color + 1, remaining - take,
                logcoef + math.log(math.comb(remaining, take)),
                b + math.comb(take, 2))

    rec(1, n, 0.0, 0)
    return _logsumexp(terms)


def expected_count(kind: ProblemKind, n: int, m: int, k: int,
                   model: ConstraintModel = ConstraintModel.IID) -> float:
    return math.exp(log_expected_count(kind, n, m, k, model))


def coloring_expected_count_product(n: int, m: int, k: int) -> float:
    """Asymptotic product estimate k^n (1-1/k)^m; not the exact profile sum."""
    return math.exp(n * math.log(k) + m * math.log1p(-1.0 / k))


def first_moment_density_bound(kind: ProblemKind, k: int) -> float:
    """Density above which the expected count decays: 2^k ln2 (SAT),
    2^(k-1) ln2 (NAE), k ln k (coloring)."""
    if k < 2:
        raise ValueError("need k >= 2")
    if kind is ProblemKind.KSAT:
        return 2.0 ** k * math.log(2.0)
    if kind is ProblemKind.KNAE:
        return 2.0 ** (k - 1) * math.log(2.0)
    return k * math.log(k)


def algorithmic_density(kind: ProblemKind, k: int) -> float:
    """Large-k density up to which local algorithms are reported to work:
    2^k ln(k)/k (SAT), 2^(k-1) ln(k)/k (NAE), (1/2) k ln k (coloring)."""
    if kind is ProblemKind.KSAT:
        return 2.0 ** k * math.log(k) / k
    if kind is ProblemKind.KNAE:
        return 2.0 ** (k - 1) * math.log(k) / k
    return 0.5 * k * math.log(k)


# --- NAE second moment ------------------------------------------------------

@lru_cache(maxsize=None)
def _nae_pair_count(k: int, j: int) -> int:
    """Sign patterns (out of 2^k) NAE-satisfied by both assignments when the
    clause has j variables in the agreement set. Brute force, cached."""
    flip = ((1 << (k - j)) - 1) << j  # disagreement positions
    count = 0
    for u in range(1 << k):
        w = u ^ flip
        if u not in (0, (1 << k) - 1) and w not in (0, (1 << k) - 1):
            count += 1
    return count


def nae_pair_prob(n: int, k: int, z: int) -> float:
    """Probability one uniform clause is NAE-satisfied by both of two fixed
    assignments that agree on exactly z of the n variables."""
    if not 0 <= z <= n:
        raise ValueError(f"z={z} out of 0..{n}")
    total = math.comb(n, k)
    if total == 0:
        raise ValueError(f"no clause has {k} distinct variables among {n}")
    q = 0.0
    for j in range(max(0, k - (n - z)), min(k, z) + 1):
        ways = math.comb(z, j) * math.comb(n - z, k - j)
        if ways:
            q += (ways / total) * (_nae_pair_count(k, j) / 2.0 ** k)
    return q


def log_nae_second_moment(n: int, m: int, k: int) -> float:
    """log E[X^2] = log( 2^n * sum_z C(n,z) q(z)^m ), stable for n <= 10^4."""
    if n < 1 or m < 0 or k < 2:
        raise ValueError(f"invalid (n={n}, m={m}, k={k})")
    terms = []
    log_binom = 0.0  # log C(n, z), updated incrementally
    for z in range(n + 1):
        q = nae_pair_prob(n, k, z)
        if q > 0.0:
            terms.append(log_binom + m * math.log(q))
        elif m == 0:
            terms.append(log_binom)
        log_binom += math.log(n - z) - math.log(z + 1) if z < n else 0.0
    return n * math.log(2.0) + _logsumexp(terms)


def nae_second_moment(n: int, m: int, k: int) -> float:
    return math.exp(log_nae_second_moment(n, m, k))


def paley_zygmund_bound(n: int, m: int, k: int) -> float:
    """P(X > 0) >= E[X]^2 / E[X^2] for the NAE solution count, clamped to [0,1]."""
    log_ex = log_expected_count(ProblemKind.KNAE, n, m, k)
    log_ex2 = log_nae_second_moment(n, m, k)
    if log_ex2 == -math.inf:
        if log_ex > -math.inf:
            raise RuntimeError("E[X^2] = 0 with E[X] > 0 cannot happen")
        return 0.0
    return math.exp(min(0.0, 2.0 * log_ex - log_ex2))


@dataclass(frozen=True)
class MomentReport:
    kind: ProblemKind
    n: int
    m: int
    k: int
    log_expected_count: float
    expected_count: float
    first_moment_density_bound: float
    log_second_moment: float | None = None   # NAE only
    second_moment: float | None = None
    pz_bound: float | None = None

    @property
    def r(self) -> float:
        return self.m / self.n


def moment_report(kind: ProblemKind, n: int, m: int, k: int) -> MomentReport:
    log_ex = log_expected_count(kind, n, m, k)
    if kind is ProblemKind.KNAE:
        log_ex2 = log_nae_second_moment(n, m, k)
        return MomentReport(kind, n, m, k, log_ex, math.exp(log_ex),
                            first_moment_density_bound(kind, k),
                            log_ex2, math.exp(log_ex2),
                            paley_zygmund_bound(n, m, k))
    return MomentReport(kind, n, m, k, log_ex, math.exp(log_ex),
                        first_moment_density_bound(kind, k))
