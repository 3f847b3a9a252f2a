"""Wardrop equilibrium core for the two-server system.

The central objects are the balanced load (the server-1 rate equalizing
the two mean delays), the threshold map from an equilibrium rate to the
sensitivity value splitting the customer population, and the price gap
g_j that induces a given equilibrium rate. Everything downstream
(monopoly and duopoly optimization, estimation oracles) is built from
these.
"""

import functools
import math
from dataclasses import dataclass
from enum import Enum

from ._solve import DEFAULT_TOL, Tolerances, bisect_decreasing
from .errors import DomainError
from .models import P_MIN, SystemConfig, density, quantile, validate_config


class Regime(Enum):
    """Which server the high-sensitivity tail buys at equilibrium.

    Equal prices map to HIGH_BETA_TO_SERVER_1 under the single-threshold
    convention; BALANCED is the explicit tag for caller-constructed
    symmetric splits and behaves like HIGH_BETA_TO_SERVER_1 in
    :func:`kernel_choice`.
    """

    HIGH_BETA_TO_SERVER_1 = 1
    HIGH_BETA_TO_SERVER_2 = 2
    BALANCED = 0


@dataclass(frozen=True)
class PriceVector:
    c1: float
    c2: float

    def __post_init__(self):
        if not (math.isfinite(self.c1) and math.isfinite(self.c2)):
            raise DomainError(f"prices must be finite, got ({self.c1}, {self.c2})")

    @property
    def gap(self) -> float:
        return self.c1 - self.c2


@dataclass(frozen=True)
class EquilibriumSplit:
    """Equilibrium rates plus the threshold and regime describing the kernel.

    gamma2 is derived as lam - gamma1 so the rates always sum exactly.
    """

    gamma1: float
    lam: float
    beta1: float
    regime: Regime

    @property
    def gamma2(self) -> float:
        return self.lam - self.gamma1


@functools.lru_cache(maxsize=256)
def balanced_load(cfg: SystemConfig) -> float:
    """The rate gamma+ in (0, lam) with D1(gamma+) = D2(lam - gamma+).

    Bisection on the strictly increasing delay difference; the validated
    gap conditions guarantee the sign change, so this never fails. For
    identical servers the first midpoint lam/2 is exact.
    """
    validate_config(cfg)
    lo, hi = 0.0, cfg.lam
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        diff = cfg.delay1(mid) - cfg.delay2(cfg.lam - mid)
        if diff == 0.0 or (hi - lo) < 4e-16 * cfg.lam:
            return mid
        if diff < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def threshold_of_rate(cfg: SystemConfig, gamma1: float) -> float:
    """Threshold beta1 for a given equilibrium rate at server 1.

    Piecewise: F^{-1}((lam - gamma1)/lam) for gamma1 <= gamma+, else
    F^{-1}(gamma1/lam); the tie at gamma+ resolves to the first branch.
    The jump at gamma+ for non-identical servers is intentional and not
    smoothed.
    """
    if not 0.0 <= gamma1 <= cfg.lam:
        raise DomainError(f"gamma1 must lie in [0, {cfg.lam}], got {gamma1}")
    gp = balanced_load(cfg)
    p = (cfg.lam - gamma1) / cfg.lam if gamma1 <= gp else gamma1 / cfg.lam
    return quantile(cfg.dist, p)


def _delay_gap_1(cfg: SystemConfig, gamma1: float) -> float:
    return cfg.delay2(cfg.lam - gamma1) - cfg.delay1(gamma1)


def price_gap_1(cfg: SystemConfig, gamma1: float) -> float:
    """g1(gamma1): the price difference c1 - c2 inducing rate gamma1.

    Strictly decreasing, zero at the balanced load. At the domain
    endpoints an unbounded sensitivity law yields +/-inf.
    """
    if not 0.0 <= gamma1 <= cfg.lam:
        raise DomainError(f"gamma1 must lie in [0, {cfg.lam}], got {gamma1}")
    delta_d = _delay_gap_1(cfg, gamma1)
    if gamma1 == 0.0 or gamma1 == cfg.lam:
        return cfg.dist.support[1] * delta_d
    return threshold_of_rate(cfg, gamma1) * delta_d


def price_gap_2(cfg: SystemConfig, gamma2: float) -> float:
    """g2(gamma2): the mirror gap c2 - c1 inducing rate gamma2 at server 2.

    Zero at lam - gamma+; evaluated via its own formula rather than the
    identity g2(x) = -g1(lam - x), which the tests verify instead.
    """
    if not 0.0 <= gamma2 <= cfg.lam:
        raise DomainError(f"gamma2 must lie in [0, {cfg.lam}], got {gamma2}")
    delta_d = cfg.delay1(cfg.lam - gamma2) - cfg.delay2(gamma2)
    if gamma2 == 0.0 or gamma2 == cfg.lam:
        return cfg.dist.support[1] * delta_d
    gp = balanced_load(cfg)
    p = gamma2 / cfg.lam if gamma2 >= cfg.lam - gp else (cfg.lam - gamma2) / cfg.lam
    return quantile(cfg.dist, p) * delta_d


def price_gap_1_deriv(cfg: SystemConfig, gamma1: float) -> float:
    """Analytic derivative of g1 on (0, lam).

    Uses the branch containing gamma1 (ties at gamma+ take the left
    branch), so at the balanced load this is the one-sided derivative of
    the low-rate branch. The quantile derivative is 1/(lam f(beta)).
    """
    if not 0.0 < gamma1 < cfg.lam:
        raise DomainError(f"gamma1 must lie in (0, {cfg.lam}), got {gamma1}")
    gp = balanced_load(cfg)
    beta = threshold_of_rate(cfg, gamma1)
    f_beta = density(cfg.dist, beta)
    beta_prime = (-1.0 if gamma1 <= gp else 1.0) / (cfg.lam * f_beta)
    delta_d = _delay_gap_1(cfg, gamma1)
    delta_d_prime = -cfg.delay2_deriv(cfg.lam - gamma1) - cfg.delay1_deriv(gamma1)
    return beta_prime * delta_d + beta * delta_d_prime


def price_gap_2_deriv(cfg: SystemConfig, gamma2: float) -> float:
    """Analytic derivative of g2 on (0, lam); branch ties mirror g2's."""
    if not 0.0 < gamma2 < cfg.lam:
        raise DomainError(f"gamma2 must lie in (0, {cfg.lam}), got {gamma2}")
    gp = balanced_load(cfg)
    if gamma2 >= cfg.lam - gp:
        p, sign = gamma2 / cfg.lam, 1.0
    else:
        p, sign = (cfg.lam - gamma2) / cfg.lam, -1.0
    beta = quantile(cfg.dist, p)
    beta_prime = sign / (cfg.lam * density(cfg.dist, beta))
    delta_d = cfg.delay1(cfg.lam - gamma2) - cfg.delay2(gamma2)
    delta_d_prime = -cfg.delay1_deriv(cfg.lam - gamma2) - cfg.delay2_deriv(gamma2)
    return beta_prime * delta_d + beta * delta_d_prime


def _root_bracket(cfg: SystemConfig) -> tuple:
    """Bracket for root searches on g1/g2; endpoints shrink inward for
    unbounded laws, where the gaps diverge."""
    if cfg.dist.bounded and not cfg.saturation_ok:
        return 0.0, cfg.lam
    return cfg.lam * P_MIN, cfg.lam * (1.0 - P_MIN)


def rate_cap_1(cfg: SystemConfig, c2: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest equilibrium rate server 1 can attract given c2 >= 0.

    Returns lam when c2 >= -g1(lam) (only possible for a bounded law),
    otherwise the unique root of g1(gamma) = -c2, which is >= gamma+.
    """
    if c2 < 0.0:
        raise DomainError(f"c2 must be nonnegative, got {c2}")
    validate_config(cfg)
    if c2 >= -price_gap_1(cfg, cfg.lam):
        return cfg.lam
    lo, hi = _root_bracket(cfg)
    if -c2 <= price_gap_1(cfg, hi):
        return hi
    return bisect_decreasing(lambda g: price_gap_1(cfg, g), lo, hi, -c2, tol)


def rate_cap_2(cfg: SystemConfig, c1: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Mirror of rate_cap_1 for server 2 given c1 >= 0."""
    if c1 < 0.0:
        raise DomainError(f"c1 must be nonnegative, got {c1}")
    validate_config(cfg)
    if c1 >= -price_gap_2(cfg, cfg.lam):
        return cfg.lam
    lo, hi = _root_bracket(cfg)
    if -c1 <= price_gap_2(cfg, hi):
        return hi
    return bisect_decreasing(lambda g: price_gap_2(cfg, g), lo, hi, -c1, tol)


def price_of_rate_1(cfg: SystemConfig, c2: float, gamma1: float) -> float:
    """Admission price c1 = c2 + g1(gamma1) inducing rate gamma1.

    Defined on [0, rate_cap_1(cfg, c2)] with the boundary conventions
    c1(0) = c2 + g1(0) and c1(lam) = c2 + g1(lam) for bounded laws; for
    unbounded laws the endpoints are a DomainError (the price diverges).
    """
    if gamma1 in (0.0, cfg.lam) and not cfg.dist.bounded:
        raise DomainError(
            f"price diverges at gamma1={gamma1} for an unbounded sensitivity law")
    cap = rate_cap_1(cfg, c2)
    if not 0.0 <= gamma1 <= cap * (1.0 + 1e-12):
        raise DomainError(
            f"gamma1={gamma1} exceeds the rate cap {cap} (price would be negative)")
    return c2 + price_gap_1(cfg, gamma1)


def price_of_rate_2(cfg: SystemConfig, c1: float, gamma2: float) -> float:
    """Mirror of price_of_rate_1: c2 = c1 + g2(gamma2)."""
    if gamma2 in (0.0, cfg.lam) and not cfg.dist.bounded:
        raise DomainError(
            f"price diverges at gamma2={gamma2} for an unbounded sensitivity law")
    cap = rate_cap_2(cfg, c1)
    if not 0.0 <= gamma2 <= cap * (1.0 + 1e-12):
        raise DomainError(
            f"gamma2={gamma2} exceeds the rate cap {cap} (price would be negative)")
    return c1 + price_gap_2(cfg, gamma2)


def choke_price_1(cfg: SystemConfig, c2: float) -> float:
    """Smallest c1 with zero equilibrium rate at server 1.

    Only bounded sensitivity laws have one; unbounded laws never choke
    server 1 at any finite price, which is a DomainError here.
    """
    if not cfg.dist.bounded:
        raise DomainError("no finite choke price for an unbounded sensitivity law")
    validate_config(cfg)
    return c2 + price_gap_1(cfg, 0.0)


def solve_equilibrium(cfg: SystemConfig, prices: PriceVector,
                      tol: Tolerances = DEFAULT_TOL) -> EquilibriumSplit:
    """Unique equilibrium split for a finite price pair.

    With gap = c1 - c2: rates hit the boundary when the gap escapes
    [g1(lam), g1(0)] (bounded laws only); equal prices return the
    balanced load under the single-threshold convention; otherwise the
    unique interior root of g1(gamma) = gap, located by bisection with
    residual below tol.residual * max(1, |gap|).
    """
    validate_config(cfg)
    gap = prices.gap
    regime = (Regime.HIGH_BETA_TO_SERVER_1 if gap >= 0.0
              else Regime.HIGH_BETA_TO_SERVER_2)
    if gap == 0.0:
        gamma1 = balanced_load(cfg)
        return EquilibriumSplit(gamma1, cfg.lam, threshold_of_rate(cfg, gamma1), regime)
    if cfg.dist.bounded:
        if gap >= price_gap_1(cfg, 0.0):
            return EquilibriumSplit(0.0, cfg.lam, cfg.dist.support[1], regime)
        if gap <= price_gap_1(cfg, cfg.lam):
            return EquilibriumSplit(cfg.lam, cfg.lam, cfg.dist.support[1], regime)
    lo, hi = _root_bracket(cfg)
    # a gap beyond the value at the clamped endpoints means the true rate
    # sits in the sub-P_MIN probability tail; clamp to the endpoint
    if gap >= price_gap_1(cfg, lo):
        gamma1 = lo
    elif gap <= price_gap_1(cfg, hi):
        gamma1 = hi
    else:
        gamma1 = bisect_decreasing(lambda g: price_gap_1(cfg, g), lo, hi, gap, tol)
    return EquilibriumSplit(gamma1, cfg.lam, threshold_of_rate(cfg, gamma1), regime)


def kernel_choice(cfg: SystemConfig, split: EquilibriumSplit, beta: float) -> int:
    """Server (1 or 2) chosen by a customer with sensitivity beta.

    High-sensitivity customers (beta above the threshold) buy the
    lower-delay, higher-price server; ties at the threshold join the bulk
    side, matching the closed/open threshold intervals.
    """
    a, b = cfg.dist.support
    if not a <= beta <= b:
        raise DomainError(f"beta={beta} lies outside the support [{a}, {b}]")
    if split.regime is Regime.HIGH_BETA_TO_SERVER_2:
        return 2 if beta > split.beta1 else 1
    return 1 if beta > split.beta1 else 2


def revenue_rates(split: EquilibriumSplit, prices: PriceVector) -> tuple:
    """Per-server and total revenue rates (R1, R2, RT) at a split."""
    r1 = prices.c1 * split.gamma1
    r2 = prices.c2 * split.gamma2
    return r1, r2, r1 + r2
