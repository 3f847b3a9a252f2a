"""Best-response computation and symmetric Nash analysis for the duopoly.

Each server's best response is computed in rate space: given the rival's
price c, server j maximizes (g_j(gamma) + c) * gamma over the feasible
rates. The symmetric-equilibrium candidate price for identical servers is
alpha = -gamma+ * g'(gamma+); it is necessary but not sufficient, and
check_symmetric_nash tests it by running the best response at that price.
"""

import math
from dataclasses import dataclass
from enum import Enum

from ._solve import local_maxima_scan
from .errors import DomainError, PreconditionError
from .models import P_MIN, SystemConfig, validate_config
from .wardrop import (PriceVector, balanced_load, price_gap_1, price_gap_1_deriv,
                      price_gap_2, price_gap_2_deriv, rate_cap_1, rate_cap_2)

DEFAULT_GRID = 4096
#: Relative revenue slack under which two local maxima count as tied;
#: ties resolve to the smaller rate.
TIE_REL = 1e-9


@dataclass(frozen=True)
class BestResponse:
    server: int
    given_price: float
    gamma_star: float
    price_star: float
    revenue_star: float
    stationary_points: tuple  # rates of all refined local maxima, ascending


@dataclass(frozen=True)
class NashOutcome:
    prices: PriceVector
    converged: bool
    iterations: int
    residual: float
    symmetric_alpha: float = None


class NashVerdict(Enum):
    CONFIRMED = "confirmed"
    NECESSARY_ONLY_FAILED = "necessary-only-failed"


def best_response(cfg: SystemConfig, server: int, other_price: float,
                  grid_size: int = DEFAULT_GRID) -> BestResponse:
    """Revenue-maximizing rate and price for one server, rival price fixed.

    Scans (g_j(gamma) + other_price) * gamma on a dense grid of
    (0, rate_cap_j), refines every local maximum by golden section, and
    takes the best; equal-revenue ties go to the smaller rate. All
    stationary candidates are reported so multimodal cases are auditable.
    """
    validate_config(cfg)
    if server not in (1, 2):
        raise DomainError(f"server must be 1 or 2, got {server}")
    if other_price < 0.0:
        raise DomainError(f"other_price must be nonnegative, got {other_price}")

    if server == 1:
        cap = rate_cap_1(cfg, other_price)
        gap = lambda g: price_gap_1(cfg, g)
    else:
        cap = rate_cap_2(cfg, other_price)
        gap = lambda g: price_gap_2(cfg, g)
    revenue = lambda g: (gap(g) + other_price) * g

    lo = cfg.lam * P_MIN
    hi = cap * (1.0 - P_MIN)
    candidates = local_maxima_scan(revenue, lo, hi, grid_size, tol_arg=1e-9)
    g_star, r_star = candidates[0]
    for g, r in candidates[1:]:
        if r > r_star * (1.0 + TIE_REL) + TIE_REL:
            g_star, r_star = g, r
    return BestResponse(
        server=server,
        given_price=other_price,
        gamma_star=g_star,
        price_star=gap(g_star) + other_price,
        revenue_star=r_star,
        stationary_points=tuple(g for g, _ in candidates),
    )


def symmetric_alpha(cfg: SystemConfig) -> tuple:
    """(alpha1, alpha2) with alpha_j = -gamma+ * dg_j/dgamma at gamma+.

    Uses the analytic one-sided derivative (low-rate branch at the
    balanced load, where the delay-gap factor vanishes for g1). Intended
    for identical servers, where alpha1 == alpha2; computed for any
    validated config.
    """
    validate_config(cfg)
    gp = balanced_load(cfg)
    alpha1 = -gp * price_gap_1_deriv(cfg, gp)
    alpha2 = -gp * price_gap_2_deriv(cfg, gp)
    return alpha1, alpha2


def check_symmetric_nash(cfg: SystemConfig, tol: float = 1e-6) -> NashVerdict:
    """Test whether the symmetric candidate price is a fixed point.

    Sets both prices to alpha1 and runs server 1's best response:
    CONFIRMED when the responding rate is the balanced load (within
    tol * lam) and the responding price returns alpha1 (within tol);
    NECESSARY_ONLY_FAILED otherwise. Identical servers required.
    """
    validate_config(cfg)
    if not cfg.identical_servers():
        raise PreconditionError(
            "symmetric Nash check requires identical servers")
    alpha1, _ = symmetric_alpha(cfg)
    if alpha1 < 0.0:
        return NashVerdict.NECESSARY_ONLY_FAILED
    br = best_response(cfg, 1, alpha1)
    gp = balanced_load(cfg)
    if abs(br.gamma_star - gp) < tol * cfg.lam and abs(br.price_star - alpha1) < tol:
        return NashVerdict.CONFIRMED
    return NashVerdict.NECESSARY_ONLY_FAILED


def nash_iterate(cfg: SystemConfig, init: PriceVector, tol: float = 1e-6,
                 max_iter: int = 100, damping: float = 1.0) -> NashOutcome:
    """Alternating (Gauss-Seidel) best-response iteration from init.

    Each round replaces c1 with server 1's best response to c2, then c2
    with server 2's best response to the new c1, optionally damped.
    Converged when both pre-update residuals drop below tol;
    non-convergence is a reported outcome, not an error.
    """
    validate_config(cfg)
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    if not 0.0 < damping <= 1.0:
        raise DomainError(f"damping must lie in (0, 1], got {damping}")
    c1, c2 = init.c1, init.c2
    alpha = symmetric_alpha(cfg)[0] if cfg.identical_servers() else None

    residual = math.inf
    for it in range(1, max_iter + 1):
        b1 = best_response(cfg, 1, c2).price_star
        r1 = abs(b1 - c1)
        c1 += damping * (b1 - c1)
        b2 = best_response(cfg, 2, c1).price_star
        r2 = abs(b2 - c2)
        c2 += damping * (b2 - c2)
        residual = max(r1, r2)
        if residual < tol:
            return NashOutcome(PriceVector(c1, c2), True, it, residual, alpha)
    return NashOutcome(PriceVector(c1, c2), False, max_iter, residual, alpha)
