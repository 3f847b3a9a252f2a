"""Monopoly revenue optimization with the competitor price fixed.

Works in rate space: total revenue is c2*lam + g1(gamma1)*gamma1, so the
solver maximizes h(gamma) = g1(gamma)*gamma over [0, gamma+], which is
where any revenue-improving rate must lie.
"""

from dataclasses import dataclass

from ._solve import golden_max, grid_argmax
from .errors import DomainError
from .models import P_MIN, SystemConfig, validate_config
from .wardrop import balanced_load, price_gap_1

DEFAULT_GRID = 4096


@dataclass(frozen=True)
class MonopolyResult:
    gamma1_star: float
    c1_star: float
    rt_star: float
    curve: tuple = None  # optional ((gamma1, RT), ...) samples


def _gap_revenue(cfg: SystemConfig, gamma: float) -> float:
    return price_gap_1(cfg, gamma) * gamma


def optimize_monopoly(cfg: SystemConfig, c2: float,
                      grid_size: int = DEFAULT_GRID,
                      with_curve: bool = False) -> MonopolyResult:
    """Revenue-maximizing rate and price for server 1 given fixed c2 >= 0.

    Dense grid scan over [lam * P_MIN, gamma+] followed by golden-section
    refinement of the winning grid cell, to 1e-9 in the argument. The scan
    assumes nothing about unimodality; ties break to the lowest grid
    index, so results are deterministic.
    """
    validate_config(cfg)
    if c2 < 0.0:
        raise DomainError(f"c2 must be nonnegative, got {c2}")
    if grid_size < 64:
        raise DomainError(f"grid_size must be at least 64, got {grid_size}")

    gp = balanced_load(cfg)
    lo = cfg.lam * P_MIN
    h = lambda g: _gap_revenue(cfg, g)
    xs, hs, i = grid_argmax(h, lo, gp, grid_size)
    b_lo = xs[i - 1] if i > 0 else xs[0]
    b_hi = xs[i + 1] if i < len(xs) - 1 else xs[-1]
    g_star, h_star = golden_max(h, b_lo, b_hi, tol_arg=1e-9)
    if hs[i] > h_star:
        g_star, h_star = xs[i], hs[i]

    curve = tuple(zip(xs, (c2 * cfg.lam + v for v in hs))) if with_curve else None
    return MonopolyResult(
        gamma1_star=g_star,
        c1_star=c2 + price_gap_1(cfg, g_star),
        rt_star=c2 * cfg.lam + h_star,
        curve=curve,
    )


def revenue_curve(cfg: SystemConfig, c2: float, n: int) -> tuple:
    """n uniformly spaced (gamma1, RT) samples on [lam * P_MIN, gamma+].

    Plot-ready data for the revenue-vs-rate figure; RT(gamma+) = c2*lam
    since the price gap vanishes at the balanced load.
    """
    validate_config(cfg)
    if n < 2:
        raise DomainError(f"need at least 2 samples, got {n}")
    gp = balanced_load(cfg)
    lo = cfg.lam * P_MIN
    step = (gp - lo) / (n - 1)
    out = []
    for i in range(n):
        g = gp if i == n - 1 else lo + i * step
        out.append((g, c2 * cfg.lam + _gap_revenue(cfg, g)))
    return tuple(out)
