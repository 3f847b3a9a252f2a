"""Scalar root finding and one-dimensional maximization helpers."""

import math
from dataclasses import dataclass

from .errors import NoRootError

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Tolerances:
    """Solver tolerances; defaults leave ~4 digits of headroom over the
    2-3 decimals the reproduced tables report."""

    residual: float = 1e-10
    argument: float = 1e-12
    max_iter: int = 200


DEFAULT_TOL = Tolerances()


def bisect_decreasing(f, lo: float, hi: float, target: float = 0.0,
                      tol: Tolerances = DEFAULT_TOL) -> float:
    """Root of f(x) = target for f strictly decreasing on [lo, hi].

    Endpoint values may be +/-inf. Raises NoRootError when the bracket
    does not straddle the target.
    """
    f_lo = f(lo) - target
    if f_lo == 0.0:
        return lo
    f_hi = f(hi) - target
    if f_hi == 0.0:
        return hi
    if f_lo < 0.0 or f_hi > 0.0:
        raise NoRootError(
            f"no sign change in [{lo}, {hi}] for target {target}")
    scale = max(1.0, abs(target))
    for _ in range(tol.max_iter):
        mid = 0.5 * (lo + hi)
        val = f(mid) - target
        if abs(val) < tol.residual * scale or (hi - lo) < tol.argument:
            return mid
        if val > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_max(f, lo: float, hi: float, tol_arg: float = 1e-9):
    """Golden-section maximization of f on [lo, hi].

    Returns (x, f(x)). Assumes a single interior maximum on the bracket;
    callers provide brackets from a prior grid scan.
    """
    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol_arg:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def grid_argmax(f, lo: float, hi: float, n: int):
    """Scan f on an n-point uniform grid of [lo, hi].

    Returns (xs, fs, i_best) with the lowest-index tie-break so results
    are deterministic.
    """
    if n < 2:
        raise ValueError("grid_argmax needs n >= 2")
    step = (hi - lo) / (n - 1)
    xs = [lo + i * step for i in range(n)]
    xs[-1] = hi
    fs = [f(x) for x in xs]
    i_best = 0
    best = fs[0]
    for i in range(1, n):
        if fs[i] > best:
            best = fs[i]
            i_best = i
    return xs, fs, i_best


def maximize_scan(f, lo: float, hi: float, n: int, tol_arg: float = 1e-9):
    """Grid scan plus golden refinement around the best grid point.

    Returns (x_star, f_star). No unimodality is assumed for the scan; the
    refinement only trusts the local bracket around the winning point.
    """
    xs, fs, i = grid_argmax(f, lo, hi, n)
    bracket_lo = xs[i - 1] if i > 0 else xs[0]
    bracket_hi = xs[i + 1] if i < len(xs) - 1 else xs[-1]
    x_ref, f_ref = golden_max(f, bracket_lo, bracket_hi, tol_arg)
    if f_ref >= fs[i]:
        return x_ref, f_ref
    return xs[i], fs[i]


def local_maxima_scan(f, lo: float, hi: float, n: int, tol_arg: float = 1e-9):
    """All interior local maxima of f on [lo, hi], each refined by golden
    section on its grid bracket.

    Returns a list of (x, f(x)) sorted by x; grid endpoints count as local
    maxima when the function falls away from them.
    """
    xs, fs, _ = grid_argmax(f, lo, hi, n)
    out = []
    for i in range(len(xs)):
        left_ok = i == 0 or fs[i] > fs[i - 1]
        right_ok = i == len(xs) - 1 or fs[i] >= fs[i + 1]
        if not (left_ok and right_ok):
            continue
        b_lo = xs[i - 1] if i > 0 else xs[0]
        b_hi = xs[i + 1] if i < len(xs) - 1 else xs[-1]
        x_ref, f_ref = golden_max(f, b_lo, b_hi, tol_arg)
        if f_ref < fs[i]:
            x_ref, f_ref = xs[i], fs[i]
        if out and abs(x_ref - out[-1][0]) < 10.0 * tol_arg:
            if f_ref > out[-1][1]:
                out[-1] = (x_ref, f_ref)
            continue
        out.append((x_ref, f_ref))
    return out
