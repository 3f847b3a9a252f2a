"""Inference of the delay-sensitivity law from price sweeps.

All estimators consume an oracle: any object mapping a price pair to one
Measurement of the resulting equilibrium (rates and mean delays). Three
backends are provided -- analytic, noisy, and discrete-event simulation --
plus a discrete-class analytic oracle used to drive class discovery.
Estimation never touches the underlying distribution object; only prices,
rates, and delays enter the formulas.
"""

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from . import models
from ._special import gamma_p, gamma_p_inverse
from .errors import (DegenerateError, DomainError, InsufficientDataError,
                     NoRootError, PreconditionError, StabilityError)
from .models import DelayFamily, DelayModel, SystemConfig, validate_config
from .wardrop import PriceVector, Regime, solve_equilibrium

_D_TOL = 1e-12


@dataclass(frozen=True)
class Measurement:
    """One oracle observation at a fixed price pair."""

    c1: float
    c2: float
    gamma1: float
    gamma2: float
    d1: float
    d2: float

    @property
    def lam(self) -> float:
        return self.gamma1 + self.gamma2


class Oracle(Protocol):
    def measure(self, c1: float, c2: float) -> Measurement: ...


@dataclass(frozen=True)
class DensityEstimate:
    """Piecewise-constant density estimate over inferred threshold bins.

    bins are (beta_lo, beta_hi, z) triples, disjoint and increasing;
    covered_mass is the total probability the bins account for; gaps
    records (c1_lo, c1_hi) price pairs that produced no information.
    """

    bins: tuple
    covered_mass: float
    gaps: tuple = ()


@dataclass(frozen=True)
class DiscreteClasses:
    """Discovered point masses of a discrete sensitivity law.

    classes are (beta_i, rate_i) in discovery order (beta decreasing).
    complete is True only when the full arrival mass was observed to
    migrate; otherwise residual_rate reports the mass never confirmed at
    a plateau (the final class's rate is then attributed from the known
    total rather than measured, and plateau-confirmed rates plus
    residual_rate sum to the total).
    """

    classes: tuple
    complete: bool
    residual_rate: float


@dataclass(frozen=True)
class ExponentialFit:
    tau: float

    @property
    def rate(self) -> float:
        return 1.0 / self.tau


@dataclass(frozen=True)
class ParametricFit:
    family: str
    params: tuple
    residual_norm: float
    converged: bool


# --- oracle backends --------------------------------------------------------


class ExactOracle:
    """Analytic oracle: solves the equilibrium and reports exact delays."""

    def __init__(self, cfg: SystemConfig):
        self.cfg = validate_config(cfg)

    def measure(self, c1: float, c2: float) -> Measurement:
        split = solve_equilibrium(self.cfg, PriceVector(c1, c2))
        return Measurement(
            c1=c1, c2=c2,
            gamma1=split.gamma1, gamma2=split.gamma2,
            d1=self.cfg.delay1(split.gamma1),
            d2=self.cfg.delay2(split.gamma2),
        )


def exact_oracle(cfg: SystemConfig) -> ExactOracle:
    return ExactOracle(cfg)


class NoisyOracle:
    """Multiplies rate and delay readings by lognormal(1, sigma_rel) factors.

    gamma2 is re-normalized to lam - gamma1 so the rates still sum to the
    total. Reproducible: rebuilding with the same seed replays the same
    factor sequence.
    """

    def __init__(self, inner, sigma_rel: float, seed: int):
        if sigma_rel < 0.0:
            raise DomainError(f"sigma_rel must be nonnegative, got {sigma_rel}")
        self.inner = inner
        self.sigma_rel = sigma_rel
        self.seed = seed
        self._rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))

    def _factor(self) -> float:
        if self.sigma_rel == 0.0:
            return 1.0
        s = self.sigma_rel
        return math.exp(s * self._rng.standard_normal() - 0.5 * s * s)

    def measure(self, c1: float, c2: float) -> Measurement:
        m = self.inner.measure(c1, c2)
        lam = m.gamma1 + m.gamma2
        g1 = m.gamma1 * self._factor()
        return Measurement(
            c1=c1, c2=c2,
            gamma1=g1, gamma2=lam - g1,
            d1=m.d1 * self._factor(),
            d2=m.d2 * self._factor(),
        )


def noisy_oracle(inner, sigma_rel: float, seed: int) -> NoisyOracle:
    return NoisyOracle(inner, sigma_rel, seed)


def _fcfs_departures(arrivals: np.ndarray, services: np.ndarray) -> np.ndarray:
    # d_i = max_{j<=i}(a_j + sum_{k=j..i} s_k), vectorized via running max
    cs = np.cumsum(services)
    return cs + np.maximum.accumulate(arrivals - (cs - services))


def _sample_sensitivities(dist, u: np.ndarray) -> np.ndarray:
    if isinstance(dist, models.Uniform):
        return dist.a + u * (dist.b - dist.a)
    if isinstance(dist, models.Exponential):
        return -dist.tau * np.log1p(-u)
    if isinstance(dist, models.Power):
        return dist.b * u ** (1.0 / dist.n)
    return np.array([models.quantile(dist, float(p)) for p in u])


class DesOracle:
    """Event-driven simulation of two FCFS exponential single-server queues.

    Arrivals are Poisson with the configured total rate; each arrival
    draws a sensitivity from the configured law and routes through the
    analytic threshold kernel for the queried prices. Rates and mean
    sojourn times are measured over [warmup, horizon], warmup = 10% of
    the horizon. Deterministic per seed (counter-based generator, one
    stream per measure call); a single instance is not safe for
    concurrent measure calls.
    """

    def __init__(self, cfg: SystemConfig, horizon: float, seed: int):
        validate_config(cfg)
        if cfg.d1.family is not DelayFamily.MM1 or cfg.d2.family is not DelayFamily.MM1:
            raise PreconditionError(
                "simulation requires mm1 delay models on both servers")
        if horizon <= 0.0:
            raise DomainError(f"horizon must be positive, got {horizon}")
        self.cfg = cfg
        self.horizon = float(horizon)
        self.seed = seed
        self._calls = 0

    def measure(self, c1: float, c2: float) -> Measurement:
        cfg = self.cfg
        split = solve_equilibrium(cfg, PriceVector(c1, c2))
        # utilization within 1e-9 of one never mixes over a finite horizon
        if (split.gamma1 >= cfg.d1.mu * (1.0 - 1e-9)
                or split.gamma2 >= cfg.d2.mu * (1.0 - 1e-9)):
            raise StabilityError(
                f"unstable at prices ({c1}, {c2}): split "
                f"({split.gamma1:.6g}, {split.gamma2:.6g}) vs service rates "
                f"({cfg.d1.mu}, {cfg.d2.mu})")

        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence(entropy=self.seed, spawn_key=(self._calls,))))
        self._calls += 1

        horizon = self.horizon
        warmup = 0.1 * horizon
        n_draw = max(16, int(cfg.lam * horizon + 6.0 * math.sqrt(cfg.lam * horizon) + 16))
        arrivals = np.cumsum(-np.log1p(-rng.random(n_draw)) / cfg.lam)
        while arrivals.size and arrivals[-1] < horizon:
            extra = np.cumsum(-np.log1p(-rng.random(n_draw)) / cfg.lam) + arrivals[-1]
            arrivals = np.concatenate([arrivals, extra])
        arrivals = arrivals[arrivals <= horizon]
        if arrivals.size == 0:
            raise InsufficientDataError("no arrivals within the horizon")

        betas = _sample_sensitivities(cfg.dist, rng.random(arrivals.size))
        high = betas > split.beta1
        to_one = ~high if split.regime is Regime.HIGH_BETA_TO_SERVER_2 else high

        window = horizon - warmup
        g_emp, d_emp = [], []
        for server, mask in ((1, to_one), (2, ~to_one)):
            arr = arrivals[mask]
            if arr.size == 0:
                raise InsufficientDataError(
                    f"server {server} received no arrivals within the horizon")
            mu = cfg.d1.mu if server == 1 else cfg.d2.mu
            services = -np.log1p(-rng.random(arr.size)) / mu
            sojourn = _fcfs_departures(arr, services) - arr
            in_window = arr >= warmup
            if not np.any(in_window):
                raise InsufficientDataError(
                    f"server {server} received no arrivals after warmup")
            g_emp.append(float(np.count_nonzero(in_window)) / window)
            d_emp.append(float(np.mean(sojourn[in_window])))

        return Measurement(c1=c1, c2=c2, gamma1=g_emp[0], gamma2=g_emp[1],
                           d1=d_emp[0], d2=d_emp[1])


def des_oracle(cfg: SystemConfig, horizon: float, seed: int) -> DesOracle:
    return DesOracle(cfg, horizon, seed)


class DiscreteClassOracle:
    """Analytic equilibrium oracle for a finite set of customer classes.

    classes are (beta, rate) point masses. At prices (c1, c2) a class
    prefers server 1 iff beta * (d2 - d1) exceeds c1 - c2; the equilibrium
    rate is the unique fixed point of that preference map, located by
    bisection on the excess-demand function (one class may split).
    """

    def __init__(self, classes, d1: DelayModel, d2: DelayModel):
        cl = sorted(((float(b), float(r)) for b, r in classes), reverse=True)
        if not cl:
            raise DomainError("at least one customer class is required")
        if any(b <= 0.0 or r <= 0.0 for b, r in cl):
            raise DomainError("class sensitivities and rates must be positive")
        if len({b for b, _ in cl}) != len(cl):
            raise DomainError("class sensitivities must be distinct")
        self.classes = tuple(cl)
        self.lam = sum(r for _, r in cl)
        self.d1 = d1
        self.d2 = d2
        for name, model in (("server 1", d1), ("server 2", d2)):
            if model.family is DelayFamily.MM1 and model.mu <= self.lam:
                raise DomainError(f"{name}: mm1 needs mu > total rate "
                                  f"(mu={model.mu}, total={self.lam})")

    def _delay_gap(self, gamma1: float) -> float:
        return (models.delay_eval(self.d2, self.lam - gamma1)
                - models.delay_eval(self.d1, gamma1))

    def measure(self, c1: float, c2: float) -> Measurement:
        delta = c1 - c2
        demand = lambda g: sum(r for b, r in self.classes
                               if b * self._delay_gap(g) > delta)
        lo, hi = 0.0, self.lam
        if demand(0.0) <= 0.0:
            gamma1 = 0.0
        elif demand(self.lam) >= self.lam:
            gamma1 = self.lam
        else:
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if demand(mid) - mid > 0.0:
                    lo = mid
                else:
                    hi = mid
            gamma1 = 0.5 * (lo + hi)
        return Measurement(
            c1=c1, c2=c2, gamma1=gamma1, gamma2=self.lam - gamma1,
            d1=models.delay_eval(self.d1, gamma1),
            d2=models.delay_eval(self.d2, self.lam - gamma1),
        )


def discrete_class_oracle(classes, d1: DelayModel, d2: DelayModel) -> DiscreteClassOracle:
    return DiscreteClassOracle(classes, d1, d2)


# --- estimators -------------------------------------------------------------


def infer_threshold(m: Measurement) -> float:
    """Threshold from one measurement: (c1 - c2) / (d2 - d1).

    Equal prices or balanced delays carry no threshold information and
    raise DegenerateError.
    """
    if m.c1 == m.c2 or abs(m.d2 - m.d1) < _D_TOL:
        raise DegenerateError(
            "equal prices / balanced delays carry no threshold information")
    return (m.c1 - m.c2) / (m.d2 - m.d1)


def _interior(m: Measurement) -> bool:
    lam = m.lam
    return 0.0 < m.gamma1 < lam


def estimate_exponential(oracle, c1: float, c2: float, delta: float) -> ExponentialFit:
    """Fit an exponential sensitivity law from two measurements.

    Measures at (c1, c2) and (c1 + delta, c2), infers both thresholds, and
    solves exp(-b/tau) - exp(-b_d/tau) = (g - g_d)/lam for tau by
    bisection on [1e-6, 1e6]. The interval equation alone admits up to two
    roots (the residual peaks at tau = (b_d - b)/ln(b_d/b)); the root
    consistent with the observed rate level exp(-b/tau) ~ gamma1/lam is
    returned.
    """
    if not c1 > c2:
        raise DomainError(f"need c1 > c2, got ({c1}, {c2})")
    if delta <= 0.0:
        raise DomainError(f"price step must be positive, got {delta}")
    m0 = oracle.measure(c1, c2)
    m1 = oracle.measure(c1 + delta, c2)
    if not (_interior(m0) and _interior(m1)):
        raise DegenerateError("both measurements must yield an interior split")
    b0, b1 = infer_threshold(m0), infer_threshold(m1)
    if b1 <= b0 or m1.gamma1 >= m0.gamma1:
        raise DegenerateError("price step moved no probability mass")
    lam = m0.lam
    mass = (m0.gamma1 - m1.gamma1) / lam

    def resid(tau):
        return math.exp(-b0 / tau) - math.exp(-b1 / tau) - mass

    tau_lo, tau_hi = 1e-6, 1e6
    tau_peak = (b1 - b0) / math.log(b1 / b0)
    roots = []
    for a, b, increasing in ((tau_lo, tau_peak, True), (tau_peak, tau_hi, False)):
        fa, fb = resid(a), resid(b)
        if fa == 0.0:
            roots.append(a)
            continue
        if fb == 0.0:
            roots.append(b)
            continue
        if fa * fb > 0.0:
            continue
        lo_, hi_ = a, b
        for _ in range(200):
            mid = 0.5 * (lo_ + hi_)
            fm = resid(mid)
            if abs(fm) < 1e-15 or (hi_ - lo_) < 1e-12 * max(1.0, mid):
                break
            rising = fm < 0.0 if increasing else fm > 0.0
            if rising:
                lo_ = mid
            else:
                hi_ = mid
        roots.append(0.5 * (lo_ + hi_))
    if not roots:
        raise NoRootError("interval-mass equation has no root in [1e-6, 1e6]")

    level = m0.gamma1 / lam
    tau = min(roots, key=lambda t: abs(math.exp(-b0 / t) - level))
    return ExponentialFit(tau=tau)


_FAMILY_PARAMS = {
    "uniform": ("a", "b"),
    "exponential": ("tau",),
    "gamma": ("k", "theta"),
    "power": ("n", "b"),
}


def _family_cdf(family: str, params, x: float) -> float:
    if family == "uniform":
        a, b = params
        if x <= a:
            return 0.0
        return min(1.0, (x - a) / (b - a))
    if family == "exponential":
        return -math.expm1(-x / params[0])
    if family == "gamma":
        k, theta = params
        return gamma_p(k, x / theta)
    if family == "power":
        n, b = params
        return min(1.0, (x / b) ** n)
    raise DomainError(f"unknown family {family!r}")


def _feasible(family: str, params, beta_max: float) -> bool:
    if any(not math.isfinite(p) for p in params):
        return False
    if family == "uniform":
        a, b = params
        return 0.0 <= a < b and b > beta_max
    if family == "power":
        n, b = params
        return n > 0.0 and b > beta_max
    return all(p > 0.0 for p in params)


def _initial_guesses(family: str, betas, levels, lam, gammas):
    """Documented starting points from the level identity F(beta_i) = p_i."""
    n = len(betas)
    if family == "exponential":
        taus = [betas[i] / math.log(lam / gammas[i]) for i in range(n)]
        return [(sum(taus) / n,)]
    if family == "uniform":
        # least-squares line beta = a + (b - a) * p
        p_mean = sum(levels) / n
        b_mean = sum(betas) / n
        var = sum((p - p_mean) ** 2 for p in levels)
        if var < 1e-20:
            span = max(betas) - min(betas) + 1.0
            return [(max(0.0, min(betas) - span), max(betas) + span)]
        slope = sum((levels[i] - p_mean) * (betas[i] - b_mean) for i in range(n)) / var
        a0 = b_mean - slope * p_mean
        return [(max(0.0, a0), max(a0 + slope, max(betas) * (1.0 + 1e-6)))]
    if family == "power":
        lx = [math.log(b) for b in betas]
        ly = [math.log(p) for p in levels]
        x_mean, y_mean = sum(lx) / n, sum(ly) / n
        var = sum((x - x_mean) ** 2 for x in lx)
        slope = (sum((lx[i] - x_mean) * (ly[i] - y_mean) for i in range(n)) / var
                 if var > 1e-20 else 1.0)
        n0 = max(slope, 1e-3)
        b0 = math.exp(x_mean - y_mean / n0)
        return [(n0, max(b0, max(betas) * (1.0 + 1e-6)))]
    if family == "gamma":
        # one start per shape, scale chosen to match the first level exactly
        guesses = []
        for k in (0.5, 1.0, 2.0, 4.0, 8.0):
            theta = betas[0] / gamma_p_inverse(k, levels[0])
            guesses.append((k, theta))
        return guesses
    raise DomainError(f"unknown family {family!r}")


def _compass_minimize(objective, x0, log_mask, steps0, max_iter=600, step_tol=1e-11):
    """Derivative-free coordinate (compass) search with shrinking steps."""
    x = list(x0)
    fx = objective(x)
    steps = list(steps0)
    for _ in range(max_iter):
        improved = False
        for i in range(len(x)):
            for sign in (1.0, -1.0):
                trial = list(x)
                if log_mask[i]:
                    trial[i] = x[i] * math.exp(sign * steps[i])
                else:
                    trial[i] = x[i] + sign * steps[i]
                ft = objective(trial)
                if ft < fx:
                    x, fx = trial, ft
                    improved = True
                    break
        if not improved:
            steps = [0.5 * s for s in steps]
            if max(steps) < step_tol:
                return x, fx, True
    return x, fx, max(steps) < step_tol


def estimate_parametric(oracle, family, c2: float, price_points) -> ParametricFit:
    """Fit a parametric sensitivity law from a sweep of price points.

    Builds the interval-mass residuals from consecutive measurement pairs
    plus the rate-level residual of the first measurement (intervals alone
    cannot identify location parameters), and minimizes the sum of squares
    by compass search from level-identity starting points. A fit that
    exhausts the iteration budget is still returned, flagged unconverged.
    """
    if hasattr(family, "__name__"):
        family = family.__name__
    family = str(family).lower()
    if family not in _FAMILY_PARAMS:
        raise DomainError(f"unknown family {family!r}; "
                          f"expected one of {sorted(_FAMILY_PARAMS)}")
    n_params = len(_FAMILY_PARAMS[family])
    points = [float(p) for p in price_points]
    if len(points) < n_params + 1:
        raise DomainError(
            f"{family} needs at least {n_params + 1} price points, got {len(points)}")
    if any(points[i] >= points[i + 1] for i in range(len(points) - 1)):
        raise DomainError("price points must be strictly increasing")
    if points[0] <= c2:
        raise DomainError("all price points must exceed c2")

    ms = [oracle.measure(p, c2) for p in points]
    if not all(_interior(m) for m in ms):
        raise DegenerateError("every measurement must yield an interior split")
    betas = [infer_threshold(m) for m in ms]
    lam = ms[0].lam
    gammas = [m.gamma1 for m in ms]
    for i in range(len(ms) - 1):
        if betas[i + 1] <= betas[i] or gammas[i + 1] >= gammas[i]:
            raise DegenerateError(
                f"price step {points[i]} -> {points[i + 1]} moved no probability mass")
    masses = [(gammas[i] - gammas[i + 1]) / lam for i in range(len(ms) - 1)]
    levels = [1.0 - g / lam for g in gammas]
    beta_max = max(betas)

    def objective(params):
        if not _feasible(family, params, beta_max):
            return math.inf
        ssq = (_family_cdf(family, params, betas[0]) - levels[0]) ** 2
        for i, mass in enumerate(masses):
            r = (_family_cdf(family, params, betas[i + 1])
                 - _family_cdf(family, params, betas[i]) - mass)
            ssq += r * r
        return ssq

    log_mask = [name != "a" for name in _FAMILY_PARAMS[family]]
    best = None
    for guess in _initial_guesses(family, betas, levels, lam, gammas):
        steps0 = [0.25 if lm else 0.1 * max(1.0, abs(g))
                  for g, lm in zip(guess, log_mask)]
        x, fx, ok = _compass_minimize(objective, guess, log_mask, steps0)
        if best is None or fx < best[1]:
            best = (x, fx, ok)
    params, ssq, converged = best
    return ParametricFit(family=family, params=tuple(params),
                         residual_norm=math.sqrt(ssq), converged=converged)


def estimate_density(oracle, c2: float, c1_start: float, delta: float,
                     steps: int) -> DensityEstimate:
    """Piecewise-constant density estimate from an increasing price sweep.

    Measures at c1 = c1_start + i * delta for i = 0..steps; each
    informative consecutive pair becomes one bin between the two inferred
    thresholds with height z = moved mass / (lam * bin width). A sweep that
    starts at c1_start == c2 opens with a degenerate balanced measurement;
    its threshold is recovered by quadratic extrapolation of the next
    three inferred thresholds back to zero price gap (the balance
    threshold itself is the floor below which no density can ever be
    estimated). Pairs that move no mass are skipped and recorded as gaps.
    """
    if c1_start < c2:
        raise DomainError(f"c1_start must be at least c2, got {c1_start} < {c2}")
    if delta <= 0.0:
        raise DomainError(f"price step must be positive, got {delta}")
    if steps < 1:
        raise DomainError(f"need at least one step, got {steps}")

    ms = [oracle.measure(c1_start + i * delta, c2) for i in range(steps + 1)]
    lam = ms[0].lam
    betas = []
    for m in ms:
        try:
            betas.append(infer_threshold(m))
        except DegenerateError:
            betas.append(None)

    if betas[0] is None and len(betas) >= 4 and all(
            b is not None for b in betas[1:4]):
        betas[0] = 3.0 * betas[1] - 3.0 * betas[2] + betas[3]

    bins, gaps = [], []
    for i in range(steps):
        b_lo, b_hi = betas[i], betas[i + 1]
        moved = ms[i].gamma1 - ms[i + 1].gamma1
        if b_lo is None or b_hi is None or moved <= 0.0 or b_hi <= b_lo:
            gaps.append((ms[i].c1, ms[i + 1].c1))
            continue
        bins.append((b_lo, b_hi, moved / (lam * (b_hi - b_lo))))
    if not bins:
        raise DegenerateError("price sweep produced no informative pairs")

    covered = math.fsum(z * (hi - lo) for lo, hi, z in bins)
    return DensityEstimate(bins=tuple(bins), covered_mass=covered, gaps=tuple(gaps))


def discover_classes(oracle, lam: float, delta: float, eps: float,
                     c1_init: float) -> DiscreteClasses:
    """Discover discrete sensitivity classes by descending server 1's price.

    With c2 fixed at zero, c1 descends from c1_init (which must choke
    server 1) in steps of delta. A rise of the server-1 rate by eps above
    the previous plateau marks a class entry, whose sensitivity is
    c1 / (d2 - d1); a plateau (two consecutive sub-eps changes) confirms
    the class's rate as the level jump. The walk stops at c1 <= 0 or full
    migration. A class still migrating at the end receives the remaining
    mass (total rate is known a priori) but does not count as confirmed.
    """
    if delta <= 0.0 or eps <= 0.0:
        raise DomainError("delta and eps must be positive")
    first = oracle.measure(c1_init, 0.0)
    if first.gamma1 >= eps:
        raise PreconditionError(
            f"c1_init={c1_init} does not choke server 1 (gamma1={first.gamma1})")

    classes = []          # [beta, rate-or-None]
    plateau_level = 0.0
    in_flight = False
    flat_streak = 0
    last_gamma = first.gamma1
    c1 = c1_init

    while True:
        c1 -= delta
        if c1 <= 0.0:
            break
        m = oracle.measure(c1, 0.0)
        gamma = m.gamma1
        if not in_flight:
            if gamma - plateau_level >= eps:
                gap = m.d2 - m.d1
                if gap <= _D_TOL:
                    raise DegenerateError(
                        f"no delay gap at entry price {c1}; cannot infer beta")
                classes.append([m.c1 / gap, None])
                in_flight = True
                flat_streak = 0
        else:
            if abs(gamma - last_gamma) < eps:
                flat_streak += 1
                if flat_streak >= 2:
                    classes[-1][1] = gamma - plateau_level
                    plateau_level = gamma
                    in_flight = False
            else:
                flat_streak = 0
        last_gamma = gamma
        if not in_flight and lam - plateau_level <= eps:
            break

    if not classes:
        raise DegenerateError(
            "server 1's rate never rose above eps before the price reached zero")

    residual = lam - plateau_level
    complete = residual <= eps
    if in_flight:
        classes[-1][1] = residual
        complete = False
    return DiscreteClasses(
        classes=tuple((b, r) for b, r in classes),
        complete=complete,
        residual_rate=residual,
    )


# --- serialization -----------------------------------------------------------


def measurements_to_csv(measurements) -> str:
    """Measurement log in the sweep-table layout, full double precision."""
    lines = ["c1,c2,gamma1,gamma2,d1,d2"]
    for m in measurements:
        lines.append(f"{m.c1!r},{m.c2!r},{m.gamma1!r},{m.gamma2!r},{m.d1!r},{m.d2!r}")
    return "\n".join(lines) + "\n"


def density_to_csv(est: DensityEstimate) -> str:
    lines = ["beta_lo,beta_hi,z"]
    for lo, hi, z in est.bins:
        lines.append(f"{lo!r},{hi!r},{z!r}")
    return "\n".join(lines) + "\n"


def classes_to_dict(dc: DiscreteClasses) -> dict:
    return {
        "classes": [{"beta": b, "rate": r} for b, r in dc.classes],
        "complete": dc.complete,
        "residual_rate": dc.residual_rate,
    }
