"""Delay models, delay-sensitivity distributions, and system configurations.

Everything here is immutable after construction and all operations are
pure functions, so values can be shared freely across threads.
"""

import json
import math
from dataclasses import dataclass
from enum import Enum

from . import _special
from .errors import DomainError, ValidationError

#: Probability clamp applied to quantile queries on unbounded-support
#: families; keeps every downstream evaluation finite.
P_MIN = 1e-12


class DelayFamily(str, Enum):
    LINEAR = "linear"
    MM1 = "mm1"


@dataclass(frozen=True)
class DelayModel:
    """A server's mean-delay curve D(rate).

    Two families: ``linear`` has D(g) = g/mu, ``mm1`` has D(g) = 1/(mu - g)
    for g < mu. The family set is closed in v1; evaluation and derivative
    dispatch through :func:`delay_eval` / :func:`delay_deriv` so a new
    family is a single-site addition.
    """

    family: DelayFamily
    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise DomainError(f"service rate mu must be positive, got {self.mu}")

    @classmethod
    def linear(cls, mu: float) -> "DelayModel":
        return cls(DelayFamily.LINEAR, mu)

    @classmethod
    def mm1(cls, mu: float) -> "DelayModel":
        return cls(DelayFamily.MM1, mu)


def delay_eval(model: DelayModel, gamma: float, saturation: bool = False) -> float:
    """Mean delay at arrival rate gamma; strictly increasing in gamma.

    For mm1 models the rate must stay below mu, unless ``saturation`` is
    set, which admits gamma == mu and returns +inf there.
    """
    if gamma < 0.0:
        raise DomainError(f"arrival rate must be nonnegative, got {gamma}")
    if model.family is DelayFamily.LINEAR:
        return gamma / model.mu
    if gamma > model.mu or (gamma == model.mu and not saturation):
        raise DomainError(
            f"mm1 delay undefined at gamma={gamma} for mu={model.mu}"
            + ("" if saturation else " (outside saturation mode)"))
    if gamma == model.mu:
        return math.inf
    return 1.0 / (model.mu - gamma)


def delay_deriv(model: DelayModel, gamma: float, saturation: bool = False) -> float:
    """Derivative of the mean delay; strictly positive on the domain."""
    if gamma < 0.0:
        raise DomainError(f"arrival rate must be nonnegative, got {gamma}")
    if model.family is DelayFamily.LINEAR:
        return 1.0 / model.mu
    if gamma > model.mu or (gamma == model.mu and not saturation):
        raise DomainError(
            f"mm1 delay derivative undefined at gamma={gamma} for mu={model.mu}"
            + ("" if saturation else " (outside saturation mode)"))
    if gamma == model.mu:
        return math.inf
    return 1.0 / (model.mu - gamma) ** 2


@dataclass(frozen=True)
class SensitivityDistribution:
    """Law of the per-customer delay-cost coefficient.

    Subclasses implement ``_cdf``/``_quantile``/``_density`` on the support
    interior; use the module-level :func:`cdf`, :func:`quantile` and
    :func:`density` entry points, which own the domain checks and the
    quantile clamp for unbounded families.
    """

    @property
    def support(self) -> tuple:
        raise NotImplementedError

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.support[1])

    def _cdf(self, x: float) -> float:
        raise NotImplementedError

    def _quantile(self, p: float) -> float:
        raise NotImplementedError

    def _density(self, x: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(SensitivityDistribution):
    a: float
    b: float

    def __post_init__(self):
        if not (0.0 <= self.a < self.b < math.inf):
            raise DomainError(f"uniform support needs 0 <= a < b, got [{self.a}, {self.b}]")

    @property
    def support(self):
        return (self.a, self.b)

    def _cdf(self, x):
        if x >= self.b:
            return 1.0
        return (x - self.a) / (self.b - self.a)

    def _quantile(self, p):
        return self.a + p * (self.b - self.a)

    def _density(self, x):
        return 0.0 if x > self.b else 1.0 / (self.b - self.a)


@dataclass(frozen=True)
class Exponential(SensitivityDistribution):
    """Exponential law parameterized by its mean tau (rate is 1/tau)."""

    tau: float

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise DomainError(f"exponential mean must be positive, got {self.tau}")

    @property
    def support(self):
        return (0.0, math.inf)

    def _cdf(self, x):
        return -math.expm1(-x / self.tau)

    def _quantile(self, p):
        return -self.tau * math.log1p(-p)

    def _density(self, x):
        return math.exp(-x / self.tau) / self.tau


@dataclass(frozen=True)
class Gamma(SensitivityDistribution):
    """Gamma law with shape k and scale theta."""

    k: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0.0):
            raise DomainError(f"gamma shape must be positive, got {self.k}")
        if not (math.isfinite(self.theta) and self.theta > 0.0):
            raise DomainError(f"gamma scale must be positive, got {self.theta}")

    @property
    def support(self):
        return (0.0, math.inf)

    def _cdf(self, x):
        return _special.gamma_p(self.k, x / self.theta)

    def _quantile(self, p):
        return _special.gamma_p_inverse(self.k, p) * self.theta

    def _density(self, x):
        if x == 0.0:
            if self.k < 1.0:
                return math.inf
            return (1.0 / self.theta) if self.k == 1.0 else 0.0
        log_pdf = ((self.k - 1.0) * math.log(x) - x / self.theta
                   - _special.log_gamma(self.k) - self.k * math.log(self.theta))
        return math.exp(log_pdf)


@dataclass(frozen=True)
class Power(SensitivityDistribution):
    """Power law with CDF (x/b)**n on [0, b]."""

    n: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.n) and self.n > 0.0):
            raise DomainError(f"power exponent must be positive, got {self.n}")
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise DomainError(f"power upper bound must be positive, got {self.b}")

    @property
    def support(self):
        return (0.0, self.b)

    def _cdf(self, x):
        if x >= self.b:
            return 1.0
        return (x / self.b) ** self.n

    def _quantile(self, p):
        return self.b * p ** (1.0 / self.n)

    def _density(self, x):
        if x > self.b:
            return 0.0
        return self.n * x ** (self.n - 1.0) / self.b ** self.n


def cdf(dist: SensitivityDistribution, x: float) -> float:
    """F(x); DomainError strictly below the support."""
    if x < dist.support[0]:
        raise DomainError(f"{x} is below the support of {dist}")
    return dist._cdf(x)


def quantile(dist: SensitivityDistribution, p: float) -> float:
    """F^{-1}(p) for p in [0, 1].

    Exact inverse for the uniform, exponential and power families; monotone
    root-finding on the regularized incomplete gamma for the gamma family,
    accurate to 1e-10 in probability. For unbounded-support families p is
    clamped to [P_MIN, 1 - P_MIN] so the result stays finite.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"quantile probability must lie in [0, 1], got {p}")
    if not dist.bounded:
        p = min(max(p, P_MIN), 1.0 - P_MIN)
    return dist._quantile(p)


def density(dist: SensitivityDistribution, x: float) -> float:
    """f(x); DomainError strictly below the support."""
    if x < dist.support[0]:
        raise DomainError(f"{x} is below the support of {dist}")
    return dist._density(x)


@dataclass(frozen=True)
class SystemConfig:
    """Total arrival rate plus the two servers' delay models and the
    sensitivity law.

    Construction is permissive beyond per-field checks; run
    :func:`validate_config` (solvers do) to enforce the joint regularity
    conditions. ``saturation_ok`` opts into mm1 models with mu == lam,
    in which case D(lam) evaluates to +inf and solvers operate strictly
    inside (0, lam).
    """

    lam: float
    d1: DelayModel
    d2: DelayModel
    dist: SensitivityDistribution
    saturation_ok: bool = False

    def delay1(self, gamma: float) -> float:
        return delay_eval(self.d1, gamma, self.saturation_ok)

    def delay2(self, gamma: float) -> float:
        return delay_eval(self.d2, gamma, self.saturation_ok)

    def delay1_deriv(self, gamma: float) -> float:
        return delay_deriv(self.d1, gamma, self.saturation_ok)

    def delay2_deriv(self, gamma: float) -> float:
        return delay_deriv(self.d2, gamma, self.saturation_ok)

    def identical_servers(self) -> bool:
        return self.d1 == self.d2


def validate_config(cfg: SystemConfig) -> SystemConfig:
    """Return cfg unchanged if every regularity condition holds.

    Raises ValidationError carrying the complete list of violations:
    positive arrival rate, mm1 stability (mu > lam, or mu >= lam in
    saturation mode), and the two delay-gap conditions
    D1(0) < D2(lam) and D2(0) < D1(lam) (finite unless saturated).
    """
    failures = []
    if not (math.isfinite(cfg.lam) and cfg.lam > 0.0):
        failures.append(f"total arrival rate must be positive, got {cfg.lam}")

    for name, model in (("server 1", cfg.d1), ("server 2", cfg.d2)):
        if model.family is DelayFamily.MM1 and math.isfinite(cfg.lam):
            if cfg.saturation_ok:
                if model.mu < cfg.lam:
                    failures.append(
                        f"{name}: mm1 needs mu >= lam even in saturation mode "
                        f"(mu={model.mu}, lam={cfg.lam})")
            elif model.mu <= cfg.lam:
                failures.append(
                    f"{name}: mm1 needs mu > lam (mu={model.mu}, lam={cfg.lam}); "
                    "set saturation_ok for mu == lam")

    if not failures:
        d1_0, d2_0 = cfg.delay1(0.0), cfg.delay2(0.0)
        d1_lam, d2_lam = cfg.delay1(cfg.lam), cfg.delay2(cfg.lam)
        if not d1_0 < d2_lam:
            failures.append(
                f"gap condition D1(0) < D2(lam) fails ({d1_0} >= {d2_lam})")
        if not d2_0 < d1_lam:
            failures.append(
                f"gap condition D2(0) < D1(lam) fails ({d2_0} >= {d1_lam})")
        if not cfg.saturation_ok:
            if not math.isfinite(d2_lam):
                failures.append("D2(lam) must be finite outside saturation mode")
            if not math.isfinite(d1_lam):
                failures.append("D1(lam) must be finite outside saturation mode")

    if failures:
        raise ValidationError(failures)
    return cfg


# --- JSON interchange (schema "qpk/1") -------------------------------------

SCHEMA_ID = "qpk/1"

_BETA_FIELDS = {
    "uniform": ("a", "b"),
    "exponential": ("tau",),
    "gamma": ("k", "theta"),
    "power": ("n", "b"),
}


def _dist_to_dict(dist: SensitivityDistribution) -> dict:
    if isinstance(dist, Uniform):
        return {"family": "uniform", "a": dist.a, "b": dist.b}
    if isinstance(dist, Exponential):
        return {"family": "exponential", "tau": dist.tau}
    if isinstance(dist, Gamma):
        return {"family": "gamma", "k": dist.k, "theta": dist.theta}
    if isinstance(dist, Power):
        return {"family": "power", "n": dist.n, "b": dist.b}
    raise DomainError(f"unknown sensitivity distribution {dist!r}")


def _dist_from_dict(obj: dict) -> SensitivityDistribution:
    family = obj.get("family")
    if family not in _BETA_FIELDS:
        raise ValidationError([f"beta.family must be one of {sorted(_BETA_FIELDS)}, "
                               f"got {family!r}"])
    fields = _BETA_FIELDS[family]
    unknown = set(obj) - set(fields) - {"family"}
    if unknown:
        raise ValidationError([f"unknown beta keys: {sorted(unknown)}"])
    missing = [f for f in fields if f not in obj]
    if missing:
        raise ValidationError([f"beta.{f} is required for family {family}" for f in missing])
    args = [float(obj[f]) for f in fields]
    ctor = {"uniform": Uniform, "exponential": Exponential,
            "gamma": Gamma, "power": Power}[family]
    return ctor(*args)


def _delay_from_dict(obj: dict, where: str) -> DelayModel:
    delay = obj.get("delay")
    if not isinstance(delay, dict):
        raise ValidationError([f"{where}.delay object is required"])
    unknown = set(obj) - {"delay"}
    if unknown:
        raise ValidationError([f"unknown {where} keys: {sorted(unknown)}"])
    unknown = set(delay) - {"family", "mu"}
    if unknown:
        raise ValidationError([f"unknown {where}.delay keys: {sorted(unknown)}"])
    family = delay.get("family")
    if family not in ("linear", "mm1"):
        raise ValidationError(
            [f"{where}.delay.family must be 'linear' or 'mm1', got {family!r}"])
    if "mu" not in delay:
        raise ValidationError([f"{where}.delay.mu is required"])
    return DelayModel(DelayFamily(family), float(delay["mu"]))


def config_to_json(cfg: SystemConfig) -> str:
    """Serialize to the versioned JSON interchange document."""
    doc = {
        "schema": SCHEMA_ID,
        "lambda": cfg.lam,
        "server1": {"delay": {"family": cfg.d1.family.value, "mu": cfg.d1.mu}},
        "server2": {"delay": {"family": cfg.d2.family.value, "mu": cfg.d2.mu}},
        "beta": _dist_to_dict(cfg.dist),
        "saturation_ok": cfg.saturation_ok,
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def config_from_json(text: str) -> SystemConfig:
    """Parse and validate a config document; unknown keys are errors."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([f"config is not valid JSON: {exc}"]) from exc
    if not isinstance(doc, dict):
        raise ValidationError(["config document must be a JSON object"])
    allowed = {"schema", "lambda", "server1", "server2", "beta", "saturation_ok"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValidationError([f"unknown config keys: {sorted(unknown)}"])
    schema = doc.get("schema", SCHEMA_ID)
    if schema != SCHEMA_ID:
        raise ValidationError([f"unsupported schema {schema!r}; expected {SCHEMA_ID!r}"])
    missing = [k for k in ("lambda", "server1", "server2", "beta") if k not in doc]
    if missing:
        raise ValidationError([f"config key {k!r} is required" for k in missing])
    try:
        cfg = SystemConfig(
            lam=float(doc["lambda"]),
            d1=_delay_from_dict(doc["server1"], "server1"),
            d2=_delay_from_dict(doc["server2"], "server2"),
            dist=_dist_from_dict(doc["beta"]),
            saturation_ok=bool(doc.get("saturation_ok", False)),
        )
    except DomainError as exc:
        raise ValidationError([str(exc)]) from exc
    return validate_config(cfg)
