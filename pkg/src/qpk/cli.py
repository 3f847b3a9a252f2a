"""Command-line front end.

Reads a JSON system config, dispatches to the solvers and estimators, and
emits either a human-readable summary (4 significant digits) or a
machine-readable CSV/JSON artifact (full double precision, '.' decimal,
LF line endings). Identical invocations with identical seeds produce
byte-identical machine output. Exit codes: 0 success, 2 config/validation
problems, 3 runtime failures (degenerate measurements, missing roots,
unstable simulations).
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import estimation, models, monopoly, wardrop
from . import duopoly as duopoly_mod
from .errors import DomainError, QpkError, ValidationError
from .models import P_MIN

SUMMARY, JSON_FMT, CSV_FMT = "summary", "json", "csv"


@dataclass
class RunSpec:
    command: str
    config_path: str
    params: dict = field(default_factory=dict)
    fmt: str = SUMMARY
    output: str = None  # None = stdout
    seed: int = 0
    threads: int = 1


def _threads_from_env() -> int:
    raw = os.environ.get("QPK_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValidationError([f"QPK_THREADS must be an integer, got {raw!r}"]) from exc
    if n < 1:
        raise ValidationError([f"QPK_THREADS must be at least 1, got {n}"])
    return n


def _load_config(path: str) -> models.SystemConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError([f"cannot read config {path!r}: {exc}"]) from exc
    return models.config_from_json(text)


def _emit(spec: RunSpec, text: str) -> None:
    if spec.output:
        with open(spec.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt4(x: float) -> str:
    return f"{x:.4g}"


def _json_doc(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _summary(pairs) -> str:
    return "".join(f"{k} = {v if isinstance(v, str) else _fmt4(v)}\n"
                   for k, v in pairs)


def _make_oracle(spec: RunSpec, cfg):
    kind = spec.params.get("oracle", "exact")
    base = estimation.exact_oracle(cfg)
    if kind == "exact":
        return base
    if kind == "noisy":
        return estimation.noisy_oracle(base, spec.params.get("noise", 0.01), spec.seed)
    if kind == "des":
        return estimation.des_oracle(cfg, spec.params.get("horizon", 10000.0), spec.seed)
    raise ValidationError([f"unknown oracle {kind!r}; expected exact, noisy or des"])


# --- command handlers --------------------------------------------------------


def _cmd_equilibrium(spec: RunSpec) -> None:
    cfg = _load_config(spec.config_path)
    prices = wardrop.PriceVector(spec.params["c1"], spec.params["c2"])
    split = wardrop.solve_equilibrium(cfg, prices)
    r1, r2, rt = wardrop.revenue_rates(split, prices)
    doc = {"gamma1": split.gamma1, "gamma2": split.gamma2, "beta1": split.beta1,
           "regime": split.regime.name, "r1": r1, "r2": r2, "rt": rt}
    if spec.fmt == JSON_FMT:
        _emit(spec, _json_doc(doc))
    elif spec.fmt == CSV_FMT:
        keys = sorted(k for k in doc if k != "regime")
        _emit(spec, _csv(keys, [[doc[k] for k in keys]]))
    else:
        _emit(spec, _summary(sorted(doc.items())))


def _cmd_monopoly(spec: RunSpec) -> None:
    cfg = _load_config(spec.config_path)
    res = monopoly.optimize_monopoly(cfg, spec.params["c2"],
                                     grid_size=spec.params.get("grid", monopoly.DEFAULT_GRID))
    doc = {"gamma1_star": res.gamma1_star, "c1_star": res.c1_star,
           "rt_star": res.rt_star}
    if spec.fmt == JSON_FMT:
        _emit(spec, _json_doc(doc))
    elif spec.fmt == CSV_FMT:
        keys = sorted(doc)
        _emit(spec, _csv(keys, [[doc[k] for k in keys]]))
    else:
        _emit(spec, _summary(sorted(doc.items())))


def _cmd_best_response(spec: RunSpec) -> None:
    cfg = _load_config(spec.config_path)
    br = duopoly_mod.best_response(cfg, spec.params["server"], spec.params["other_price"])
    doc = {"server": br.server, "given_price": br.given_price,
           "gamma_star": br.gamma_star, "price_star": br.price_star,
           "revenue_star": br.revenue_star,
           "stationary_points": list(br.stationary_points)}
    if spec.fmt == JSON_FMT:
        _emit(spec, _json_doc(doc))
    else:
        _emit(spec, _summary([
            ("server", str(br.server)), ("given_price", br.given_price),
            ("gamma_star", br.gamma_star), ("price_star", br.price_star),
            ("revenue_star", br.revenue_star),
            ("stationary_points", " ".join(_fmt4(p) for p in br.stationary_points)),
        ]))


def _cmd_nash(spec: RunSpec) -> None:
    cfg = _load_config(spec.config_path)
    init = wardrop.PriceVector(spec.params.get("c1_init", 1.0),
                               spec.params.get("c2_init", 1.0))
    out = duopoly_mod.nash_iterate(cfg, init, tol=spec.params.get("tol", 1e-6),
                                   max_iter=spec.params.get("max_iter", 100),
                                   damping=spec.params.get("damping", 1.0))
    doc = {"c1": out.prices.c1, "c2": out.prices.c2, "converged": out.converged,
           "iterations": out.iterations, "residual": out.residual,
           "symmetric_alpha": out.symmetric_alpha}
    if spec.fmt == JSON_FMT:
        _emit(spec, _json_doc(doc))
    else:
        _emit(spec, _summary([
            ("c1", out.prices.c1), ("c2", out.prices.c2),
            ("converged", str(out.converged).lower()),
            ("iterations", str(out.iterations)), ("residual", out.residual),
        ]))


def _cmd_symmetric(spec: RunSpec) -> None:
    cfg = _load_config(spec.config_path)
    a1, a2 = duopoly_mod.symmetric_alpha(cfg)
    verdict = duopoly_mod.check_symmetric_nash(cfg, tol=spec.params.get("tol", 1e-6))
    doc = {"alpha1": a1, "alpha2": a2, "verdict": verdict.value}
    if spec.fmt == JSON_FMT:
        _emit(spec, _json_doc(doc))
    else:
        _emit(spec, _summary([("alpha1", a1), ("alpha2", a2),
                              ("verdict", verdict.value)]))


def _cmd_estimate_exp(spec: RunSpec) -> None:
    cfg = _load_config(spec.config_path)
    oracle = _make_oracle(spec, cfg)
    fit = estimation.estimate_exponential(oracle, spec.params["c1"],
                                          spec.params["c2"], spec.params["delta"])
    doc = {"tau": fit.tau, "rate": fit.rate}
    if spec.fmt == JSON_FMT:
        _emit(spec, _json_doc(doc))
    else:
        _emit(spec, _summary(sorted(doc.items())))


def _cmd_estimate_param(spec: RunSpec) -> None:
    cfg = _load_config(spec.config_path)
    oracle = _make_oracle(spec, cfg)
    fit = estimation.estimate_parametric(oracle, spec.params["family"],
                                         spec.params["c2"], spec.params["prices"])
    doc = {"family": fit.family,
           "params": dict(zip(estimation._FAMILY_PARAMS[fit.family], fit.params)),
           "residual_norm": fit.residual_norm, "converged": fit.converged}
    if spec.fmt == JSON_FMT:
        _emit(spec, _json_doc(doc))
    else:
        pairs = [("family", fit.family)]
        pairs += list(zip(estimation._FAMILY_PARAMS[fit.family], fit.params))
        pairs += [("residual_norm", fit.residual_norm),
                  ("converged", str(fit.converged).lower())]
        _emit(spec, _summary(pairs))


class _LoggingOracle:
    """Records every measurement an estimator requests."""

    def __init__(self, inner):
        self.inner = inner
        self.log = []

    def measure(self, c1, c2):
        m = self.inner.measure(c1, c2)
        self.log.append(m)
        return m


def _cmd_estimate_density(spec: RunSpec) -> None:
    cfg = _load_config(spec.config_path)
    oracle = _make_oracle(spec, cfg)
    log_path = spec.params.get("measurements")
    if log_path:
        oracle = _LoggingOracle(oracle)
    est = estimation.estimate_density(oracle, spec.params["c2"],
                                      spec.params["c1_start"],
                                      spec.params["delta"], spec.params["steps"])
    if log_path:
        with open(log_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(estimation.measurements_to_csv(oracle.log))
    if spec.fmt == JSON_FMT:
        _emit(spec, _json_doc({
            "bins": [{"beta_lo": lo, "beta_hi": hi, "z": z} for lo, hi, z in est.bins],
            "covered_mass": est.covered_mass,
            "gaps": [{"c1_lo": a, "c1_hi": b} for a, b in est.gaps],
        }))
    elif spec.fmt == SUMMARY:
        pairs = [("bins", str(len(est.bins))), ("covered_mass", est.covered_mass),
                 ("z_min", min(z for _, _, z in est.bins)),
                 ("z_max", max(z for _, _, z in est.bins))]
        _emit(spec, _summary(pairs))
    else:
        _emit(spec, estimation.density_to_csv(est))


def _parse_classes(raw: str):
    out = []
    for part in raw.split(","):
        beta, _, rate = part.partition(":")
        out.append((float(beta), float(rate)))
    return out


def _cmd_discover_classes(spec: RunSpec) -> None:
    # The config supplies the two delay models; its sensitivity law is
    # replaced by the discrete classes under discovery, and the total rate
    # is the sum of the class rates.
    cfg = _load_config(spec.config_path)
    classes = _parse_classes(spec.params["classes"])
    oracle = estimation.discrete_class_oracle(classes, cfg.d1, cfg.d2)
    dc = estimation.discover_classes(
        oracle, lam=oracle.lam, delta=spec.params["delta"],
        eps=spec.params["eps"], c1_init=spec.params["c1_init"])
    doc = estimation.classes_to_dict(dc)
    if spec.fmt == SUMMARY:
        pairs = [(f"class_{i + 1}", f"beta={_fmt4(b)} rate={_fmt4(r)}")
                 for i, (b, r) in enumerate(dc.classes)]
        pairs += [("complete", str(dc.complete).lower()),
                  ("residual_rate", dc.residual_rate)]
        _emit(spec, _summary(pairs))
    else:
        _emit(spec, _json_doc(doc))


_CURVES = ("beta1", "g1", "g2", "revenue", "r1-and-c1")


def _gamma_grid(cfg, n):
    if cfg.dist.bounded and not cfg.saturation_ok:
        lo, hi = 0.0, cfg.lam
    else:
        lo, hi = cfg.lam * P_MIN, cfg.lam * (1.0 - P_MIN)
    step = (hi - lo) / (n - 1)
    return [hi if i == n - 1 else lo + i * step for i in range(n)]


def _cmd_sweep(spec: RunSpec) -> None:
    cfg = _load_config(spec.config_path)
    what = spec.params["what"]
    n = spec.params["n"]
    if n < 2:
        raise DomainError(f"sweep needs n >= 2, got {n}")
    if what not in _CURVES:
        raise DomainError(f"unknown curve {what!r}; expected one of {_CURVES}")

    if what == "beta1":
        rows = [(g, wardrop.threshold_of_rate(cfg, g)) for g in _gamma_grid(cfg, n)]
        _emit(spec, _csv(("gamma1", "beta1"), rows))
    elif what == "g1":
        rows = [(g, wardrop.price_gap_1(cfg, g)) for g in _gamma_grid(cfg, n)]
        _emit(spec, _csv(("gamma1", "g1"), rows))
    elif what == "g2":
        rows = [(g, wardrop.price_gap_2(cfg, g)) for g in _gamma_grid(cfg, n)]
        _emit(spec, _csv(("gamma2", "g2"), rows))
    elif what == "revenue":
        c2 = spec.params["c2"]
        rows = monopoly.revenue_curve(cfg, c2, n)
        _emit(spec, _csv(("gamma1", "revenue"), rows))
    else:  # r1-and-c1
        c2 = spec.params["c2"]
        cap = wardrop.rate_cap_1(cfg, c2)
        lo, hi = cfg.lam * P_MIN, cap * (1.0 - P_MIN)
        step = (hi - lo) / (n - 1)
        rows = []
        for i in range(n):
            g = hi if i == n - 1 else lo + i * step
            gap = wardrop.price_gap_1(cfg, g)
            rows.append((g, (gap + c2) * g, c2 + gap))
        _emit(spec, _csv(("gamma1", "r1", "c1"), rows))


_HANDLERS = {
    "equilibrium": _cmd_equilibrium,
    "monopoly": _cmd_monopoly,
    "duopoly-best-response": _cmd_best_response,
    "duopoly-nash": _cmd_nash,
    "duopoly-symmetric": _cmd_symmetric,
    "estimate-exp": _cmd_estimate_exp,
    "estimate-param": _cmd_estimate_param,
    "estimate-density": _cmd_estimate_density,
    "discover-classes": _cmd_discover_classes,
    "sweep": _cmd_sweep,
}


def run(spec: RunSpec) -> int:
    """Execute one parsed command; returns the process exit status."""
    try:
        _HANDLERS[spec.command](spec)
        return 0
    except ValidationError as exc:
        for failure in exc.failures:
            print(f"error: {failure}", file=sys.stderr)
        return 2
    except QpkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpk",
        description="Equilibria, admission pricing, and sensitivity-law "
                    "estimation for a two-server queueing system.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_fmt=SUMMARY):
        p.add_argument("--config", required=True, help="path to a qpk/1 JSON config")
        p.add_argument("--format", choices=(SUMMARY, JSON_FMT, CSV_FMT),
                       default=default_fmt)
        p.add_argument("--output", default=None, help="write the artifact here "
                       "instead of stdout")

    def oracle_opts(p):
        p.add_argument("--oracle", choices=("exact", "noisy", "des"), default="exact")
        p.add_argument("--noise", type=float, default=0.01,
                       help="relative noise of the noisy oracle")
        p.add_argument("--horizon", type=float, default=10000.0,
                       help="simulated time of the des oracle")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("equilibrium", help="solve the split for a price pair")
    common(p)
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)

    p = sub.add_parser("monopoly", help="revenue-optimal price for server 1")
    common(p)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--grid", type=int, default=monopoly.DEFAULT_GRID)

    p = sub.add_parser("duopoly-best-response", help="one server's best response")
    common(p)
    p.add_argument("--server", type=int, choices=(1, 2), required=True)
    p.add_argument("--other-price", type=float, required=True)

    p = sub.add_parser("duopoly-nash", help="alternating best-response search")
    common(p)
    p.add_argument("--c1-init", type=float, default=1.0)
    p.add_argument("--c2-init", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--damping", type=float, default=1.0)

    p = sub.add_parser("duopoly-symmetric",
                       help="symmetric candidate price and its verdict")
    common(p)
    p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("estimate-exp", help="fit an exponential sensitivity law")
    common(p)
    oracle_opts(p)
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)

    p = sub.add_parser("estimate-param", help="fit a parametric sensitivity law")
    common(p)
    oracle_opts(p)
    p.add_argument("--family", required=True,
                   choices=tuple(sorted(estimation._FAMILY_PARAMS)))
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--prices", required=True,
                   help="comma-separated strictly increasing c1 values")

    p = sub.add_parser("estimate-density",
                       help="piecewise-constant density from a price sweep")
    common(p, default_fmt=CSV_FMT)
    oracle_opts(p)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--c1-start", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--measurements", default=None,
                   help="also write the measurement log CSV here")

    p = sub.add_parser("discover-classes",
                       help="discover discrete sensitivity classes")
    common(p, default_fmt=JSON_FMT)
    p.add_argument("--classes", required=True,
                   help="beta:rate pairs, e.g. '4:1,2:1.5' (synthetic system)")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--eps", type=float, default=None,
                   help="rate threshold; default 1e-3 * total rate")
    p.add_argument("--c1-init", type=float, required=True)

    p = sub.add_parser("sweep", help="emit a plot-ready curve as CSV")
    common(p, default_fmt=CSV_FMT)
    p.add_argument("--what", required=True, choices=_CURVES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c2", type=float, default=None,
                   help="required for revenue and r1-and-c1 curves")

    return parser


def _spec_from_args(args) -> RunSpec:
    skip = {"command", "config", "format", "output", "seed"}
    params = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if args.command in ("sweep",) and args.what in ("revenue", "r1-and-c1") \
            and "c2" not in params:
        raise ValidationError([f"--c2 is required for the {args.what} curve"])
    if args.command == "estimate-param":
        try:
            params["prices"] = [float(x) for x in params["prices"].split(",")]
        except ValueError as exc:
            raise ValidationError([f"cannot parse --prices: {exc}"]) from exc
    if args.command == "discover-classes" and params.get("eps") is None:
        total = sum(r for _, r in _parse_classes(params["classes"]))
        params["eps"] = 1e-3 * total
    return RunSpec(
        command=args.command,
        config_path=args.config,
        params=params,
        fmt=args.format,
        output=args.output,
        seed=getattr(args, "seed", 0),
        threads=_threads_from_env(),
    )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        spec = _spec_from_args(args)
    except ValidationError as exc:
        for failure in exc.failures:
            print(f"error: {failure}", file=sys.stderr)
        return 2
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
