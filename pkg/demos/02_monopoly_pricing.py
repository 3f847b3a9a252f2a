"""Monopoly pricing with one price pinned
=========================================

Both servers belong to one operator; server 2's price is fixed at 1 and
the operator tunes server 1's price to maximize total revenue. Working
in rate space turns this into maximizing g1(gamma) * gamma over rates up
to the balanced load. The optimum depends on the whole shape of the
sensitivity law, not just its mean: the three laws below share mean 4
yet price out very differently.
"""

import numpy as np

from qpk import (DelayModel, Exponential, Gamma, SystemConfig, Uniform,
                 optimize_monopoly, revenue_curve)

LAWS = {
    "uniform [2, 6]": Uniform(2.0, 6.0),
    "exponential mean 4": Exponential(4.0),
    "gamma shape 2 scale 2": Gamma(2.0, 2.0),
}

# %% Linear delays (mu1 = 3.3, mu2 = 4), total rate 3, rival price 1.
print("linear delays:")
print(f"{'law':24s} {'rate*':>8s} {'price*':>8s} {'revenue*':>9s}")
for name, law in LAWS.items():
    cfg = SystemConfig(3.0, DelayModel.linear(3.3), DelayModel.linear(4.0), law)
    res = optimize_monopoly(cfg, c2=1.0)
    print(f"{name:24s} {res.gamma1_star:8.3f} {res.c1_star:8.3f} {res.rt_star:9.3f}")

# %% The same market with queueing (mm1) delays is less lucrative: the
# faster server's advantage shrinks when both queues are lightly loaded.
print("\nmm1 delays:")
print(f"{'law':24s} {'rate*':>8s} {'price*':>8s} {'revenue*':>9s}")
for name, law in LAWS.items():
    cfg = SystemConfig(3.0, DelayModel.mm1(3.3), DelayModel.mm1(4.0), law)
    res = optimize_monopoly(cfg, c2=1.0)
    print(f"{name:24s} {res.gamma1_star:8.3f} {res.c1_star:8.3f} {res.rt_star:9.3f}")

# %% The full revenue curve is plot-ready: uniform-law linear case, as a
# quick text sketch. The curve starts and ends at c2 * lam = 3 (no
# premium traffic / no premium at all) and peaks in between.
cfg = SystemConfig(3.0, DelayModel.linear(3.3), DelayModel.linear(4.0),
                   Uniform(2.0, 6.0))
curve = revenue_curve(cfg, c2=1.0, n=25)
lo = min(rt for _, rt in curve)
hi = max(rt for _, rt in curve)
print("\nrevenue vs rate (uniform law):")
for g, rt in curve:
    bar = "#" * int(round(40 * (rt - lo) / (hi - lo)))
    print(f"  {g:5.3f} {rt:7.4f} {bar}")

# %% Shifting the rival price only lifts the curve: the optimal rate is
# unchanged and the optimal price moves one-for-one.
for c2 in (0.0, 1.0, 5.0):
    res = optimize_monopoly(cfg, c2=c2)
    print(f"c2 = {c2}: rate* = {res.gamma1_star:.4f}, price* = {res.c1_star:.4f}")
