"""Equilibrium splits for a two-server system
=============================================

Customers arrive at rate 3 and pick a server by minimizing
price + (their delay-cost coefficient) * (mean delay). Server 1 is the
slower machine (mu = 3.3) and server 2 the faster one (mu = 4); the
coefficient is uniform on [2, 6]. This script walks through the objects
the rest of the toolkit is built on: the balanced load, the price gap
curve, and the split solver.
"""

import numpy as np

from qpk import (DelayModel, PriceVector, SystemConfig, Uniform,
                 balanced_load, price_gap_1, price_of_rate_1, revenue_rates,
                 solve_equilibrium, threshold_of_rate)

cfg = SystemConfig(
    lam=3.0,
    d1=DelayModel.linear(3.3),
    d2=DelayModel.linear(4.0),
    dist=Uniform(2.0, 6.0),
)

# %% The balanced load: the server-1 rate at which both delays agree.
# At equal prices this is the unique equilibrium.
gp = balanced_load(cfg)
print(f"balanced load gamma+ = {gp:.6f}")
print(f"  D1(gamma+) = {cfg.delay1(gp):.6f}")
print(f"  D2(lam - gamma+) = {cfg.delay2(3.0 - gp):.6f}")

# %% The price gap g1: how much server 1 can overcharge and still keep a
# given rate. Strictly decreasing, zero exactly at the balanced load.
print("\ngamma1    g1(gamma1)   threshold beta1")
for g in np.linspace(0.2, 2.8, 7):
    print(f"{g:6.2f} {price_gap_1(cfg, float(g)):12.4f}"
          f" {threshold_of_rate(cfg, float(g)):12.4f}")

# %% Solving the split for explicit prices. With c1 > c2 the
# high-sensitivity customers buy the fast, pricey server.
for c1, c2 in ((2.0, 2.0), (3.106, 1.0), (1.0, 3.0), (10.0, 1.0)):
    split = solve_equilibrium(cfg, PriceVector(c1, c2))
    r1, r2, rt = revenue_rates(split, PriceVector(c1, c2))
    print(f"\nprices ({c1}, {c2}):")
    print(f"  gamma1 = {split.gamma1:.4f}, gamma2 = {split.gamma2:.4f}")
    print(f"  threshold = {split.beta1:.4f}, regime = {split.regime.name}")
    print(f"  revenues: R1 = {r1:.4f}, R2 = {r2:.4f}, total = {rt:.4f}")

# %% Price-rate duality: pick any feasible rate, read off the price that
# induces it, then confirm the solver returns the same rate.
target = 0.9
c1 = price_of_rate_1(cfg, 1.0, target)
back = solve_equilibrium(cfg, PriceVector(c1, 1.0)).gamma1
print(f"\nround trip: rate {target} -> price {c1:.6f} -> rate {back:.6f}")
