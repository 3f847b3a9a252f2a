"""Duopoly price competition between identical servers
======================================================

Each server now sets its own price to maximize its own revenue. For
identical servers the only possible symmetric equilibrium price is
alpha = -gamma+ * g'(gamma+), but that condition is necessary, not
sufficient: whether the market actually rests there depends on the
sensitivity law. Uniform demand settles; exponential demand gives each
server an incentive to defect and serve a premium niche.
"""

from qpk import (DelayModel, Exponential, PriceVector, SystemConfig, Uniform,
                 balanced_load, best_response, check_symmetric_nash,
                 nash_iterate, symmetric_alpha)

uniform_market = SystemConfig(3.0, DelayModel.linear(4.0), DelayModel.linear(4.0),
                              Uniform(2.0, 6.0))
expo_market = SystemConfig(3.0, DelayModel.linear(4.0), DelayModel.linear(4.0),
                           Exponential(4.0))

# %% The symmetric candidate price and its verdict for both markets.
for name, cfg in (("uniform", uniform_market), ("exponential", expo_market)):
    a1, a2 = symmetric_alpha(cfg)
    verdict = check_symmetric_nash(cfg)
    print(f"{name}: alpha = {a1:.6f}, verdict = {verdict.value}")

# %% Why the exponential market defects: at rival price alpha, the best
# response is not the balanced load. The defector halves its volume to
# roughly double its margin.
a1, _ = symmetric_alpha(expo_market)
br = best_response(expo_market, 1, a1)
gp = balanced_load(expo_market)
print(f"\nexponential market at rival price {a1:.4f}:")
print(f"  balanced rate   = {gp:.4f}, revenue if played = {a1 * gp:.4f}")
print(f"  best response   = rate {br.gamma_star:.4f}, price {br.price_star:.4f}, "
      f"revenue {br.revenue_star:.4f}")
print(f"  stationary rates considered: "
      + ", ".join(f"{p:.4f}" for p in br.stationary_points))

# %% Alternating best responses from a cold start. The uniform market
# walks straight into the symmetric equilibrium (3, 3).
out = nash_iterate(uniform_market, PriceVector(1.0, 1.0), tol=1e-8, max_iter=50)
print(f"\nuniform market from (1, 1): converged={out.converged} "
      f"in {out.iterations} rounds to ({out.prices.c1:.6f}, {out.prices.c2:.6f})")

# %% The same dynamics on the exponential market keep circling: the
# candidate is not a fixed point, and no symmetric rest exists.
out = nash_iterate(expo_market, PriceVector(1.0, 1.0), tol=1e-8, max_iter=30)
print(f"exponential market from (1, 1): converged={out.converged}, "
      f"last prices ({out.prices.c1:.4f}, {out.prices.c2:.4f}), "
      f"residual {out.residual:.2e}")
