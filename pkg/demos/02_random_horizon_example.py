"""
Random horizon is not a mixture of fixed horizons
=================================================

Three actions, losses from the complemented basis {1 - e_i}, horizon 3 or 4
with equal odds.  At round 3 with cumulative losses (1, 1, 2) the optimal
play under the random horizon differs from averaging the fixed-horizon
minimax plays.
"""

from fractions import Fraction

from horizonfree.priors import FinitePrior
from horizonfree.solver import FiniteLossSpace, fixed_horizon_mixture, random_horizon_value


def frac(x):
    return str(Fraction(x).limit_denominator(1000))


space = FiniteLossSpace.complemented_basis(3)
prior = FinitePrior((3, 4), (0.5, 0.5))
M = (1, 1, 2)

sol = random_horizon_value(space, prior, 3, M)
mix, mix_value = fixed_horizon_mixture(space, prior, 3, M)

print("random-horizon optimum :", [frac(p) for p in sol.distribution], " value", frac(sol.value))
print("mixture of fixed plays :", [frac(p) for p in mix], " value", frac(mix_value))
