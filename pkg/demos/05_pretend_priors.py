"""
Pretend priors in action
========================

Runs the anytime Hedge variants against a few oblivious adversaries for 400
rounds and compares the final regret with the sqrt(T) scale.
"""

import numpy as np

from horizonfree.arena import Alternating, RandomBasis, UniformCube, run_game
from horizonfree.learners import exp_weights, first_order_exp_weights, fpl_pretend, pretend_prior_hedge

T = 400
rows = [
    ("pretend hedge (N=2)", lambda: pretend_prior_hedge(), lambda: RandomBasis(2)),
    ("pretend hedge, alternating", lambda: pretend_prior_hedge(), lambda: Alternating(2)),
    ("exp weights pretend (N=4)", lambda: exp_weights(4, "pretend"), lambda: UniformCube(4)),
    ("exp weights time-varying", lambda: exp_weights(4, "time_varying"), lambda: UniformCube(4)),
    ("first order (N=4)", lambda: first_order_exp_weights(4), lambda: UniformCube(4)),
    ("fpl pretend (N=4)", lambda: fpl_pretend(4, rng=0), lambda: UniformCube(4)),
]
for label, learner, adversary in rows:
    regrets = [run_game(learner(), adversary(), T, seed=s).regret[-1] for s in range(3)]
    print(f"{label:<28s} regret {np.mean(regrets):7.3f}   / sqrt(T) = {np.mean(regrets) / np.sqrt(T):.3f}")
