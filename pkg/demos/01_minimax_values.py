"""
Minimax values of the basis-vector Hedge game
==============================================

Tabulates V(0, T) against the c_N sqrt(T) envelope for a few N, and shows
that for two actions the closed form S(T) agrees with the recursion.
"""

import numpy as np

from horizonfree.values import RandomWalkTable, c_N, two_action_game_value

table = RandomWalkTable()

print("T    " + "".join(f"N={N:<12d}" for N in (2, 3, 4, 5)))
for T in (1, 2, 5, 10, 20):
    vals = [table.V([0] * N, T) / (c_N(N) * np.sqrt(T)) for N in (2, 3, 4, 5)]
    print(f"{T:<5d}" + "".join(f"{v:<14.6f}" for v in vals))
print("(ratio V(0,T) / (c_N sqrt(T)); all stay below 1)\n")

# two actions: S(T) grows like sqrt(T / (2 pi))
for T in (10, 100, 1000, 10**5):
    S = two_action_game_value(T)
    print(f"S({T}) = {S:.8f}   sqrt(T/2pi) = {np.sqrt(T / (2 * np.pi)):.8f}")
