"""
Lower bound for an unknown, adversarial horizon
===============================================

Two sequences with the same limit sqrt(2):

* ``partial_sum``: the inverse of sum_{k < T0/2} S(2k) / 2^k, decreasing;
* ``closed_form``: the exact value of the restricted-adversary recursion with
  horizon cap T0, increasing.  ``recursion`` solves the same recursion
  numerically and is only run for small T0.
"""

import math

from horizonfree.solver import scaled_lower_bound

print(f"{'T0':>5} {'partial_sum':>14} {'closed_form':>14} {'recursion':>14}")
for T0 in (4, 8, 16, 32, 60, 100, 400):
    rec = f"{scaled_lower_bound(T0, 'recursion'):14.10f}" if T0 <= 16 else " " * 14
    print(f"{T0:5d} {scaled_lower_bound(T0):14.10f} {scaled_lower_bound(T0, 'closed_form'):14.10f} {rec}")
print(f"{'limit':>5} {math.sqrt(2):14.10f}")
