#!/usr/bin/env python3
"""Counting embedded trees by vertical profile.

A rooted binary tree embedded canonically in Z (left child one step left,
right child one step right) has a vertical profile: the number of nodes at
each abscissa.  This script walks through the closed-form counts for binary
trees, general step sets, and labeled (Cayley) trees, and checks a few of
them against brute force.
"""

from embtrees import (
    Profile,
    StepSet,
    count_binary_horizontal,
    count_binary_profile,
    count_cayley_profile,
    count_sary_profile,
    enumerate_embedded_cayley,
    enumerate_sary,
)

print("=== binary trees ===")
print("horizontal profile (1,2,4,3,2):", count_binary_horizontal([1, 2, 4, 3, 2]))
p = Profile.parse("2;2,1")
print(f"vertical profile {p}: {count_binary_profile(p)} trees")
print("   (the three trees of size 5 with two nodes at abscissa -1,")
print("    two at 0, one at 1)")

print()
print("=== general step sets ===")
S = StepSet([-1, 0, 1])
print(f"ternary trees, profile (1,2): {count_sary_profile(S, Profile.parse('1,2'))}")
S2 = StepSet([-2, -1, 1])
p2 = Profile.parse("1,1,1,2,1;1")
print(f"S = {{-2,-1,1}}, profile {p2}: "
      f"{sum(1 for _ in enumerate_sary(S2, p2))} S-ary trees (a prime!)")

print()
print("=== labeled trees ===")
pm = StepSet([-1, 1])
print(f"Cayley trees with profile {p}: {count_cayley_profile(pm, p)} = 5! * 6")
print("brute force agrees:",
      sum(1 for _ in enumerate_embedded_cayley(pm, p)))
print("degenerate check: S = {0,1}, all mass at 0, n = 3:",
      count_cayley_profile(StepSet([0, 1]), Profile.parse("3")),
      "= 3^2 rooted Cayley trees")
