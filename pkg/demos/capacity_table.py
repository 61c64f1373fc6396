#!/usr/bin/env python3
"""Measure hiding capacity across key lengths and dictionary sizes.

Capacity is mean message bits per stego image.  Greedy longest-prefix
matching over F scrambled t-bit sequences finds matches whose expected
length tracks log2(F * t), so doubling either the dictionary or the key
buys about one extra bit per image.
"""

import math

from coverstego import capacity_sweep, sweep_to_csv

T_VALUES = [100, 1000, 10000]
FACTOR_COUNTS = [34, 50]

cells = capacity_sweep(T_VALUES, FACTOR_COUNTS, trials=12, seed=2026)

print("     t  factors   bits/image     stddev   log2(F*t)+0.33")
for cell in cells:
    model = math.log2(cell.factors * cell.t) + 0.33
    print(f"{cell.t:>6}  {cell.factors:>7}   {cell.mean_bits_per_image:>10.3f}"
          f"   {cell.stddev:>8.3f}   {model:>14.3f}")

print()
print("as csv:")
print(sweep_to_csv(cells), end="")
