"""
Counting operations
===================

Fast detection costs one FFT plus K distance evaluations per subchannel.
Exhaustive ML evaluates a full N x N product for each of the K^N hypotheses.
"""

# %%
from ucamimo.simulate import complexity_counts, complexity_ratios

for n in (2, 4, 8, 16):
    for k in (2, 4):
        fast = complexity_counts(n, k, "fast")
        trad = complexity_counts(n, k, "traditional")
        add, mul = complexity_ratios(n, k)
        print(f"N={n:2d} K={k}  fast {fast.complex_additions:4d}/{fast.complex_multiplications:4d}"
              f"  traditional {trad.complex_additions}/{trad.complex_multiplications}"
              f"  ratio {float(add):.3g} / {float(mul):.3g}")
