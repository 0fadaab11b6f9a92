"""How the lower-level link outcomes reshape the upper-level error model.

Conditioning on the link syndrome turns IID physical noise into a pair of
effective single-qubit priors on the upper level: a Z-leaning one for quiet
links and an X-leaning one for triggered links.  This demo prints both
across the bias range.

Run with:  python3 demos/02_bias_mapping.py
"""

import math

import numpy as np

from xyz2dec.linkstage import link_priors, link_trigger_probability
from xyz2dec.noise import channel_from_bias

p = 0.15
print(f"Conditional upper-level priors at physical error rate p = {p}")
print(f"{'eta':>8} {'s':>2} {'P_I':>8} {'P_X':>8} {'P_Y':>8} {'P_Z':>8}")
for eta in (0.5, 1.0, 3.0, 10.0, 30.0, 300.0, math.inf):
    ch = channel_from_bias(p, eta)
    for s in (0, 1):
        row = link_priors(ch, s)
        tag = "inf" if math.isinf(eta) else f"{eta:g}"
        print(f"{tag:>8} {s:>2} " + " ".join(f"{v:8.4f}" for v in row))
print()

print("Depolarizing noise (eta = 1/2) makes a triggered link exactly")
print("depolarizing on the upper level:", link_priors(channel_from_bias(p, 0.5), 1))
print()

print("Per-round link trigger probability p_(s=1):")
for eta in (0.5, 10.0):
    ch = channel_from_bias(p, eta)
    print(f"  eta = {eta:4}: {link_trigger_probability(ch):.4f}")
