"""Export the conditional-prior curves as a JSON grid.

Writes the eight curves P_sigma(eta | s) at fixed p to a small JSON file
(schema below) suitable for external plotting tools:

    {
      "kind": "bias-map-grid",
      "p": 0.15,
      "eta": [...],                    # ascending bias values
      "s0": [[P_I, P_X, P_Y, P_Z], ...],   # one row per eta
      "s1": [[P_I, P_X, P_Y, P_Z], ...]
    }

Run with:  python3 demos/05_biasmap_grid.py [out.json]
"""

import json
import sys

import numpy as np

from xyz2dec.linkstage import link_priors
from xyz2dec.noise import channel_from_bias

out = sys.argv[1] if len(sys.argv) > 1 else "biasmap-grid.json"
p = 0.15
etas = np.geomspace(0.5, 300.0, 61)

doc = {
    "kind": "bias-map-grid",
    "p": p,
    "eta": [float(e) for e in etas],
    "s0": [[float(v) for v in link_priors(channel_from_bias(p, e), 0)] for e in etas],
    "s1": [[float(v) for v in link_priors(channel_from_bias(p, e), 1)] for e in etas],
}
with open(out, "w") as fh:
    json.dump(doc, fh, indent=1)
print(f"wrote {len(etas)} eta points to {out}")
