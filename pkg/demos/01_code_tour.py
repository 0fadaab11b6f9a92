"""A quick tour of the hexagonal code and its two-level structure.

Run with:  python3 demos/01_code_tour.py
"""

import numpy as np

from xyz2dec.codes import build_xyz2, build_yzzy, lift, syndrome
from xyz2dec.pauli import PauliString, weight

d = 3
upper = build_yzzy(d)
code, cmap = build_xyz2(d)

print(f"Upper-level YZZY code, d={d}: n={upper.n}, "
      f"{upper.num_generators} face generators")
print(f"Concatenated code, d={d}:   n={code.n}, "
      f"{code.num_generators} generators ({cmap.num_links} links + "
      f"{code.num_generators - cmap.num_links} lifted faces)")
print()

print("How single upper-level Paulis lift to the physical lattice")
print("(top/bottom qubit pair of the first link):")
for label in "IXYZ":
    p = PauliString.single(upper.n, 0, label) if label != "I" \
        else PauliString.identity(upper.n)
    lifted = lift(p, cmap)
    print(f"  {label} -> {lifted.to_label()[:2]}")
print()

print("Logical representatives of the concatenated code:")
for name, rep in (("X", code.logical_x), ("Z", code.logical_z)):
    print(f"  logical {name}: weight {weight(rep)}  ({rep.to_label()})")
print()

err = PauliString.single(code.n, 2 * (d * d // 2), "Z")
syn = syndrome(code, err)
print(f"A single Z on the center link's top qubit triggers "
      f"{int(syn[:cmap.num_links].sum())} link bit(s) and "
      f"{int(syn[cmap.num_links:].sum())} plaquette bit(s):")
print(" ", np.array2string(syn))
