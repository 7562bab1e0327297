#!/usr/bin/env python3
"""Print the K-group table for wreath products over one matrix block.

Rows are the base presets (cyclic groups and free-group duals), columns
the block size; every entry is computed from the assembled presentation,
scanning all torsion candidates and both relation signs.
"""

import sys

from qwreath.ktheory import preset_k_data, wreath_k_groups_over_aut_plus


def main():
    sizes = (2, 3, 4, 5)
    bases = [("z_s", s) for s in (1, 2, 3, 5)] + [
        ("free_dual", t) for t in (1, 2, 3, 5)
    ]
    header = "base".ljust(14) + "".join(f"N={n}".ljust(26) for n in sizes)
    print(header)
    print("-" * len(header))
    for name, param in bases:
        cells = []
        for n in sizes:
            k0, k1 = wreath_k_groups_over_aut_plus(preset_k_data(name, param), n)
            cells.append(f"({k0.render()}; {k1.render()})".ljust(26))
        print(f"{name}:{param}".ljust(14) + "".join(cells))
    return 0


if __name__ == "__main__":
    sys.exit(main())
