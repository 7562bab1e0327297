#!/usr/bin/env python3
"""Regenerate the JSON descriptors under fixtures/.

Everything here is produced from the library's own constructors, so the
files double as CLI smoke-test inputs and documentation of the descriptor
format.
"""

import json
import os
import sys

import numpy as np

from qwreath.groups import symmetric_group, cyclic_group
from qwreath.actions import cyclic_translation_dual_action

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


def mat_to_json(M):
    out = []
    for row in np.asarray(M):
        out_row = []
        for x in row:
            x = complex(x)
            if abs(x.imag) < 1e-15:
                out_row.append(round(x.real, 15))
            else:
                out_row.append([round(x.real, 15), round(x.imag, 15)])
        out.append(out_row)
    return out


def permutation_action_descriptor(n):
    group = symmetric_group(n)
    autos = []
    for p in group.permutations:
        M = np.zeros((n, n))
        for j in range(n):
            M[p[j], j] = 1.0
        autos.append(mat_to_json(M))
    return {
        "kind": "classical",
        "group": {"table": [[int(x) for x in r] for r in group.table]},
        "algebra": {"blocks": [{"size": 1, "weights": [f"1/{n}"]} for _ in range(n)]},
        "autos": autos,
    }


def z3_translation_descriptor():
    action = cyclic_translation_dual_action(3)
    return {
        "kind": "dual",
        "group": {"table": [[int(x) for x in r] for r in cyclic_group(3).table]},
        "algebra": {"blocks": [{"size": 1, "weights": ["1/3"]} for _ in range(3)]},
        "grading": list(action.grades),
        "graded_basis": mat_to_json(action.graded_basis),
    }


def main():
    fixtures = {
        "s4_c4.json": permutation_action_descriptor(4),
        "s3_c3.json": permutation_action_descriptor(3),
        "z3_translation.json": z3_translation_descriptor(),
        "m2_trace.json": {"blocks": [{"size": 2, "weights": ["1/2", "1/2"]}]},
        "c1m2_delta5.json": {
            "blocks": [
                {"size": 1, "weights": ["1/5"]},
                {"size": 2, "weights": ["2/5", "2/5"]},
            ]
        },
        "morphism_sign_sign.json": {
            "group": "s3",
            "v": "sign",
            "w": "sign",
            "t": "trivial",
            "s": [[1.0]],
            "h_action": "s2_c2",
        },
    }
    os.makedirs(FIXTURES, exist_ok=True)
    for name, obj in fixtures.items():
        path = os.path.join(FIXTURES, name)
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
