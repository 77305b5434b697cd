"""Regenerate tests/data/eo_values.json from the sympy oracle (slow).

Existing entries keep their stored point and value, so an interrupted run can
be resumed.  Cases run in list order, cheapest first.
"""

import json
import random
import sys
from pathlib import Path

from eo_sympy import EynardOrantin

MASS = {"Weber": 3, "Whittaker": 5, "Airy": None, "DegenerateBessel": None}
LOW = [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (1, 3)]
CASES = (
    [("Weber", k) for k in LOW]
    + [("Whittaker", k) for k in LOW]
    + [(name, k) for name in ("Airy", "DegenerateBessel") for k in LOW + [(0, 5), (2, 2), (0, 6), (1, 4)]]
    + [("Weber", (2, 2)), ("Whittaker", (2, 2))]
)
PATH = Path(__file__).resolve().parents[1] / "data" / "eo_values.json"


def main(limit=None):
    done = {}
    if PATH.exists():
        for e in json.loads(PATH.read_text()):
            done[(e["curve"], e["g"], e["n"])] = e
    out = []
    for name, (g, n) in CASES[:limit]:
        e = done.get((name, g, n))
        if e is None:
            rng = random.Random(f"{name}-{g}-{n}")
            pt = [f"{rng.randint(2, 29)}/{rng.randint(31, 67)}" for _ in range(n)]
            val = str(EynardOrantin(name, MASS[name]).evaluate(g, n, pt))
            print(name, g, n, val, flush=True)
            e = {"curve": name, "mass": MASS[name], "g": g, "n": n, "point": pt, "value": val}
        out.append(e)
        PATH.write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else None)
