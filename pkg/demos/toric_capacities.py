"""Ball capacities read off Delzant polytopes.

Run: python demos/toric_capacities.py
"""
import json
from pathlib import Path

from gromov_width.toric import (DelzantPolytope, centered_region, toric_lower_bound, validate_delzant,
                                vertex_capacities)

here = Path(__file__).parent / "polytopes"
for path in sorted(here.glob("*.json")):
    P = DelzantPolytope.from_json(json.loads(path.read_text()))
    check = validate_delzant(P)
    if not check:
        print(f"{path.name}: not Delzant -- {check.diagnostics[0]}")
        continue
    caps = ", ".join(f"{tuple(map(str, v.vertex))}: {cap}" for v, cap in vertex_capacities(P))
    print(f"{path.name}: lower bound {toric_lower_bound(P)}  [{caps}]")

square = DelzantPolytope.from_json(json.loads((here / "square_2x3.json").read_text()))
region = centered_region(square, (0, 0))
print("faces of the square containing (0,0):", [list(f) for f in region.faces])
