"""The invariant Kahler form of Gr(k,n) in a graph chart.

Run: python demos/grassmannian_chart.py
"""
import numpy as np

from gromov_width.grassmannian import (CircleActionSpec, FixedPointLabel, GraphChartPoint, isotropy_weights,
                                       line_area, moment_map_circle, symplectic_form_at, verify_moment_equation)
from gromov_width.schubert import BoxContext

ctx = BoxContext(1, 2)
print("omega at the origin of CP^1:\n", symplectic_form_at(GraphChartPoint.origin(ctx)))
print("area of the line:", line_area(ctx))

act = CircleActionSpec.standard(ctx)
for r in [0.5, 1.0, 3.0]:
    print(f"Phi at |z| = {r}: {moment_map_circle(GraphChartPoint(ctx, np.array([[r + 0j]])), act):.6f}")

# The moment-map equation holds up to finite-difference error on Gr(2,4).
ctx = BoxContext(2, 4)
rng = np.random.default_rng(1)
act = CircleActionSpec.standard(ctx)
res = [verify_moment_equation(GraphChartPoint(ctx, rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))), act)
       for _ in range(5)]
print("moment equation residuals on Gr(2,4):", ["%.1e" % r for r in res])

print("weights at the base point:", isotropy_weights(FixedPointLabel.base(ctx), act))
print("weights at span{e1, e3}:  ", isotropy_weights(FixedPointLabel((1, 3)), act))
