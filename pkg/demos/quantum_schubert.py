"""Small quantum cohomology of Grassmannians, one product at a time.

Run: python demos/quantum_schubert.py
"""
from gromov_width.schubert import BoxContext, gw_invariant_3pt, lr_coefficient, quantum_product

# Classical Schubert calculus first: the Littlewood-Richardson number that
# counts how s_21 * s_21 contains s_321.
print("c^{321}_{21,21} =", lr_coefficient((2, 1), (2, 1), (3, 2, 1)))

# On Gr(2,4) the hyperplane class squared is still classical ...
ctx = BoxContext(2, 4)
print("Gr(2,4): s1 * s1  =", quantum_product((1,), (1,), ctx).to_json())

# ... but s1 * s21 already reaches past the box, and the overflow comes back
# as a multiple of q.
print("Gr(2,4): s1 * s21 =", quantum_product((1,), (2, 1), ctx).to_json())
print("Gr(2,4): s22 * s22 =", quantum_product((2, 2), (2, 2), ctx).to_json())

# The invariant behind the upper bound: lines through a point, meeting
# the planes inside a hyperplane and those containing a vector.
for k, n in [(1, 2), (2, 4), (3, 7), (4, 8)]:
    c = BoxContext(k, n)
    value = gw_invariant_3pt(c.point_class(), [1] * k, [n - k], 1, c)
    print(f"Gr({k},{n}): <[pt], s_(1^{k}), s_({n - k})>_1 = {value}")
