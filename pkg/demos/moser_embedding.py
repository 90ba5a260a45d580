"""A ball embedding built by Moser's method, and checked.

Run: python demos/moser_embedding.py   (about half a minute)
"""
import math

import numpy as np

from gromov_width.chart_forms import builtin_form
from gromov_width.moser import (ScaledMap, construct_embedding, equivariance_residual, pullback_residual,
                                sample_region)

rng = np.random.default_rng(0)

# CP^1 in Darboux coordinates: the whole chart {Phi < 1} should land in the
# ball of capacity one.
cf = builtin_form("cp1")
X = sample_region(cf, 20, 0.9, rng)
fmap = construct_embedding(cf, 3.0)
image = fmap(X)
print("cp1 pullback residual:  %.2e" % pullback_residual(fmap, cf, X))
print("cp1 equivariance:       %.2e" % equivariance_residual(fmap, X[:5]))
print("pi|E(x)|^2 - Phi(x):    %.2e" % np.max(np.abs(math.pi * np.sum(image ** 2, 1) - cf.phi(X))))
# scaling by 1.01 multiplies omega by 1.0201, which shows most where the density is near one
near = sample_region(cf, 5, 0.05, rng)
print("1%% rescaled map:        %.2e  (should be about 2e-2)" % pullback_residual(ScaledMap(fmap, 1.01), cf, near))

# A form on C^2 that is standard only near the origin; the Moser isotopy
# is what straightens it out.
cf = builtin_form("twist")
fmap = construct_embedding(cf, 1.0)
X = sample_region(cf, 12, 0.9 * fmap.region_bound(), rng)
X = X[cf.phi(X) > cf.darboux_cap][:4]  # outside the region where omega is standard
st = fmap.stages(1.0, X)
print("twist: moser isotopy moves points by up to %.2e" % np.max(np.abs(st["G"] - X)))
print("twist pullback residual: %.2e" % pullback_residual(fmap, cf, X))
