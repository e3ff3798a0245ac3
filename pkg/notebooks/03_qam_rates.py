# # Square QAM rates over the Gaussian channel
#
# Mutual information of equiprobable 2^m-QAM by Gauss-Hermite quadrature,
# checked against a Monte Carlo estimate. The rate saturates at m log 2, so
# its gap to log(1 + P/sigma^2) grows without bound.

import math

import numpy as np

from capacityloss import GhConfig, circular_gaussian, gauss_hermite_mi, monte_carlo_mi, qam, qam_rate_curve
from capacityloss.mi import sigma_from_db

# ## Cross-check with Monte Carlo

noise = circular_gaussian()
for m in (2, 4):
    for db in (0, 10, 20):
        s = sigma_from_db(db)
        gh = gauss_hermite_mi(qam(m, 1.0), s)
        mc, se = monte_carlo_mi(qam(m, 1.0), s, noise, n_samples=200_000, seed=db)
        print(f"m={m} {db:3d} dB  GH {gh:.5f}  MC {mc:.5f} +- {se:.5f}")

# ## Loss against SNR

grid = np.arange(0, 81, 10.0)
for m in (4, 10, 16):
    curve = qam_rate_curve(m, 1.0, grid)
    print(f"m={m:2d}", " ".join(f"{p.loss_vs_gaussian:6.3f}" for p in curve))

# ## Quadrature order
#
# The default order is 20 nodes per dimension. Near the SNR where
# neighbouring levels start to separate the integrand has thin transition
# layers and higher orders change the result in the fourth decimal.

c = qam(10, 1.0)
s = sigma_from_db(34)
for n in (20, 40, 80, 160):
    print(n, gauss_hermite_mi(c, s, GhConfig(n)))
