# # Lower bound on the loss at finite SNR
#
# For circular Gaussian noise of scale sigma the gap between the ambient
# capacity log(1 + P/sigma^2) and the capacity with support constraint is
# bounded from below by minimising a duality bound over a neighbourhood
# radius eps. The bound is loose at moderate SNR and tightens as sigma -> 0.

import math

import numpy as np

from capacityloss import Square, capacity_loss, circular_gaussian, cs_upper_bound, loss_lower_bound
from capacityloss.mi import sigma_from_db

region = Square(math.sqrt(1.5))  # uniform power 1
P = 1.0
noise = circular_gaussian()
limit = capacity_loss(region, P).loss

# ## The objective in eps
#
# Small eps makes the noise tail probability large; large eps inflates the
# neighbourhood integral. The minimiser sits a few sigma out.

sigma = sigma_from_db(60)
for k in (0.5, 1, 2, 3, 4, 6, 10):
    eps = k * sigma
    print(f"eps = {k:4.1f} sigma  bound = {cs_upper_bound(region, P, sigma, noise, eps):.6f}")

# ## Sweep over SNR

for db in range(20, 101, 10):
    bp = loss_lower_bound(region, P, sigma_from_db(db), noise)
    print(f"{db:4d} dB  eps*/sigma = {bp.eps_star / bp.sigma:6.3f}  loss >= {bp.loss_lower:+.4f}"
          f"  (limit {limit:.4f})")

# The Chebyshev tail is valid for any unit-power noise but much looser.

for db in (40, 80):
    s = sigma_from_db(db)
    exact = loss_lower_bound(region, P, s, noise).loss_lower
    cheb = loss_lower_bound(region, P, s, noise, tail="chebyshev").loss_lower
    print(db, "dB exact tail", round(exact, 4), " chebyshev", round(cheb, 4))
