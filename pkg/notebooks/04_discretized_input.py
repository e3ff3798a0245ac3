# # Discretising the max-entropy input
#
# A step-function approximation of the optimal density on a 64 x 64 grid is
# a finite constellation. When the grid spacing is comparable to sigma its
# rate minus log(1/sigma^2) approaches h(X*) - h(W).

import math

from capacityloss import Disk, Square, capacity_loss, discretize_fstar, gauss_hermite_mi
from capacityloss.mi import sigma_from_db

sigma = sigma_from_db(60)
for a in (0.02, 0.05, 0.1, 0.5):
    region = Square(a)
    sol = capacity_loss(region, region.uniform_power())
    xn = discretize_fstar(region, sol, 64)
    rate = gauss_hermite_mi(xn, sigma)
    gap = (rate - math.log(1 / sigma**2)) - (sol.entropy - math.log(math.pi * math.e))
    print(f"A = {a:5.2f}  spacing/sigma = {2 * a / 64 / sigma:6.2f}  gap = {gap:+.4f} nats")

# With a coarse grid the rate saturates at log(64^2) and the gap is negative.
# With a fine grid the noise smooths the step density, and since
# h(X + sigma W) >= h(X) the gap is positive, shrinking as sigma/A -> 0.

# ## Tilted inputs on a disk
#
# Non-square regions use a full 2-D grid of cells; centres outside the region
# are pulled onto it.

disk = Disk(0.05)
sol = capacity_loss(disk, 0.4 * disk.uniform_power())
xn = discretize_fstar(disk, sol, 32)
print(len(xn), "points, power", xn.power, "target", 0.4 * disk.uniform_power())
