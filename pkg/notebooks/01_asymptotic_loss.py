# # Asymptotic capacity loss of bounded supports
#
# At high SNR the best input on a bounded region S under an average power
# constraint P is the tilted density exp(-lam |x|^2) restricted to S. The
# loss against Gaussian signalling is
#
#     L = log P + log(pi e) - log z0(lam) - lam P.
#
# This notebook evaluates L for a square, a disk and an arbitrary polygon.

import math

import numpy as np

from capacityloss import Disk, Polygon, Square, capacity_loss

# ## Uniform inputs
#
# When P is at least the uniform power of S the tilt vanishes and the input
# is uniform. The square gives the familiar 1.53 dB shaping loss, the disk
# 1.33 dB.

for region in (Square(1.0), Disk(1.0)):
    sol = capacity_loss(region, region.uniform_power())
    print(f"{type(region).__name__:7s} L = {sol.loss:.6f} nats = {sol.loss_db:.4f} dB")

print("log(pi e/6) =", math.log(math.pi * math.e / 6), " 1 - ln 2 =", 1 - math.log(2))

# ## Below the uniform power
#
# Lowering P activates the tilt and the optimal input bunches toward the
# origin. The loss then falls, since a strongly tilted input looks more and
# more like a truncated Gaussian.

sq = Square(1.0)
for frac in (1.0, 0.5, 0.2, 0.05, 0.01):
    sol = capacity_loss(sq, frac * sq.uniform_power())
    print(f"P/P_U = {frac:5.2f}  lam = {sol.lam:9.4f}  L = {sol.loss:.6f} nats")

# ## Polygons
#
# Any simple polygon containing the origin works. Here is an irregular
# pentagon.

poly = Polygon((2, 1 + 2j, -1 + 1j, -1.5 - 1j, 1 - 1j))
print("area", poly.area(), "uniform power", poly.uniform_power())
for frac in (1.0, 0.3):
    print(frac, capacity_loss(poly, frac * poly.uniform_power()).loss)

# Scaling the region by c and the power by c^2 leaves the loss unchanged.

print(capacity_loss(poly, 0.3 * poly.uniform_power()).loss,
      capacity_loss(poly.scaled(7.0), 49 * 0.3 * poly.uniform_power()).loss)

# ## Loss curve against power
#
# Above P_U the loss grows like log P since the uniform input can no longer
# use the extra power.

powers = np.geomspace(0.01, 10, 13)
for P in powers:
    print(f"{P:8.4f}  {capacity_loss(Disk(1.0), P).loss:.5f}")
