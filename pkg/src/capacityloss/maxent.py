"""Maximum-entropy inputs on a support region and the asymptotic capacity loss.

Among densities supported on S with E|X|^2 <= P, entropy is maximised by

    f(x) = exp(-lam |x|^2) / z0(lam)   on S,

with lam = 0 when P is at least the uniform power P_U and otherwise the
unique lam > 0 whose tilted power m2/z0 equals P. The high-SNR capacity
loss with respect to an unconstrained input is then

    L = log P + log(pi e) - log z0(lam) - lam P      [nats].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import NoBracket
from .regions import Region

__all__ = ["MaxEntSolution", "solve_lambda", "capacity_loss", "fstar_density",
           "nats_to_db", "LOG_PI_E"]

LOG_PI_E = math.log(math.pi * math.e)
LAMBDA_CAP = 1e12
RESIDUAL_RTOL = 1e-10


def nats_to_db(loss: float) -> float:
    """SNR penalty in dB equivalent to a high-SNR rate gap of ``loss`` nats."""
    return 10.0 * loss / math.log(10.0)


@dataclass(frozen=True)
class MaxEntSolution:
    lam: float
    z0: float
    power_constraint: float
    effective_power: float
    entropy: float
    loss: float
    loss_db: float
    uniform_power: float

    @property
    def loss_bits(self) -> float:
        return self.loss / math.log(2.0)


def solve_lambda(region: Region, P: float) -> float:
    """Tilt ``lam`` such that the tilted power of ``region`` equals ``P``.

    Returns 0 when ``P >= uniform_power(region)``. Raises NoBracket if
    ``P <= 0`` or the root lies beyond ``LAMBDA_CAP``.
    """
    if not P > 0 or not math.isfinite(P):
        raise NoBracket(f"power constraint must be positive and finite, got {P}")
    if P >= region.uniform_power():
        return 0.0

    def excess(lam):
        return region.moments(lam).power - P

    hi = 1.0
    while excess(hi) > 0:
        hi *= 2.0
        if hi > LAMBDA_CAP:
            raise NoBracket(f"tilt exceeds {LAMBDA_CAP:g} for P={P:g}; regime outside numeric range")
    lo = hi / 2.0 if hi > 1.0 else 0.0
    lam = optimize.brentq(excess, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    resid = abs(excess(lam))
    if resid > RESIDUAL_RTOL * P:
        # brentq stops on the bracket width; finish with bisection on the sign.
        a, b = lo, hi
        for _ in range(200):
            m = 0.5 * (a + b)
            if excess(m) > 0:
                a = m
            else:
                b = m
            if b - a <= 4 * np.finfo(float).eps * b:
                break
        lam = min((a, b), key=lambda x: abs(excess(x)))
        resid = abs(excess(lam))
        if resid > RESIDUAL_RTOL * P:
            raise NoBracket(f"tilt residual {resid:g} above tolerance for P={P:g}")
    return float(lam)


def capacity_loss(region: Region, P: float) -> MaxEntSolution:
    """Asymptotic capacity loss of ``region`` under average power ``P``."""
    lam = solve_lambda(region, P)
    mom = region.moments(lam)
    p_u = region.uniform_power()
    eff = min(P, p_u)
    loss = math.log(P) + LOG_PI_E - math.log(mom.z0) - lam * P
    return MaxEntSolution(
        lam=lam,
        z0=mom.z0,
        power_constraint=P,
        effective_power=eff,
        entropy=math.log(mom.z0) + lam * eff,
        loss=loss,
        loss_db=nats_to_db(loss),
        uniform_power=p_u,
    )


def fstar_density(region: Region, sol: MaxEntSolution, x):
    """Max-entropy density at ``x`` (scalar or array), zero outside the region."""
    x = np.asarray(x, dtype=complex)
    val = np.where(region.contains(x), np.exp(-sol.lam * np.abs(x) ** 2) / sol.z0, 0.0)
    return float(val) if val.ndim == 0 else val
