"""Upper bound on the support-constrained capacity at finite noise level.

For a fixed neighbourhood radius eps the bound on C_S(P, sigma) is

    -h(W) + log(1/sigma^2) + lam (P + sigma^2) + log K
      + log+(pi^2 sigma^2) q + (q/2) log(1 + P/sigma^2)
      + q log(1 + P/sigma^2 + q) + xlogx_term(q)

where q = Prob(sigma |W| > eps), K is the arctangent bound on the
normaliser of the auxiliary output density, and the last term is
-(3/2) q log q for q <= 1/e and 3/(2e) otherwise. The bound is minimised over
eps and subtracted from log(1 + P/sigma^2) to lower-bound the loss L(sigma).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedNoise
from .maxent import solve_lambda
from .noise import NoiseModel, chebyshev_tail
from .regions import Region

__all__ = ["BoundPoint", "k_eps_sigma_upper", "cs_upper_bound", "loss_lower_bound",
           "loss_lower_bound_sweep", "EPS_GRID_POINTS", "EPS_RTOL"]

EPS_GRID_POINTS = 200
EPS_RTOL = 1e-6
EPS_LO_FACTOR = 1e-3
EPS_HI_FACTOR = 1e3
_INV_E = math.exp(-1.0)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BoundPoint:
    sigma: float
    eps_star: float
    cs_upper: float
    cc: float
    loss_lower: float
    eps_at_boundary: bool = False

    @property
    def inv_sigma2_db(self) -> float:
        return -20.0 * math.log10(self.sigma)


def k_eps_sigma_upper(region: Region, lam: float, eps: float, sigma: float) -> float:
    """Bound on the auxiliary normaliser: neighbourhood integral + 1 - (2/pi) atan(eps/sigma)."""
    if not (eps > 0 and sigma > 0):
        raise ValueError("eps and sigma must be positive")
    # 1 - (2/pi) atan(u) = (2/pi) atan(1/u), kept accurate for large u
    tail_mass = 2.0 / math.pi * math.atan(sigma / eps)
    return region.epsilon_neighborhood_integral(eps, lam) + tail_mass


def _tail_prob(noise: NoiseModel, t: float, tail: str) -> float:
    if tail == "chebyshev":
        return float(chebyshev_tail(t))
    if tail != "exact":
        raise ValueError(f"tail must be 'exact' or 'chebyshev', got {tail!r}")
    return float(noise.tail(t))


def cs_upper_bound(region: Region, P: float, sigma: float, noise: NoiseModel, eps: float,
                   lam: float | None = None, tail: str = "exact") -> float:
    """Upper bound on C_S(P, sigma) in nats for one neighbourhood radius ``eps``."""
    if not (P > 0 and sigma > 0 and eps > 0):
        raise ValueError("P, sigma and eps must be positive")
    if lam is None:
        lam = solve_lambda(region, P)
    q = _tail_prob(noise, eps / sigma, tail)
    snr = P / sigma**2
    value = (-noise.h - 2.0 * math.log(sigma) + lam * (P + sigma**2)
             + math.log(k_eps_sigma_upper(region, lam, eps, sigma)))
    value += max(0.0, math.log(math.pi**2 * sigma**2)) * q
    value += 0.5 * q * math.log1p(snr)
    value += q * math.log1p(snr + q)
    if q <= _INV_E:
        value += -1.5 * q * math.log(q) if q > 0 else 0.0
    else:
        value += 1.5 / math.e
    return value


def _golden(f, a: float, b: float, rtol: float):
    """Golden-section minimisation of ``f`` on [a, b] (a, b are log eps)."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    # relative tolerance in eps is an absolute tolerance in log eps
    while b - a > rtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def loss_lower_bound(region: Region, P: float, sigma: float, noise: NoiseModel,
                     tail: str = "exact", grid_points: int = EPS_GRID_POINTS,
                     rtol: float = EPS_RTOL) -> BoundPoint:
    """Lower bound on L(sigma) = C_C(P, sigma) - C_S(P, sigma) for Gaussian noise.

    The eps-search scans ``grid_points`` log-spaced radii on
    [1e-3 sigma, 1e3 diam(S)] and refines the best cell by golden section.
    The result may be negative at low SNR, where the bound is vacuous.
    """
    if noise.kind != "CircularGaussian":
        raise UnsupportedNoise("the ambient capacity log(1 + P/sigma^2) needs Gaussian noise")
    lam = solve_lambda(region, P)
    lo = math.log(sigma * EPS_LO_FACTOR)
    hi = math.log(region.diameter * EPS_HI_FACTOR)

    def objective(log_eps):
        return cs_upper_bound(region, P, sigma, noise, math.exp(log_eps), lam=lam, tail=tail)

    grid = np.linspace(lo, hi, grid_points)
    vals = np.array([objective(g) for g in grid])
    k = int(np.argmin(vals))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, grid_points - 1)]
    log_eps, best = _golden(objective, a, b, rtol)
    if vals[k] < best:
        log_eps, best = grid[k], vals[k]
    cc = math.log1p(P / sigma**2)
    return BoundPoint(sigma=sigma, eps_star=math.exp(log_eps), cs_upper=best, cc=cc,
                      loss_lower=cc - best, eps_at_boundary=k in (0, grid_points - 1))


def loss_lower_bound_sweep(region: Region, P: float, sigmas, noise: NoiseModel,
                           tail: str = "exact", jobs: int = 1) -> list[BoundPoint]:
    """``loss_lower_bound`` over several noise levels, returned in input order."""
    def one(s):
        return loss_lower_bound(region, P, float(s), noise, tail=tail)

    if jobs <= 1:
        return [one(s) for s in sigmas]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, sigmas))
