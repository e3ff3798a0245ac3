"""Mutual information of finite constellations over Y = X + sigma W.

``gauss_hermite_mi`` integrates over circular Gaussian noise with a tensor
Gauss-Hermite rule. ``monte_carlo_mi`` works for any noise with a log-density
and serves as an independent check. All quantities are in nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .constellations import Constellation, qam
from .errors import UnsupportedNoise
from .noise import NoiseModel

__all__ = ["GhConfig", "RatePoint", "gaussian_capacity", "gauss_hermite_mi",
           "monte_carlo_mi", "sigma_from_db", "db_from_sigma", "qam_rate_curve"]

# Upper limit on the size of one (points x points x nodes) block.
_BLOCK = 4_000_000


def sigma_from_db(inv_sigma2_db: float) -> float:
    """Noise scale sigma for 1/sigma^2 given in dB."""
    return 10.0 ** (-inv_sigma2_db / 20.0)


def db_from_sigma(sigma: float) -> float:
    return -20.0 * math.log10(sigma)


@dataclass(frozen=True)
class GhConfig:
    nodes_per_dim: int = 20
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.nodes_per_dim < 2:
            raise ValueError("nodes_per_dim must be >= 2")
        x, w = np.polynomial.hermite.hermgauss(self.nodes_per_dim)
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class RatePoint:
    inv_sigma2_db: float
    rate: float
    loss_vs_gaussian: float


def gaussian_capacity(P: float, sigma: float) -> float:
    """log(1 + P / sigma^2)."""
    return math.log1p(P / sigma**2)


def _entropy(p):
    return -float(np.dot(p, np.log(p)))


def _correction(expo, logp, s):
    # log sum_j p_j e_ij = log p_i + softplus(log sum_{j != i} (p_j/p_i) e_ij), so that
    # I = H(X) - E[softplus(...)] and a saturated channel gives exactly H(X).
    rows = np.arange(expo.shape[0])
    expo[rows, s + rows, :] = -np.inf
    lse = logsumexp(expo - logp[s:s + rows.size, None, None], axis=1)
    return np.logaddexp(0.0, lse)


def _gh_1d(x, p, sigma, cfg):
    # terms exp(-d_ij^2 - 2 d_ij t), d_ij = (x_i - x_j)/sigma, with t ~ exp(-t^2)/sqrt(pi)
    keep = p > 0
    x, p = x[keep] / sigma, p[keep]
    t, w = cfg.nodes, cfg.weights / math.sqrt(math.pi)
    logp = np.log(p)
    n = x.size
    rows = max(1, _BLOCK // (n * t.size))
    acc = np.empty(n)
    for s in range(0, n, rows):
        d = x[s:s + rows, None] - x[None, :]  # (b, n)
        expo = -(d * d)[:, :, None] - 2.0 * d[:, :, None] * t[None, None, :] + logp[None, :, None]
        acc[s:s + rows] = _correction(expo, logp, s) @ w
    return _entropy(p) - float(np.dot(p, acc))


def _gh_2d(z, p, sigma, cfg):
    keep = p > 0
    z, p = z[keep] / sigma, p[keep]
    t = cfg.nodes
    w = (cfg.weights[:, None] * cfg.weights[None, :]).ravel() / math.pi
    u = (t[:, None] + 1j * t[None, :]).ravel()
    logp = np.log(p)
    n = z.size
    rows = max(1, _BLOCK // (n * u.size))
    acc = np.empty(n)
    for s in range(0, n, rows):
        d = z[s:s + rows, None] - z[None, :]
        # -|d + u|^2 + |u|^2 = -|d|^2 - 2 Re(d conj(u))
        expo = (-(np.abs(d) ** 2)[:, :, None]
                - 2.0 * (d.real[:, :, None] * u.real + d.imag[:, :, None] * u.imag)
                + logp[None, :, None])
        acc[s:s + rows] = _correction(expo, logp, s) @ w
    return _entropy(p) - float(np.dot(p, acc))


def gauss_hermite_mi(c: Constellation, sigma: float, cfg: GhConfig | None = None) -> float:
    """I(X;Y) in nats for circular Gaussian noise of scale ``sigma``.

    Product constellations split into two real channels with noise variance
    sigma^2/2 each, which reduces the cost from O(N^2 K^2) to O(N K).
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    cfg = cfg or GhConfig()
    if c.axes is not None:
        return sum(_gh_1d(x, p, sigma, cfg) for x, p in c.axes)
    return _gh_2d(c.points, c.probs, sigma, cfg)


def monte_carlo_mi(c: Constellation, sigma: float, noise: NoiseModel,
                   n_samples: int = 1_000_000, seed=0) -> tuple[float, float]:
    """Plug-in Monte Carlo estimate of I(X;Y) and its standard error.

    Each draw contributes log p(y|x) - log p(y) with the exact conditional
    density, so the estimator is unbiased.
    """
    if noise.logpdf is None:
        raise UnsupportedNoise(f"{noise.kind} noise has no log-density for Monte Carlo")
    if n_samples < 1000:
        raise ValueError("n_samples must be at least 1000")
    rng = np.random.default_rng(seed)
    pts, probs = c.points, c.probs
    keep = probs > 0
    pts, probs = pts[keep], probs[keep]
    idx = rng.choice(pts.size, size=n_samples, p=probs)
    w = noise.sample(n_samples, rng)
    logp = np.log(probs)
    terms = np.empty(n_samples)
    rows = max(1, _BLOCK // pts.size)
    for s in range(0, n_samples, rows):
        # (y - x_j)/sigma = w + (x_i - x_j)/sigma; the j = i offset is exactly zero
        ww = w[s:s + rows]
        shift = (pts[idx[s:s + rows], None] - pts[None, :]) / sigma
        ratio = noise.logpdf(ww[:, None] + shift) - noise.logpdf(ww)[:, None]
        terms[s:s + rows] = -logsumexp(ratio + logp[None, :], axis=1)
    mean = math.fsum(terms) / n_samples
    spread = math.fsum((terms - mean) ** 2) / (n_samples - 1)
    return mean, math.sqrt(spread / n_samples)


def qam_rate_curve(m: int, P: float, inv_sigma2_db, cfg: GhConfig | None = None) -> list[RatePoint]:
    """Rates of 2^m-QAM at power ``P`` and their gap to log(1 + P/sigma^2)."""
    c = qam(m, P)
    out = []
    for db in inv_sigma2_db:
        sigma = sigma_from_db(db)
        rate = gauss_hermite_mi(c, sigma, cfg)
        out.append(RatePoint(float(db), rate, gaussian_capacity(P, sigma) - rate))
    return out
