"""Unit-variance complex noise laws W.

Downstream code needs three facts about W: its differential entropy h(W),
the radial tail t -> Prob(|W| > t), and a way to draw samples. A log-density
is optional and only used by the Monte Carlo mutual-information estimator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = ["NoiseModel", "circular_gaussian", "custom_noise", "chebyshev_tail"]


def chebyshev_tail(t):
    """min(1, 1/t^2): tail bound valid for every unit-variance noise."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.minimum(1.0, 1.0 / (t * t))
    return float(out) if out.ndim == 0 else out


def _gaussian_tail(t):
    t = np.asarray(t, dtype=float)
    out = np.exp(-t * t)
    return float(out) if out.ndim == 0 else out


def _gaussian_sampler(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((2, n))
    return (z[0] + 1j * z[1]) * math.sqrt(0.5)


def _gaussian_logpdf(w):
    return -math.log(math.pi) - np.abs(w) ** 2


@dataclass(frozen=True)
class NoiseModel:
    kind: str
    h: float
    tail: Callable = field(repr=False)
    sampler: Callable[[np.random.Generator, int], np.ndarray] = field(repr=False)
    logpdf: Optional[Callable] = field(default=None, repr=False)

    def sample(self, n: int, seed=None) -> np.ndarray:
        """Draw ``n`` complex samples; same seed gives the same stream."""
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return np.asarray(self.sampler(rng, int(n)), dtype=complex)

    def check_moments(self, n: int = 1_000_000, seed=0, n_se: float = 3.0) -> bool:
        """Empirical check that E W = 0 and E|W|^2 = 1 within ``n_se`` standard errors."""
        w = self.sample(n, seed)
        p = np.abs(w) ** 2
        ok_power = abs(p.mean() - 1.0) <= n_se * p.std(ddof=1) / math.sqrt(n)
        se_mean = math.sqrt(p.mean() / n)
        ok_mean = abs(w.real.mean()) <= n_se * se_mean and abs(w.imag.mean()) <= n_se * se_mean
        return bool(ok_power and ok_mean)


def circular_gaussian() -> NoiseModel:
    """Standard circularly-symmetric complex Gaussian, E|W|^2 = 1."""
    return NoiseModel("CircularGaussian", math.log(math.pi * math.e), _gaussian_tail,
                      _gaussian_sampler, _gaussian_logpdf)


def custom_noise(h: float, sampler, tail=None, logpdf=None, validate: bool = True) -> NoiseModel:
    """Noise law given by its entropy, sampler and optionally its tail.

    Without a tail the Chebyshev bound is used, which keeps every bound valid
    but loose. With ``validate`` the sampler is checked for zero mean and unit
    power before the model is returned.
    """
    if not math.isfinite(h):
        raise ValueError("differential entropy must be finite")
    model = NoiseModel("Custom", float(h), tail if tail is not None else chebyshev_tail,
                       sampler, logpdf)
    if validate and not model.check_moments():
        raise ValueError("sampler is not centred with unit power")
    return model
