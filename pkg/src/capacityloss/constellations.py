"""Finite channel-input ensembles: square QAM and discretised max-entropy inputs."""
from __future__ import annotations

import io
import math
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import EmptyIntersection, InvalidOrder
from .maxent import MaxEntSolution
from .regions import Region, Square

__all__ = ["Constellation", "qam", "discretize_fstar"]


class Constellation:
    """Finite set of complex points with probabilities.

    ``axes`` optionally records that the ensemble is a product of independent
    real and imaginary parts, as ``((re_levels, re_probs), (im_levels, im_probs))``;
    points and probs are then generated on demand in row-major order
    (real index outer). Mutual-information routines use the product form to
    work per dimension.
    """

    def __init__(self, points=None, probs=None, axes=None, region: Optional[Region] = None):
        if axes is not None:
            (xr, pr), (xi, pi) = axes
            axes = tuple((np.asarray(x, dtype=float), np.asarray(p, dtype=float) / np.sum(p))
                         for x, p in ((xr, pr), (xi, pi)))
            if any(len(x) != len(p) or len(x) == 0 for x, p in axes):
                raise ValueError("axis levels and probabilities must have equal nonzero length")
            if any(np.any(p < 0) for _, p in axes):
                raise ValueError("probabilities must be nonnegative")
        else:
            points = np.atleast_1d(np.asarray(points, dtype=complex))
            probs = (np.full(points.shape, 1.0 / points.size) if probs is None
                     else np.atleast_1d(np.asarray(probs, dtype=float)))
            if points.shape != probs.shape or points.size == 0:
                raise ValueError("points and probs must have equal nonzero length")
            if np.any(probs < 0):
                raise ValueError("probabilities must be nonnegative")
            if abs(probs.sum() - 1.0) > 1e-12:
                raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
            self.__dict__["points"] = points
            self.__dict__["probs"] = probs
        self.axes = axes
        self.region = region
        if region is not None and not np.all(region.contains(self.points)):
            raise ValueError("constellation has points outside its region")

    @cached_property
    def points(self) -> np.ndarray:
        (xr, _), (xi, _) = self.axes
        return (xr[:, None] + 1j * xi[None, :]).ravel()

    @cached_property
    def probs(self) -> np.ndarray:
        (_, pr), (_, pi) = self.axes
        return (pr[:, None] * pi[None, :]).ravel()

    def __len__(self) -> int:
        if self.axes is not None:
            return len(self.axes[0][0]) * len(self.axes[1][0])
        return self.points.size

    @property
    def power(self) -> float:
        """Average power sum_i p_i |x_i|^2."""
        if self.axes is not None:
            return float(sum(np.dot(p, x * x) for x, p in self.axes))
        return float(np.dot(self.probs, np.abs(self.points) ** 2))

    def entropy(self) -> float:
        """Entropy of the point distribution in nats."""
        p = self.probs[self.probs > 0]
        return float(-np.dot(p, np.log(p)))

    def to_csv(self, fh=None) -> str:
        """Write rows ``re,im,prob`` after a ``# power=<value>`` comment."""
        buf = io.StringIO()
        buf.write(f"# power={self.power!r}\n")
        buf.write("re,im,prob\n")
        for z, p in zip(self.points, self.probs):
            buf.write(f"{float(z.real)!r},{float(z.imag)!r},{float(p)!r}\n")
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    @classmethod
    def from_csv(cls, text: str) -> "Constellation":
        rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        data = np.array([[float(v) for v in ln.split(",")] for ln in rows[1:]])
        probs = data[:, 2] / data[:, 2].sum()
        return cls(data[:, 0] + 1j * data[:, 1], probs)


def qam(m: int, target_power: float) -> Constellation:
    """Equiprobable square 2^m-QAM on odd-integer levels scaled to ``target_power``."""
    if int(m) != m or m % 2 or not 2 <= m <= 24:
        raise InvalidOrder(f"square QAM needs even m in [2, 24], got {m}")
    if not target_power > 0:
        raise ValueError("target_power must be positive")
    side = 2 ** (int(m) // 2)
    levels = np.arange(-(side - 1), side, 2, dtype=float)
    levels *= math.sqrt(target_power / (2.0 * (side * side - 1) / 3.0))
    probs = np.full(side, 1.0 / side)
    return Constellation(axes=((levels, probs), (levels, probs)))


def discretize_fstar(region: Region, sol: MaxEntSolution, n_per_axis: int,
                     subgrid: int = 8) -> Constellation:
    """Step-function approximation of the max-entropy input on ``region``.

    The bounding box is split into ``n_per_axis**2`` cells. Each cell's mass
    is the midpoint-rule integral of the density over a ``subgrid**2``
    refinement of the cell, and the mass is placed at the cell centre, or at
    its radial projection onto the region when the centre lies outside.
    Probabilities are renormalised; the power is whatever results.
    """
    if n_per_axis < 2:
        raise ValueError("n_per_axis must be >= 2")
    x0, x1, y0, y1 = region.bounding_box()
    n, k = int(n_per_axis), int(subgrid)
    hx, hy = (x1 - x0) / n, (y1 - y0) / n
    cx = x0 + hx * (np.arange(n) + 0.5)
    cy = y0 + hy * (np.arange(n) + 0.5)
    off = (np.arange(k) + 0.5) / k - 0.5

    if isinstance(region, Square):
        # The density and the indicator factor, so the ensemble is a product.
        def axis(c, h):
            sub = c[:, None] + h * off[None, :]
            return np.exp(-sol.lam * sub * sub).sum(axis=1)
        return Constellation(axes=((cx, axis(cx, hx)), (cy, axis(cy, hy))), region=region)

    sx = (cx[:, None] + hx * off[None, :]).ravel()
    sy = (cy[:, None] + hy * off[None, :]).ravel()
    sub = sx[:, None] + 1j * sy[None, :]  # (n*k, n*k)
    dens = np.where(region.contains(sub), np.exp(-sol.lam * np.abs(sub) ** 2), 0.0)
    w = dens.reshape(n, k, n, k).sum(axis=(1, 3))
    centres = cx[:, None] + 1j * cy[None, :]
    keep = w > 0
    if not np.any(keep):
        raise EmptyIntersection("no discretisation cell intersects the region")
    pts = region.project(centres[keep])
    probs = w[keep] / w[keep].sum()
    return Constellation(pts, probs, region=region)
