"""Bounded support regions S in the complex plane.

Every region exposes its area, the uniform-input power, the tilted moments

    z0(lam) = int_S exp(-lam |x|^2) dx,   m2(lam) = int_S exp(-lam |x|^2) |x|^2 dx,

and an upper bound on the tilted integral over the eps-neighbourhood S_eps.
Square and disk use closed forms; polygons are integrated by a fan of
triangles anchored at the origin, which reduces every integrand to a smooth
one-dimensional angular integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from .errors import InvalidRegion, QuadratureFailure

__all__ = [
    "Region", "Square", "Disk", "Polygon", "RegionMoments",
    "area", "uniform_power", "moments", "epsilon_neighborhood_integral",
    "region_from_dict", "region_to_dict",
]

# Below this value of lam * |x|^2 the exponential closed forms are replaced by
# their Taylor series.
SMALL_TILT = 1e-6
QUAD_RTOL = 1e-10
QUAD_BUDGET = 10_000_000

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
# projected points are pulled in by a few ulps so they test as inside
_INWARD = 1.0 - 4 * np.finfo(float).eps


def _psi(a: float, t):
    """Return gamma_lower(a, t) / t**a, finite and cancellation-free at t = 0.

    This is the kernel of every tilted moment: for instance
    int_0^rho r^(2k+1) exp(-lam r^2) dr = rho^(2k+2) / 2 * _psi(k + 1, lam rho^2).
    """
    t_arr = np.asarray(t, dtype=float)
    out = np.empty_like(t_arr)
    small = t_arr < SMALL_TILT
    ts = t_arr[small]
    out[small] = 1.0 / a - ts / (a + 1.0) + ts * ts / (2.0 * (a + 2.0))
    tl = t_arr[~small]
    out[~small] = special.gammainc(a, tl) * special.gamma(a) / tl**a
    return out if out.ndim else float(out)


def _half_line(x, lam):
    """int_0^x exp(-lam u^2) du (odd in x)."""
    x = np.asarray(x, dtype=float)
    return 0.5 * x * _psi(0.5, lam * x * x)


def _segment(lo, hi, lam, length=None):
    """int_lo^hi exp(-lam u^2) du, accurate also for short or far-out intervals.

    ``length`` may pass hi - lo exactly when it is known more accurately than
    the rounded difference.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    width = hi - lo if length is None else np.broadcast_to(np.asarray(length, dtype=float), lo.shape)
    out = np.empty(lo.shape)
    # short: the exponent varies by at most 1, Gauss-Legendre is exact to roundoff
    short = lam * width * (np.abs(lo) + np.abs(hi)) <= 1.0
    half = 0.5 * width[short]
    mid = lo[short] + half
    u = mid[..., None] + half[..., None] * _GL_X
    out[short] = half * (np.exp(-lam * u * u) @ _GL_W)
    rest = ~short
    if np.any(rest):
        a, b = lo[rest], hi[rest]
        flip = b <= 0
        a, b = np.where(flip, -b, a), np.where(flip, -a, b)
        root = math.sqrt(lam) if lam > 0 else 1.0
        tails = 0.5 * math.sqrt(math.pi) / root * (special.erfc(a * root) - special.erfc(b * root))
        out[rest] = np.where(a >= 0, tails, _half_line(b, lam) - _half_line(a, lam))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class RegionMoments:
    """Tilted zeroth and second moments of a region at tilt ``lam``."""

    lam: float
    z0: float
    m2: float

    @property
    def power(self) -> float:
        """Second moment of the tilted density, m2 / z0."""
        return self.m2 / self.z0


class Region:
    """Base class for support regions. Subclasses are frozen dataclasses."""

    def area(self) -> float:
        raise NotImplementedError

    def second_moment(self) -> float:
        """int_S |x|^2 dx."""
        return self.moments(0.0).m2

    def uniform_power(self) -> float:
        return self.second_moment() / self.area()

    def moments(self, lam: float) -> RegionMoments:
        raise NotImplementedError

    def epsilon_neighborhood_integral(self, eps: float, lam: float) -> float:
        raise NotImplementedError

    def contains(self, z):
        raise NotImplementedError

    def project(self, z):
        """Move points outside S radially towards the origin onto the boundary."""
        raise NotImplementedError

    def scaled(self, c: float) -> "Region":
        raise NotImplementedError

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax)."""
        raise NotImplementedError

    @property
    def sup_abs2(self) -> float:
        """sup over S of |x|^2."""
        raise NotImplementedError

    @property
    def diameter(self) -> float:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def _check_args(eps=None, lam=0.0):
    if lam < 0 or not math.isfinite(lam):
        raise ValueError(f"tilt must be finite and >= 0, got {lam}")
    if eps is not None and not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")


@dataclass(frozen=True)
class Square(Region):
    """Square {|Re x| <= A, |Im x| <= A}."""

    half_side: float

    def __post_init__(self):
        if not (self.half_side > 0 and math.isfinite(self.half_side)):
            raise InvalidRegion(f"half_side must be positive, got {self.half_side}")

    def area(self) -> float:
        return 4.0 * self.half_side**2

    def uniform_power(self) -> float:
        return 2.0 * self.half_side**2 / 3.0

    def moments(self, lam: float) -> RegionMoments:
        _check_args(lam=lam)
        a = self.half_side
        t = lam * a * a
        g0 = a * _psi(0.5, t)  # int_{-A}^{A} exp(-lam u^2) du
        g2 = a**3 * _psi(1.5, t)  # int_{-A}^{A} u^2 exp(-lam u^2) du
        return RegionMoments(lam, g0 * g0, 2.0 * g0 * g2)

    def epsilon_neighborhood_integral(self, eps: float, lam: float) -> float:
        # Minkowski sum of the square and a disk of radius eps: a cross of
        # three rectangles plus four quarter disks centred at the corners.
        _check_args(eps, lam)
        a = self.half_side
        inner = 2.0 * _half_line(a, lam)
        outer = 2.0 * _half_line(a + eps, lam)
        cross = outer * inner + 2.0 * inner * _segment(a, a + eps, lam, length=eps)

        # Quarter disk at corner (A, A), sliced along u = eps sin(phi) so the
        # integrand stays smooth at the rim.
        def corner_slice(phi, _):
            u, h = eps * np.sin(phi), eps * np.cos(phi)
            val = eps * np.cos(phi) * np.exp(-lam * (a + u) ** 2) * _segment(a, a + h, lam, length=h)
            return val[..., None]

        corner = _adaptive_panels(corner_slice, [0.0], [0.5 * math.pi], [0.0])[0]
        return float(cross + 4.0 * corner)

    def contains(self, z):
        z = np.asarray(z)
        return (np.abs(z.real) <= self.half_side) & (np.abs(z.imag) <= self.half_side)

    def project(self, z):
        z = np.asarray(z, dtype=complex)
        m = np.maximum(np.abs(z.real), np.abs(z.imag))
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(m > self.half_side, self.half_side / m * _INWARD, 1.0)
        return z * s

    def scaled(self, c: float) -> "Square":
        return Square(self.half_side * c)

    def bounding_box(self):
        a = self.half_side
        return (-a, a, -a, a)

    @property
    def sup_abs2(self) -> float:
        return 2.0 * self.half_side**2

    @property
    def diameter(self) -> float:
        return 2.0 * math.sqrt(2.0) * self.half_side

    def to_dict(self) -> dict:
        return {"shape": "square", "half_side": self.half_side}


@dataclass(frozen=True)
class Disk(Region):
    """Disk {|x| <= R}."""

    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise InvalidRegion(f"radius must be positive, got {self.radius}")

    def area(self) -> float:
        return math.pi * self.radius**2

    def uniform_power(self) -> float:
        return self.radius**2 / 2.0

    def moments(self, lam: float) -> RegionMoments:
        _check_args(lam=lam)
        r2 = self.radius**2
        t = lam * r2
        return RegionMoments(lam, math.pi * r2 * _psi(1.0, t), math.pi * r2 * r2 * _psi(2.0, t))

    def epsilon_neighborhood_integral(self, eps: float, lam: float) -> float:
        _check_args(eps, lam)
        return Disk(self.radius + eps).moments(lam).z0

    def contains(self, z):
        return np.abs(np.asarray(z)) <= self.radius

    def project(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(r > self.radius, self.radius / r * _INWARD, 1.0)
        return z * s

    def scaled(self, c: float) -> "Disk":
        return Disk(self.radius * c)

    def bounding_box(self):
        r = self.radius
        return (-r, r, -r, r)

    @property
    def sup_abs2(self) -> float:
        return self.radius**2

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def to_dict(self) -> dict:
        return {"shape": "disk", "radius": self.radius}


def _cross(a, b):
    return a.real * b.imag - a.imag * b.real


def _segments_intersect(p1, p2, q1, q2) -> bool:
    d1 = _cross(q2 - q1, p1 - q1)
    d2 = _cross(q2 - q1, p2 - q1)
    d3 = _cross(p2 - p1, q1 - p1)
    d4 = _cross(p2 - p1, q2 - p1)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True

    def on_segment(a, b, c):
        return (min(a.real, b.real) <= c.real <= max(a.real, b.real)
                and min(a.imag, b.imag) <= c.imag <= max(a.imag, b.imag))

    return ((d1 == 0 and on_segment(q1, q2, p1)) or (d2 == 0 and on_segment(q1, q2, p2))
            or (d3 == 0 and on_segment(p1, p2, q1)) or (d4 == 0 and on_segment(p1, p2, q2)))


def _segment_distance(z, a, b):
    """Distance from points z to the segment [a, b]."""
    e = b - a
    t = np.clip(((z - a) * np.conj(e)).real / abs(e) ** 2, 0.0, 1.0)
    return np.abs(z - (a + t * e))


@dataclass(frozen=True)
class Polygon(Region):
    """Simple polygon given by its vertices.

    Vertices may be complex numbers or (re, im) pairs. Clockwise input is
    reoriented. The polygon must be simple, have positive area and contain
    the origin (boundary counts as inside).
    """

    vertices: tuple

    def __post_init__(self):
        v = [complex(p) if not isinstance(p, (list, tuple)) else complex(p[0], p[1])
             for p in self.vertices]
        if len(v) >= 2 and v[0] == v[-1]:
            v = v[:-1]
        if len(v) < 3:
            raise InvalidRegion("polygon needs at least 3 vertices")
        if any(not (math.isfinite(p.real) and math.isfinite(p.imag)) for p in v):
            raise InvalidRegion("polygon vertices must be finite")
        n = len(v)
        if any(v[i] == v[(i + 1) % n] for i in range(n)):
            raise InvalidRegion("polygon has repeated consecutive vertices")
        signed = 0.5 * sum(_cross(v[i], v[(i + 1) % n]) for i in range(n))
        if signed < 0:
            v = v[::-1]
        elif signed == 0:
            raise InvalidRegion("polygon has zero area")
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                    raise InvalidRegion("polygon is not simple")
        object.__setattr__(self, "vertices", tuple(v))
        if not bool(self.contains(0j)):
            raise InvalidRegion("polygon does not contain the origin")

    @property
    def _v(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=complex)

    def _edges(self):
        v = self._v
        return v, np.roll(v, -1)

    def area(self) -> float:
        a, b = self._edges()
        return float(0.5 * np.sum(_cross(a, b)))

    def moments(self, lam: float) -> RegionMoments:
        _check_args(lam=lam)
        z0, m2 = self._fan_integral(lam)
        return RegionMoments(lam, z0, m2)

    def _fan_integral(self, lam: float):
        # int_S g(|x|) dx = sum over edges of the signed integral over the
        # triangle (0, a, b); in polar coordinates the radial part is closed
        # form and the angle runs over (-pi/2, pi/2) around the foot of the
        # perpendicular from the origin to the edge's line.
        a, b = self._edges()
        e = b - a
        scale = float(np.max(np.abs(self._v)))
        cr = _cross(a, b)
        keep = np.abs(cr) > 1e-14 * scale * scale
        a, e = a[keep], e[keep]
        t = -(np.conj(a) * e).real / np.abs(e) ** 2
        foot = a + t * e
        d = np.abs(foot)
        phi = np.angle(foot)
        lo = np.angle(a * np.exp(-1j * phi))
        hi = np.angle((a + e) * np.exp(-1j * phi))

        def radial(alpha, dist):
            rho2 = (dist / np.cos(alpha)) ** 2
            tt = lam * rho2
            return np.stack([0.5 * rho2 * _psi(1.0, tt), 0.5 * rho2 * rho2 * _psi(2.0, tt)], axis=-1)

        return _adaptive_panels(radial, lo, hi, d)

    def epsilon_neighborhood_integral(self, eps: float, lam: float) -> float:
        # Two valid upper bounds, the smaller is returned: the eps-inflated
        # bounding box, and S plus one eps-stadium per edge weighted by the
        # largest value of exp(-lam |y|^2) on that stadium. The second tends
        # to int_S exp(-lam |y|^2) dy as eps -> 0.
        _check_args(eps, lam)
        x0, x1, y0, y1 = self.bounding_box()
        box = _segment(x0 - eps, x1 + eps, lam) * _segment(y0 - eps, y1 + eps, lam)
        a, b = self._edges()
        lengths = np.abs(b - a)
        near = np.array([_segment_distance(0j, a[i], b[i]) for i in range(len(a))])
        gap = np.maximum(near - eps, 0.0)
        stadium = np.sum((2.0 * lengths * eps + math.pi * eps * eps) * np.exp(-lam * gap * gap))
        return float(min(box, self.moments(lam).z0 + stadium))

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        a, b = self._edges()
        inside = np.zeros(z.shape, dtype=bool)
        on_edge = np.zeros(z.shape, dtype=bool)
        tol = 1e-12 * float(np.max(np.abs(self._v)))
        for p, q in zip(a, b):
            straddle = (p.imag > z.imag) != (q.imag > z.imag)
            with np.errstate(divide="ignore", invalid="ignore"):
                xcross = p.real + (z.imag - p.imag) * (q.real - p.real) / (q.imag - p.imag)
            inside ^= straddle & (z.real < xcross)
            on_edge |= _segment_distance(z, p, q) <= tol
        return inside | on_edge

    def project(self, z):
        z = np.asarray(z, dtype=complex)
        out = z.copy()
        outside = ~self.contains(z)
        if not np.any(outside):
            return out
        zo = z[outside]
        a, b = self._edges()
        s_min = np.ones(zo.shape)
        for p, q in zip(a, b):
            # Solve s*z = p + u*(q - p) for s in (0, 1], u in [0, 1].
            e = q - p
            den = _cross(zo, e)
            with np.errstate(divide="ignore", invalid="ignore"):
                s = _cross(p, e) / den
                u = _cross(p, zo) / den
            ok = (den != 0) & (s > 0) & (s <= 1) & (u >= 0) & (u <= 1)
            s_min = np.where(ok & (s < s_min), s, s_min)
        out[outside] = zo * s_min
        return out

    def scaled(self, c: float) -> "Polygon":
        return Polygon(tuple(c * p for p in self.vertices))

    def bounding_box(self):
        v = self._v
        return (float(v.real.min()), float(v.real.max()), float(v.imag.min()), float(v.imag.max()))

    @property
    def sup_abs2(self) -> float:
        return float(np.max(np.abs(self._v) ** 2))

    @property
    def diameter(self) -> float:
        v = self._v
        return float(np.max(np.abs(v[:, None] - v[None, :])))

    def to_dict(self) -> dict:
        return {"shape": "polygon", "vertices": [[p.real, p.imag] for p in self.vertices]}


def _adaptive_panels(f, lo, hi, param, rtol=QUAD_RTOL, budget=QUAD_BUDGET):
    """Sum of int_{lo_i}^{hi_i} f(x, param_i) dx by adaptive Gauss-Legendre.

    ``f`` maps (x, param) arrays of equal shape to shape (..., k). Each panel
    is compared against its two halves; a panel is accepted once the halves
    agree with it to ``rtol``. Returns a length-k array.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    param = np.asarray(param, dtype=float)

    def rule(a, b, p):
        half = 0.5 * (b - a)
        x = 0.5 * (a + b)[:, None] + half[:, None] * _GL_X[None, :]
        vals = f(x, np.broadcast_to(p[:, None], x.shape))
        return half[:, None] * np.einsum("j,ijk->ik", _GL_W, vals)

    coarse = rule(lo, hi, param)
    floor = 1e-3 * rtol * float(np.max(np.abs(coarse.sum(axis=0))) + 1e-300)
    total = np.zeros(coarse.shape[1])
    evals = len(lo) * len(_GL_X)
    while len(lo):
        mid = 0.5 * (lo + hi)
        left = rule(lo, mid, param)
        right = rule(mid, hi, param)
        fine = left + right
        evals += 2 * len(lo) * len(_GL_X)
        err = np.max(np.abs(fine - coarse), axis=1)
        done = err <= np.maximum(rtol * np.max(np.abs(fine), axis=1), floor)
        done |= (hi - lo) < 1e-12
        total += fine[done].sum(axis=0)
        keep = ~done
        if evals > budget:
            raise QuadratureFailure(f"quadrature budget of {budget} evaluations exhausted")
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        param = np.concatenate([param[keep], param[keep]])
        coarse = np.concatenate([left[keep], right[keep]])
    return total


def area(region: Region) -> float:
    """Lebesgue measure of the region."""
    return region.area()


def uniform_power(region: Region) -> float:
    """Average power of the uniform distribution on the region."""
    return region.uniform_power()


def moments(region: Region, lam: float) -> RegionMoments:
    """Tilted moments z0 and m2 at tilt ``lam >= 0``."""
    return region.moments(lam)


def epsilon_neighborhood_integral(region: Region, eps: float, lam: float) -> float:
    """Upper bound on int_{S_eps} exp(-lam |y|^2) dy, tight as eps -> 0."""
    return region.epsilon_neighborhood_integral(eps, lam)


def region_from_dict(data: dict) -> Region:
    """Build a region from its JSON form, e.g. ``{"shape": "disk", "radius": 1}``."""
    shape = data.get("shape")
    try:
        if shape == "square":
            return Square(float(data["half_side"]))
        if shape == "disk":
            return Disk(float(data["radius"]))
        if shape == "polygon":
            verts: Sequence = data["vertices"]
            return Polygon(tuple(complex(float(p[0]), float(p[1])) for p in verts))
    except KeyError as exc:
        raise InvalidRegion(f"missing field {exc} for shape {shape!r}") from None
    raise InvalidRegion(f"unknown shape {shape!r}")


def region_to_dict(region: Region) -> dict:
    return region.to_dict()
