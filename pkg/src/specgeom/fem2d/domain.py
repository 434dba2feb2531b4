"""Planar convex domains described by a boundary sampler."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from ..errors import DomainError

TWO_PI = 2.0 * math.pi
_CONVEX_TOL = 1e-12


@dataclass(frozen=True)
class ConvexDomain2D:
    """Convex planar domain with a counterclockwise boundary ``sampler(theta)``.

    ``sampler`` maps an array of parameters in ``[0, 2 pi)`` to an ``(n, 2)``
    array of boundary points.  ``corners`` lists parameters that must become
    mesh vertices (polygon vertices, chord end points).  Polygons carry their
    vertex list so that metrics are exact.
    """

    sampler: Callable[[np.ndarray], np.ndarray]
    corners: tuple[float, ...] = ()
    vertices: np.ndarray | None = None
    derivative: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = "domain"
    convex: bool = field(default=True)

    def __post_init__(self):
        if self.convex:
            check_convex(self)

    @property
    def is_polygon(self) -> bool:
        return self.vertices is not None

    def points(self, theta) -> np.ndarray:
        theta = np.mod(np.atleast_1d(np.asarray(theta, dtype=float)), TWO_PI)
        return np.asarray(self.sampler(theta), dtype=float).reshape(-1, 2)

    def velocity(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if self.derivative is not None:
            return np.asarray(self.derivative(np.mod(theta, TWO_PI)), dtype=float).reshape(-1, 2)
        # five-point central difference
        d = 1e-4
        f = self.points
        return (f(theta - 2 * d) - 8 * f(theta - d) + 8 * f(theta + d) - f(theta + 2 * d)) / (12 * d)

    def diameter(self) -> float:
        pts = self.points(np.linspace(0, TWO_PI, 721)[:-1])
        if self.vertices is not None:
            pts = self.vertices
        diff = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((diff**2).sum(-1)).max())

    def scaled(self, alpha: float) -> "ConvexDomain2D":
        deriv = None if self.derivative is None else (lambda t, d=self.derivative: alpha * d(t))
        return ConvexDomain2D(
            sampler=lambda t, s=self.sampler: alpha * np.asarray(s(t)),
            corners=self.corners,
            vertices=None if self.vertices is None else alpha * self.vertices,
            derivative=deriv,
            name=f"{alpha:g}*{self.name}",
        )


def check_convex(domain: ConvexDomain2D, samples: int = 720) -> None:
    """Raise ``DomainError`` unless the boundary is a simple, ccw, convex curve."""
    if domain.vertices is not None:
        pts = np.asarray(domain.vertices, dtype=float)
    else:
        theta = np.union1d(np.linspace(0, TWO_PI, samples, endpoint=False), np.asarray(domain.corners))
        pts = domain.points(theta)
    e = np.roll(pts, -1, axis=0) - pts
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    scale = np.max(np.abs(e)) ** 2
    if np.any(cross < -_CONVEX_TOL * scale):
        raise DomainError(f"{domain.name}: boundary is not convex and counterclockwise")
    area = 0.5 * np.sum(pts[:, 0] * np.roll(pts[:, 1], -1) - np.roll(pts[:, 0], -1) * pts[:, 1])
    if not area > _CONVEX_TOL * scale:
        raise DomainError(f"{domain.name}: zero or negative area")
    # total turning of a simple convex curve is exactly one revolution
    ang = np.arctan2(e[:, 1], e[:, 0])
    turn = np.mod(np.diff(np.append(ang, ang[0])) + math.pi, TWO_PI) - math.pi
    if abs(turn.sum() - TWO_PI) > 1e-6:
        raise DomainError(f"{domain.name}: boundary is not a simple closed curve")


# --------------------------------------------------------------------------
# constructors


def disk(radius: float = 1.0, center: Sequence[float] = (0.0, 0.0)) -> ConvexDomain2D:
    cx, cy = center

    def sampler(t):
        return np.column_stack([cx + radius * np.cos(t), cy + radius * np.sin(t)])

    def deriv(t):
        return np.column_stack([-radius * np.sin(t), radius * np.cos(t)])

    return ConvexDomain2D(sampler=sampler, derivative=deriv, name=f"disk(R={radius:g})")


def ellipse(a: float, b: float) -> ConvexDomain2D:
    """Ellipse ``x^2/a^2 + y^2/b^2 < 1``."""

    def sampler(t):
        return np.column_stack([a * np.cos(t), b * np.sin(t)])

    def deriv(t):
        return np.column_stack([-a * np.sin(t), b * np.cos(t)])

    return ConvexDomain2D(sampler=sampler, derivative=deriv, name=f"ellipse({a:g},{b:g})")


def _piecewise(segments: list[tuple]) -> tuple[Callable, Callable, tuple[float, ...]]:
    """Arc-length parametrisation over [0, 2 pi) of consecutive line/arc pieces.

    A segment is ``("line", p0, p1)`` or ``("arc", center, radius, t0, t1)``.
    """
    lengths = []
    for seg in segments:
        if seg[0] == "line":
            lengths.append(float(np.hypot(*(np.asarray(seg[2]) - np.asarray(seg[1])))))
        else:
            lengths.append(abs(seg[4] - seg[3]) * seg[2])
    total = sum(lengths)
    breaks = np.concatenate(([0.0], np.cumsum(lengths) / total * TWO_PI))
    breaks[-1] = TWO_PI

    def locate(t):
        t = np.mod(np.asarray(t, dtype=float), TWO_PI)
        idx = np.clip(np.searchsorted(breaks, t, side="right") - 1, 0, len(segments) - 1)
        s = (t - breaks[idx]) / (breaks[idx + 1] - breaks[idx])
        return idx, s

    def sampler(t):
        idx, s = locate(t)
        out = np.empty((len(s), 2))
        for i, seg in enumerate(segments):
            sel = idx == i
            if not np.any(sel):
                continue
            si = s[sel]
            if seg[0] == "line":
                p0, p1 = np.asarray(seg[1], float), np.asarray(seg[2], float)
                out[sel] = p0 + si[:, None] * (p1 - p0)
            else:
                _, c, r, t0, t1 = seg
                ang = t0 + si * (t1 - t0)
                out[sel] = np.column_stack([c[0] + r * np.cos(ang), c[1] + r * np.sin(ang)])
        return out

    def deriv(t):
        idx, s = locate(t)
        out = np.empty((len(s), 2))
        for i, seg in enumerate(segments):
            sel = idx == i
            if not np.any(sel):
                continue
            dt = breaks[i + 1] - breaks[i]
            if seg[0] == "line":
                p0, p1 = np.asarray(seg[1], float), np.asarray(seg[2], float)
                out[sel] = (p1 - p0) / dt
            else:
                _, c, r, t0, t1 = seg
                ang = t0 + s[sel] * (t1 - t0)
                w = (t1 - t0) / dt
                out[sel] = np.column_stack([-r * w * np.sin(ang), r * w * np.cos(ang)])
        return out

    return sampler, deriv, tuple(float(b) for b in breaks[:-1])


def polygon(vertices, name: str = "polygon") -> ConvexDomain2D:
    """Convex polygon from counterclockwise vertices."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise DomainError("polygon needs an (n, 2) vertex array with n >= 3")
    segs = [("line", v[i], v[(i + 1) % len(v)]) for i in range(len(v))]
    sampler, deriv, corners = _piecewise(segs)
    return ConvexDomain2D(sampler=sampler, corners=corners, vertices=v, derivative=deriv, name=name)


def rectangle(width: float, height: float) -> ConvexDomain2D:
    return polygon([[0, 0], [width, 0], [width, height], [0, height]], name=f"rectangle({width:g}x{height:g})")


def unit_square() -> ConvexDomain2D:
    return rectangle(1.0, 1.0)


def regular_polygon(n: int, circumradius: float = 1.0, phase: float = 0.0) -> ConvexDomain2D:
    ang = phase + TWO_PI * np.arange(n) / n
    return polygon(circumradius * np.column_stack([np.cos(ang), np.sin(ang)]), name=f"regular {n}-gon")


def truncated_disk(radius: float, eps: float) -> ConvexDomain2D:
    """``B(0; R)`` cut by the half-plane ``x_1 < R - eps``."""
    if not 0 < eps < radius:
        raise DomainError(f"need 0 < eps < R, got eps={eps}, R={radius}")
    c = radius - eps
    tc = math.acos(c / radius)
    w = radius * math.sin(tc)
    segs = [
        ("arc", (0.0, 0.0), radius, tc, TWO_PI - tc),
        ("line", (c, -w), (c, w)),
    ]
    sampler, deriv, corners = _piecewise(segs)
    return ConvexDomain2D(sampler=sampler, corners=corners, derivative=deriv, name=f"truncated disk(R={radius:g},eps={eps:g})")


# --------------------------------------------------------------------------
# metrics


def shape_metrics(domain: ConvexDomain2D) -> tuple[float, float]:
    """``(area, perimeter)``: exact for polygons, adaptive quadrature otherwise."""
    if domain.vertices is not None:
        v = domain.vertices
        x, y = v[:, 0], v[:, 1]
        area = 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
        perim = float(np.sum(np.hypot(*(np.roll(v, -1, axis=0) - v).T)))
        return area, perim

    def speed(t):
        return float(np.hypot(*domain.velocity(t)[0]))

    def darea(t):
        p = domain.points(t)[0]
        d = domain.velocity(t)[0]
        return 0.5 * (p[0] * d[1] - p[1] * d[0])

    cuts = sorted(set([0.0, *domain.corners, TWO_PI]))
    area = perim = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        perim += integrate.quad(speed, a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
        area += integrate.quad(darea, a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
    return area, perim


def ellipse_perimeter_integral(t: float) -> float:
    """``4 int_0^1 (1-x^2)^(-1/2) (1 + 2 t x^2 + t^2 x^2)^(1/2) dx`` for the ellipse ``(1, 1+t)``."""
    # x = sin(phi) removes the endpoint singularity
    f = lambda phi: math.sqrt(1.0 + (2.0 * t + t * t) * math.sin(phi) ** 2)
    return 4.0 * integrate.quad(f, 0.0, 0.5 * math.pi, epsabs=0, epsrel=1e-13)[0]
