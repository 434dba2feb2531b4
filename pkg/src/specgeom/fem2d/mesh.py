"""Deterministic triangulation of convex planar domains.

A coarse boundary polygon is fanned from its centroid, then every triangle
is split into four until the longest edge is below the target size.  New
boundary vertices are placed on the true boundary through the domain
sampler, and one Jacobi Laplacian-smoothing sweep relaxes interior vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, MeshError
from .domain import TWO_PI, ConvexDomain2D, truncated_disk

_MIN_COARSE = 6
# pieces between corners span at most a quarter turn of the parameter, so
# boundary midpoints never pick the wrong way round
_CORNER_PIECE = 0.5 * math.pi


@dataclass(frozen=True)
class Mesh2D:
    vertices: np.ndarray
    triangles: np.ndarray
    boundary_mask: np.ndarray
    boundary_param: np.ndarray | None = None
    level: int = 0

    @property
    def h(self) -> float:
        """Longest edge length."""
        e = edges(self.triangles)
        d = self.vertices[e[:, 0]] - self.vertices[e[:, 1]]
        return float(np.sqrt((d**2).sum(1)).max())

    @property
    def interior(self) -> np.ndarray:
        return np.flatnonzero(~self.boundary_mask)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def areas(self) -> np.ndarray:
        return signed_areas(self.vertices, self.triangles)

    def min_angle(self) -> float:
        """Smallest interior angle over all triangles, in degrees."""
        p = self.vertices[self.triangles]
        worst = math.pi
        for i in range(3):
            a = p[:, (i + 1) % 3] - p[:, i]
            b = p[:, (i + 2) % 3] - p[:, i]
            cosang = (a * b).sum(1) / np.sqrt((a**2).sum(1) * (b**2).sum(1))
            worst = min(worst, float(np.arccos(np.clip(cosang, -1, 1)).min()))
        return math.degrees(worst)

    def scaled(self, alpha: float) -> "Mesh2D":
        return Mesh2D(alpha * self.vertices, self.triangles, self.boundary_mask, self.boundary_param, self.level)

    def validate(self) -> None:
        """Raise ``MeshError`` unless the mesh is conforming and positively oriented."""
        if np.any(self.areas() <= 0):
            raise MeshError("triangle with non-positive orientation")
        keys, _ = _edge_keys(self.triangles)
        _, counts = np.unique(keys, return_counts=True)
        if np.any(counts > 2):
            raise MeshError("edge shared by more than two triangles")
        if not np.any(~self.boundary_mask):
            raise MeshError("mesh has no interior vertex")


def signed_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p = vertices[triangles]
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def _edge_keys(triangles: np.ndarray) -> tuple[np.ndarray, int]:
    """Sorted-endpoint keys ``lo * n + hi`` of the three edges of every triangle."""
    n = int(triangles.max()) + 1
    e = np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]]).astype(np.int64)
    return e.min(axis=1) * n + e.max(axis=1), n


def edges(triangles: np.ndarray) -> np.ndarray:
    keys, n = _edge_keys(triangles)
    u = np.unique(keys)
    return np.column_stack([u // n, u % n])


def _param_mid(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = np.mod(b - a, TWO_PI)
    d = np.where(d > math.pi, d - TWO_PI, d)
    return np.mod(a + 0.5 * d, TWO_PI)


def _coarse_params(domain: ConvexDomain2D) -> np.ndarray:
    corners = sorted(set(float(c) % TWO_PI for c in domain.corners))
    if not corners:
        return np.linspace(0.0, TWO_PI, _MIN_COARSE, endpoint=False)
    spans = np.diff(corners + [corners[0] + TWO_PI])
    piece = _CORNER_PIECE
    params = []
    for c, s in zip(corners, spans):
        n = max(1, int(math.ceil(s / piece - 1e-9)))
        params.extend(c + s * np.arange(n) / n)
    return np.mod(np.array(params), TWO_PI)


def _refine(verts, tris, bparam, domain):
    """Split every triangle into four; boundary midpoints go onto the boundary."""
    n = len(verts)
    keys, nk = _edge_keys(tris)
    ukeys, inv, counts = np.unique(keys, return_inverse=True, return_counts=True)
    uniq = np.column_stack([ukeys // nk, ukeys % nk])
    mids = 0.5 * (verts[uniq[:, 0]] + verts[uniq[:, 1]])
    on_bnd = counts == 1
    mid_param = np.full(len(uniq), np.nan)
    if np.any(on_bnd):
        pa = bparam[uniq[on_bnd, 0]]
        pb = bparam[uniq[on_bnd, 1]]
        mp = _param_mid(pa, pb)
        mids[on_bnd] = domain.points(mp)
        mid_param[on_bnd] = mp
    new_verts = np.vstack([verts, mids])
    new_param = np.concatenate([bparam, mid_param])
    t = len(tris)
    m01 = n + inv[:t]
    m12 = n + inv[t : 2 * t]
    m20 = n + inv[2 * t :]
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    new_tris = np.vstack(
        [
            np.column_stack([a, m01, m20]),
            np.column_stack([m01, b, m12]),
            np.column_stack([m20, m12, c]),
            np.column_stack([m01, m12, m20]),
        ]
    )
    return new_verts, new_tris, new_param


def _smooth(verts, tris, boundary):
    """One Jacobi sweep moving each interior vertex to the mean of its neighbours."""
    e = edges(tris)
    n = len(verts)
    deg = np.bincount(e.ravel(), minlength=n).astype(float)
    acc = np.zeros_like(verts)
    np.add.at(acc, e[:, 0], verts[e[:, 1]])
    np.add.at(acc, e[:, 1], verts[e[:, 0]])
    out = verts.copy()
    inner = ~boundary
    out[inner] = acc[inner] / deg[inner, None]
    return out


def _max_edge(verts, tris) -> float:
    e = edges(tris)
    d = verts[e[:, 0]] - verts[e[:, 1]]
    return float(np.sqrt((d**2).sum(1)).max())


def triangulate_convex(
    domain: ConvexDomain2D,
    target_h: float | None = None,
    refinements: int | None = None,
    max_vertices: int = 2_000_000,
) -> Mesh2D:
    """Conforming triangulation of a convex domain.

    Parameters
    ----------
    domain : ConvexDomain2D
    target_h : float, optional
        Upper bound on every edge length; refinement continues until met.
    refinements : int, optional
        Exact number of uniform refinements instead of ``target_h``.  Meshes at
        consecutive levels halve the mesh size, which is what Richardson
        extrapolation expects.

    Raises
    ------
    MeshError
        If smoothing leaves a degenerate triangle.
    """
    if (target_h is None) == (refinements is None):
        raise DomainError("give exactly one of target_h or refinements")
    if target_h is not None:
        diam = domain.diameter()
        if not 1e-3 <= target_h <= diam:
            raise DomainError(f"target_h must lie in [1e-3, diameter={diam:.4g}], got {target_h}")

    params = _coarse_params(domain)
    bpts = domain.points(params)
    x, y = bpts[:, 0], bpts[:, 1]
    cr = x * np.roll(y, -1) - np.roll(x, -1) * y
    a2 = cr.sum()
    centroid = np.array([((x + np.roll(x, -1)) * cr).sum(), ((y + np.roll(y, -1)) * cr).sum()]) / (3.0 * a2)

    nb = len(params)
    verts = np.vstack([centroid, bpts])
    bparam = np.concatenate([[np.nan], params])
    idx = np.arange(1, nb + 1)
    tris = np.column_stack([np.zeros(nb, dtype=int), idx, np.roll(idx, -1)])

    level = 0
    while True:
        if refinements is not None:
            if level >= refinements:
                break
        elif _max_edge(verts, tris) <= target_h:
            break
        if 4 * len(verts) > max_vertices:
            raise MeshError(f"mesh would exceed {max_vertices} vertices")
        verts, tris, bparam = _refine(verts, tris, bparam, domain)
        level += 1

    boundary = ~np.isnan(bparam)
    verts = _smooth(verts, tris, boundary)
    if refinements is None and _max_edge(verts, tris) > target_h:
        # smoothing may stretch an edge slightly; one more level restores the bound
        verts, tris, bparam = _refine(verts, tris, bparam, domain)
        level += 1
        boundary = ~np.isnan(bparam)
        verts = _smooth(verts, tris, boundary)

    areas = signed_areas(verts, tris)
    if np.any(areas <= 1e-12 * areas.mean()):
        raise MeshError("degenerate triangle after smoothing")
    mesh = Mesh2D(verts, tris.astype(np.int64), boundary, bparam, level)
    if not np.any(~boundary):
        raise MeshError("mesh has no interior vertex")
    return mesh


def overlapping_disks_mesh(radius: float, eps: float, refinements: int) -> tuple[Mesh2D, Mesh2D]:
    """Mesh of ``B(0;R) U B(2(R-eps)e_1; R)`` stitched from two mirrored truncated disks.

    Returns ``(union_mesh, half_mesh)``; the half mesh is the truncated disk
    ``B(0;R) ∩ {x_1 < R - eps}`` used to build the union.
    """
    half = triangulate_convex(truncated_disk(radius, eps), refinements=refinements)
    c = radius - eps
    v = half.vertices.copy()
    on_chord = half.boundary_mask & (np.abs(v[:, 0] - c) < 1e-10)
    v[on_chord, 0] = c
    half = Mesh2D(v, half.triangles, half.boundary_mask, half.boundary_param, half.level)
    corners = on_chord & (np.abs(np.hypot(v[:, 0], v[:, 1]) - radius) < 1e-10)

    mirror = v.copy()
    mirror[:, 0] = 2.0 * c - v[:, 0]
    mirror[on_chord, 0] = c

    n = len(v)
    # chord vertices of the mirror copy reuse the originals
    new_ids = np.full(n, -1, dtype=np.int64)
    keep = ~on_chord
    new_ids[keep] = n + np.arange(keep.sum())
    new_ids[on_chord] = np.flatnonzero(on_chord)
    verts = np.vstack([v, mirror[keep]])
    tris_r = new_ids[half.triangles][:, [0, 2, 1]]
    tris = np.vstack([half.triangles, tris_r])
    boundary = np.concatenate([half.boundary_mask & ~(on_chord & ~corners), half.boundary_mask[keep]])
    union = Mesh2D(verts, tris, boundary, None, half.level)
    union.validate()
    return union, half


def export_off(mesh: Mesh2D, path) -> None:
    """Write the mesh as an OFF file (z = 0)."""
    with open(path, "w") as fh:
        fh.write("OFF\n")
        fh.write(f"{len(mesh.vertices)} {len(mesh.triangles)} 0\n")
        for x, y in mesh.vertices:
            fh.write(f"{float(x)!r} {float(y)!r} 0\n")
        for a, b, c in mesh.triangles:
            fh.write(f"3 {a} {b} {c}\n")


def read_off(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path) as fh:
        tokens = [ln.split() for ln in fh if ln.strip() and not ln.startswith("#")]
    if tokens[0][0] != "OFF":
        raise MeshError("missing OFF header")
    nv, nt = int(tokens[1][0]), int(tokens[1][1])
    verts = np.array([[float(t[0]), float(t[1])] for t in tokens[2 : 2 + nv]])
    tris = np.array([[int(t[1]), int(t[2]), int(t[3])] for t in tokens[2 + nv : 2 + nv + nt]])
    return verts, tris
