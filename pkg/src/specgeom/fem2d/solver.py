"""P1 finite elements for the Dirichlet Laplacian and the torsion problem."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import ConvergenceError, DomainError, SingularityError
from .mesh import Mesh2D

DEFAULT_EIG_TOL = 1e-10


@dataclass(frozen=True)
class EigenSolution:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # (n_interior, count), M-orthonormal
    residuals: np.ndarray
    interior: np.ndarray

    def full_vectors(self, n_vertices: int) -> np.ndarray:
        out = np.zeros((n_vertices, len(self.eigenvalues)))
        out[self.interior] = self.eigenvectors
        return out


@dataclass(frozen=True)
class TorsionResult:
    u: np.ndarray  # nodal values on all vertices (zero on the boundary)
    rigidity: float


def assemble(mesh: Mesh2D) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Global P1 stiffness and consistent mass matrices."""
    p = mesh.vertices[mesh.triangles]
    x, y = p[..., 0], p[..., 1]
    # gradient of barycentric coordinate i is (y_j - y_k, x_k - x_j) / (2A)
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area = 0.5 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    if np.any(area <= 0):
        raise DomainError("mesh has non-positively oriented triangles")
    k_loc = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (4.0 * area[:, None, None])
    m_ref = (np.ones((3, 3)) + np.eye(3)) / 12.0
    m_loc = area[:, None, None] * m_ref[None]
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    n = mesh.n_vertices
    K = sp.coo_matrix((k_loc.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    M = sp.coo_matrix((m_loc.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return K, M


def _interior_blocks(mesh: Mesh2D):
    K, M = assemble(mesh)
    idx = mesh.interior
    return K[idx][:, idx].tocsc(), M[idx][:, idx].tocsc(), idx, M


def dirichlet_eigs(mesh: Mesh2D, count: int, tol: float = DEFAULT_EIG_TOL) -> EigenSolution:
    """Lowest ``count`` eigenpairs of ``K x = lambda M x`` on the interior vertices.

    Shift-invert Lanczos about ``sigma = 0`` with a sparse LU factorization of
    the interior stiffness block and a deterministic start vector.

    Raises
    ------
    ConvergenceError
        If Lanczos does not converge or the residual contract is violated.
    SingularityError
        If the stiffness block cannot be factorized.
    """
    Kii, Mii, idx, _ = _interior_blocks(mesh)
    n = len(idx)
    if count < 1 or count > n / 4:
        raise DomainError(f"count must lie in [1, interior/4 = {n // 4}], got {count}")
    try:
        lu = spla.splu(Kii)
    except RuntimeError as exc:
        raise SingularityError(f"stiffness factorization failed: {exc}") from exc
    op = spla.LinearOperator((n, n), matvec=lu.solve, dtype=float)
    v0 = np.ones(n)
    try:
        vals, vecs = spla.eigsh(Kii, k=count, M=Mii, sigma=0.0, which="LM", OPinv=op, v0=v0, tol=tol)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(f"ARPACK did not converge: {len(exc.eigenvalues)} of {count} pairs") from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    # fix signs so the largest-magnitude entry is positive (reproducible output)
    pivot = np.argmax(np.abs(vecs), axis=0)
    vecs = vecs * np.sign(vecs[pivot, np.arange(count)])
    resid = np.linalg.norm(Kii @ vecs - (Mii @ vecs) * vals, axis=0) / np.linalg.norm(vecs, axis=0)
    scale = abs(Kii).sum(axis=0).max() + vals.max() * abs(Mii).sum(axis=0).max()
    if np.any(resid > max(tol, 1e-12) * 1e3 * scale):
        raise ConvergenceError(f"eigen residuals too large: {resid}")
    if np.any(vals <= 0):
        raise ConvergenceError("non-positive eigenvalue from a positive definite pencil")
    return EigenSolution(eigenvalues=vals, eigenvectors=vecs, residuals=resid, interior=idx)


def torsion_solve(mesh: Mesh2D) -> TorsionResult:
    """Solve ``-Delta u = 1`` with ``u = 0`` on the boundary; rigidity is ``int u``."""
    Kii, Mii, idx, M = _interior_blocks(mesh)
    load = np.asarray(M.sum(axis=1)).ravel()[idx]
    try:
        u_i = spla.splu(Kii).solve(load)
    except RuntimeError as exc:
        raise SingularityError(f"stiffness factorization failed: {exc}") from exc
    u = np.zeros(mesh.n_vertices)
    u[idx] = u_i
    return TorsionResult(u=u, rigidity=float(load @ u_i))


def export_eigenvectors_csv(mesh: Mesh2D, sol: EigenSolution, path) -> None:
    """CSV keyed by vertex index: ``vertex,x,y,phi_1,...``."""
    full = sol.full_vectors(mesh.n_vertices)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["vertex", "x", "y"] + [f"phi_{i + 1}" for i in range(full.shape[1])])
        for i, (pt, row) in enumerate(zip(mesh.vertices, full)):
            w.writerow([i, repr(float(pt[0])), repr(float(pt[1]))] + [repr(float(v)) for v in row])
