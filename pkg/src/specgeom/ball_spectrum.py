"""Dirichlet spectrum of the unit ball in R^m.

The eigenvalues of the unit m-ball are ``j_{(m-2)/2 + l, n}**2`` with
multiplicity equal to the dimension ``N(m, l)`` of degree-``l`` spherical
harmonics.  Because ``j_{nu,n}`` increases both in ``nu`` and in ``n``,
candidates are enumerated with a heap over the (l, n) grid: a pair is only
pushed once its predecessors have been popped, so no smaller eigenvalue can
be skipped.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .bessel import DEFAULT_TOL, nth_zero
from .errors import DomainError, ResourceError

DEFAULT_ZERO_BUDGET = 20_000


@dataclass(frozen=True)
class BallLevel:
    degree: int
    radial_index: int
    eigenvalue: float
    multiplicity: int
    abs_err: float = 0.0


@dataclass(frozen=True)
class BallSpectrum:
    """First ``count`` Dirichlet eigenvalues of ``B_m`` expanded by multiplicity.

    ``eigenvalues`` holds ``(value, degree, radial_index)`` triples in
    nondecreasing order; ``abs_err`` carries the propagated error
    ``2 j abs_err(j)`` of each entry.
    """

    dimension: int
    eigenvalues: list[tuple[float, int, int]]
    abs_err: list[float] = field(default_factory=list)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _, _ in self.eigenvalues])

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def __getitem__(self, i: int) -> float:
        return self.eigenvalues[i][0]


def harmonic_multiplicity(m: int, l: int) -> int:
    """Dimension ``N(m, l)`` of spherical harmonics of degree ``l`` on S^{m-1}.

    Equals ``(2l+m-2)(l+m-3)! / (l!(m-2)!)`` for ``l >= 1``; exact integer arithmetic.
    """
    if m < 2 or l < 0:
        raise DomainError(f"need m >= 2 and l >= 0, got m={m}, l={l}")
    if l == 0:
        return 1
    if l == 1:
        return m
    # homogeneous polynomials of degree l minus those of degree l-2
    return math.comb(l + m - 1, m - 1) - math.comb(l + m - 3, m - 1)


def bessel_order(m: int, l: int) -> float:
    return (m - 2) / 2 + l


def ball_level(m: int, l: int, n: int, tol: float = DEFAULT_TOL) -> BallLevel:
    z = nth_zero(bessel_order(m, l), n, tol)
    return BallLevel(
        degree=l,
        radial_index=n,
        eigenvalue=z.value**2,
        multiplicity=harmonic_multiplicity(m, l),
        abs_err=2.0 * z.value * z.abs_err,
    )


def ball_eigenvalues(
    m: int, count: int, tol: float = DEFAULT_TOL, budget: int = DEFAULT_ZERO_BUDGET
) -> BallSpectrum:
    """The first ``count`` Dirichlet eigenvalues of the unit ball ``B_m``.

    Parameters
    ----------
    m : int
        Dimension, ``m >= 2``.
    count : int
        Number of eigenvalues (counted with multiplicity).
    tol : float
        Absolute tolerance for each Bessel zero.
    budget : int
        Maximum number of Bessel zeros that may be computed.

    Raises
    ------
    ResourceError
        If more than ``budget`` zeros would be needed.
    """
    if m < 2:
        raise DomainError(f"dimension must be >= 2, got {m}")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")

    heap = []
    computed = 0

    def push(l, n):
        nonlocal computed
        computed += 1
        if computed > budget:
            raise ResourceError(f"ball spectrum for m={m}, count={count} needs more than {budget} zeros")
        lvl = ball_level(m, l, n, tol)
        heapq.heappush(heap, (lvl.eigenvalue, l, n, lvl))

    push(0, 1)
    out: list[tuple[float, int, int]] = []
    errs: list[float] = []
    while len(out) < count:
        value, l, n, lvl = heapq.heappop(heap)
        push(l, n + 1)
        if n == 1:
            push(l + 1, 1)
        take = min(lvl.multiplicity, count - len(out))
        out.extend([(value, l, n)] * take)
        errs.extend([lvl.abs_err] * take)
    return BallSpectrum(dimension=m, eigenvalues=out, abs_err=errs)


def grid_eigenvalues(m: int, count: int, l_max: int, n_max: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Brute-force spectrum from every (l, n) with ``l <= l_max``, ``n <= n_max``.

    Only correct when the box is large enough; used to audit ``ball_eigenvalues``.
    """
    vals = []
    for l in range(l_max + 1):
        mult = harmonic_multiplicity(m, l)
        for n in range(1, n_max + 1):
            vals.extend([nth_zero(bessel_order(m, l), n, tol).value ** 2] * mult)
            if len(vals) > 50 * count + 10_000:
                break
    vals.sort()
    return np.array(vals[:count])


def lambda_1(m: int, tol: float = DEFAULT_TOL) -> float:
    """``lambda_1(B_m) = j_{(m-2)/2}**2``."""
    return nth_zero((m - 2) / 2, 1, tol).value ** 2


def lambda_2(m: int, tol: float = DEFAULT_TOL) -> float:
    """``lambda_2(B_m) = ... = lambda_{m+1}(B_m) = j_{m/2}**2``."""
    return nth_zero(m / 2, 1, tol).value ** 2


def lambda_k(m: int, k: int, tol: float = DEFAULT_TOL) -> float:
    """``lambda_k(B_m)``, shortcutting to ``j_{m/2}**2`` for ``2 <= k <= m+1``."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k == 1:
        return lambda_1(m, tol)
    if k <= m + 1:
        return lambda_2(m, tol)
    return ball_eigenvalues(m, k, tol)[k - 1]
