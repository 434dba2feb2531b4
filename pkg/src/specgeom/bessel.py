"""Bessel functions of the first kind and their positive zeros.

``J_nu(x)`` is evaluated for real ``nu >= 0`` and ``x >= 0`` either by the
ascending power series (only where it is free of cancellation) or by Miller's
backward recurrence normalised with the Neumann sum

    (x/2)**nu0 = sum_k (nu0 + 2k) Gamma(nu0 + k) / k! * J_{nu0+2k}(x),

run at the fractional base order ``nu0 = nu - floor(nu)`` so the weights stay
of moderate size.  Zeros are isolated by stepping from ``x = nu`` (there are
none below) with a step shorter than the minimal zero spacing and then
refined by safeguarded Newton iteration inside a sign-change bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError, PrecisionError

# -a_1 / 2**(1/3) with a_1 the first zero of the Airy function Ai.
A_CONST = 1.8557571
A_NU_LOW = 0.500
A_NU_HIGH = 1.537

DEFAULT_TOL = 1e-10
X_MAX = 1e6

# Zeros of J_nu are more than pi/2 apart for every nu >= 0, so a step of 1.5
# never hides two sign changes in one interval.
_SCAN_STEP = 1.5
_RESCALE = 1e250
_MAX_ITER = 200


@dataclass(frozen=True)
class Order:
    """Bessel order ``nu`` (non-negative, finite)."""

    nu: float

    def __post_init__(self):
        nu = float(self.nu)
        if not math.isfinite(nu) or nu < 0:
            raise DomainError(f"Bessel order must be finite and >= 0, got {self.nu!r}")
        object.__setattr__(self, "nu", nu)


@dataclass(frozen=True)
class BesselZero:
    order: Order
    index: int
    value: float
    abs_err: float

    @property
    def lower(self) -> float:
        return self.value - self.abs_err

    @property
    def upper(self) -> float:
        return self.value + self.abs_err


@dataclass(frozen=True)
class AsymptoticBracket:
    """Enclosure ``nu + a nu^(1/3) + a_nu nu^(-1/3)`` of the first zero, valid for nu >= 1."""

    nu: Order
    lower: float
    upper: float
    a_const: float = A_CONST
    a_nu_low: float = A_NU_LOW
    a_nu_high: float = A_NU_HIGH

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def _as_nu(order) -> float:
    if isinstance(order, Order):
        return order.nu
    return Order(order).nu


def _series(nu: float, x: float) -> float:
    half = 0.5 * x
    # log(x) - log(2) survives subnormal x where 0.5 * x underflows
    term = math.exp(nu * (math.log(x) - math.log(2.0)) - math.lgamma(nu + 1.0))
    total = term
    q = half * half
    k = 0
    while True:
        k += 1
        term *= -q / (k * (nu + k))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total


def _start_index(nu0: float, n_target: int, x: float) -> int:
    # Forward-run the recurrence from n_target until the dominant solution has
    # grown by 1e20; J at the start index is then negligible.
    p_prev, p = 0.0, 1.0
    n = n_target
    limit = int(n_target + x + 1e5 + 10 * x ** (1 / 3))
    while n < x or abs(p) < 1e20:
        p_prev, p = p, 2.0 * (nu0 + n) / x * p - p_prev
        n += 1
        if n > limit:
            raise PrecisionError(f"backward recurrence start not found for nu={nu0 + n_target}, x={x}")
    return n + 12


def _miller(nu: float, x: float) -> tuple[float, float]:
    """Return ``(J_nu(x), J_{nu+1}(x))`` by normalised backward recurrence."""
    n_target = int(math.floor(nu))
    nu0 = nu - n_target
    top = _start_index(nu0, n_target, x)
    if top % 2:
        top += 1

    # Neumann weights: w_0 = Gamma(nu0+1), w_k = (nu0+2k) Gamma(nu0+k)/k!.
    half_top = top // 2
    g0 = math.gamma(nu0 + 1.0)
    kk = np.arange(1, half_top, dtype=float)
    gk = np.cumprod(np.concatenate(([g0], (nu0 + kk) / (kk + 1.0))))
    weights = np.empty(half_top + 1)
    weights[0] = g0
    weights[1:] = (nu0 + 2.0 * np.arange(1, half_top + 1)) * gk

    f_next, f_cur = 0.0, 1e-30
    total = weights[top // 2] * f_cur
    f_at = f_at1 = None
    two_over_x = 2.0 / x
    for n in range(top, 0, -1):
        f_prev = (nu0 + n) * two_over_x * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        idx = n - 1
        if idx == n_target:
            f_at = f_cur
        elif idx == n_target + 1:
            f_at1 = f_cur
        if idx % 2 == 0:
            total += weights[idx // 2] * f_cur
        if abs(f_cur) > _RESCALE:
            f_cur /= _RESCALE
            f_next /= _RESCALE
            total /= _RESCALE
            if f_at is not None:
                f_at /= _RESCALE
            if f_at1 is not None:
                f_at1 /= _RESCALE
    scale = (0.5 * x) ** nu0 / total
    return f_at * scale, f_at1 * scale


def _use_series(nu: float, x: float) -> bool:
    return x * x <= nu + 1.0


def _jv_pair(nu: float, x: float) -> tuple[float, float]:
    if x == 0.0:
        return (1.0 if nu == 0 else 0.0), 0.0
    if x > X_MAX:
        raise PrecisionError(f"x={x} exceeds the supported range x <= {X_MAX:g}")
    if _use_series(nu, x):
        return _series(nu, x), _series(nu + 1.0, x)
    return _miller(nu, x)


def bessel_j(order, x: float) -> float:
    """Bessel function of the first kind ``J_nu(x)``.

    Parameters
    ----------
    order : Order or float
        Order ``nu >= 0``.
    x : float
        Argument, ``0 <= x <= 1e6``.

    Returns
    -------
    float
    """
    nu = _as_nu(order)
    x = float(x)
    if not x >= 0:
        raise DomainError(f"argument must be >= 0, got {x!r}")
    if x == 0.0:
        return 1.0 if nu == 0 else 0.0
    if x > X_MAX:
        raise PrecisionError(f"x={x} exceeds the supported range x <= {X_MAX:g}")
    if _use_series(nu, x):
        return _series(nu, x)
    return _miller(nu, x)[0]


def bessel_j_derivative(order, x: float) -> float:
    """``J_nu'(x)`` from the identity ``J_nu' = (nu/x) J_nu - J_{nu+1}``.

    At ``x = 0`` the limit is returned (1/2 for nu = 1, 0 for nu > 1 or nu = 0).
    """
    nu = _as_nu(order)
    x = float(x)
    if not x >= 0:
        raise DomainError(f"argument must be >= 0, got {x!r}")
    if x == 0.0:
        if nu == 1.0:
            return 0.5
        if nu == 0.0 or nu > 1.0:
            return 0.0
        raise DomainError("J_nu'(0) is unbounded for 0 < nu < 1")
    j0, j1 = _jv_pair(nu, x)
    return nu / x * j0 - j1


def _refine(nu: float, a: float, fa: float, b: float, fb: float, tol: float) -> tuple[float, float]:
    """Shrink a sign-change bracket [a, b] to half-width <= tol."""
    x = 0.5 * (a + b)
    for _ in range(_MAX_ITER):
        if b - a <= tol:
            mid = 0.5 * (a + b)
            fm, fm1 = _jv_pair(nu, mid)
            deriv = nu / mid * fm - fm1
            polished = mid - fm / deriv if deriv != 0 else mid
            # the polished point stays inside the certified bracket
            best = polished if a <= polished <= b else mid
            return best, max(best - a, b - best)
        fx, fx1 = _jv_pair(nu, x)
        if fx == 0.0:
            return x, 0.0
        if (fx > 0) == (fa > 0):
            a, fa = x, fx
        else:
            b, fb = x, fx
        deriv = nu / x * fx - fx1
        step = fx / deriv if deriv != 0 else math.inf
        cand = x - step
        if abs(step) < 0.5 * tol and a < cand < b:
            # Try to close the bracket around the Newton iterate directly.
            lo, hi = max(a, cand - 0.5 * tol), min(b, cand + 0.5 * tol)
            flo = _jv_pair(nu, lo)[0]
            fhi = _jv_pair(nu, hi)[0]
            if (flo > 0) != (fhi > 0):
                a, fa, b, fb = lo, flo, hi, fhi
                continue
        if a < cand < b and abs(cand - x) < 0.5 * (b - a):
            x = cand
        else:
            x = 0.5 * (a + b)
        if not a < x < b:
            break
    raise ConvergenceError(
        f"zero of J_{nu} not resolved to tol={tol:g}; bracket [{a!r}, {b!r}] after {_MAX_ITER} iterations"
    )


@lru_cache(maxsize=None)
def _nth_zero_cached(nu: float, n: int, tol: float) -> tuple[float, float]:
    a = nu
    fa = bessel_j(nu, a)
    found = 0
    limit = nu + math.pi * (n + 1) + 4.0 * nu ** (1 / 3) + 10.0
    while a < limit:
        b = a + _SCAN_STEP
        fb = _jv_pair(nu, b)[0]
        if fb == 0.0:
            found += 1
            if found == n:
                return b, 0.0
            b += 1e-9
            fb = bessel_j(nu, b)
        if (fa > 0) != (fb > 0):
            found += 1
            if found == n:
                return _refine(nu, a, fa, b, fb, tol)
        a, fa = b, fb
    raise ConvergenceError(f"could not isolate zero #{n} of J_{nu}")


def nth_zero(order, n: int, tol: float = DEFAULT_TOL) -> BesselZero:
    """The ``n``-th positive zero ``j_{nu,n}`` of ``J_nu`` with a certified bracket.

    Parameters
    ----------
    order : Order or float
    n : int
        1 for the first positive zero.
    tol : float
        Requested half-width of the enclosing sign-change bracket.

    Raises
    ------
    ConvergenceError
        If the zero cannot be bracketed or refined within the iteration budget.
    """
    order = order if isinstance(order, Order) else Order(order)
    if int(n) != n or n < 1:
        raise DomainError(f"zero index must be a positive integer, got {n!r}")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    value, err = _nth_zero_cached(order.nu, int(n), float(tol))
    return BesselZero(order=order, index=int(n), value=float(value), abs_err=float(err))


def first_zero(nu: float, tol: float = DEFAULT_TOL) -> BesselZero:
    return nth_zero(nu, 1, tol)


def asymptotic_bracket(order) -> AsymptoticBracket:
    """Enclosure of ``j_nu`` from its large-order expansion, valid for ``nu >= 1``."""
    order = order if isinstance(order, Order) else Order(order)
    nu = order.nu
    if nu < 1:
        raise DomainError(f"asymptotic bracket holds only for nu >= 1, got nu={nu}")
    c = nu ** (1 / 3)
    base = nu + A_CONST * c
    return AsymptoticBracket(nu=order, lower=base + A_NU_LOW / c, upper=base + A_NU_HIGH / c)
