"""Closed-form eigenvalue and component-count bounds.

Everything here is driven by ball eigenvalues ``lambda_k(B_m)``.  Quantities
that enter a floor function are evaluated on certified intervals built from
the Bessel-zero brackets; if an interval straddles an integer the zeros are
recomputed with a tighter tolerance (three rounds at most) before the row is
flagged indeterminate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from . import ball_spectrum as bs
from .bessel import DEFAULT_TOL, asymptotic_bracket, nth_zero, A_CONST
from .errors import DomainError, ResourceError

ASYMPTOTIC_M = 2**15
DEFAULT_M_BUDGET = 4096

# relative slack absorbing floating-point error in pow/exp on top of the zero brackets
_FP_SLACK = 1e-12


class ConstraintKind(str, enum.Enum):
    HAUSDORFF_BOUNDARY = "HausdorffBoundary"
    LEBESGUE_MEASURE = "LebesgueMeasure"
    TORSIONAL_RIGIDITY = "TorsionalRigidity"


@dataclass(frozen=True)
class ConstraintFunctional:
    """Constraint ``T(Omega) <= budget`` with ``T(alpha Omega) = alpha**beta T(Omega)``.

    For the boundary measure the scaling exponent is ``m - 1``; it is not
    additive-isoperimetric, which only matters for the second eigenvalue.
    """

    kind: ConstraintKind
    dimension: int
    budget: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ConstraintKind(self.kind))
        if self.dimension < 2:
            raise DomainError(f"dimension must be >= 2, got {self.dimension}")
        if not self.budget > 0:
            raise DomainError(f"budget must be positive, got {self.budget}")

    @property
    def beta(self) -> float:
        m = self.dimension
        return {
            ConstraintKind.HAUSDORFF_BOUNDARY: m - 1,
            ConstraintKind.LEBESGUE_MEASURE: m,
            ConstraintKind.TORSIONAL_RIGIDITY: m + 2,
        }[self.kind]

    def ball_value(self) -> float:
        """``T(B_m)`` for the unit ball."""
        m = self.dimension
        if self.kind is ConstraintKind.HAUSDORFF_BOUNDARY:
            return sphere_area(m)
        if self.kind is ConstraintKind.LEBESGUE_MEASURE:
            return ball_volume(m)
        return ball_torsion(m)


@dataclass
class BoundReport:
    dimension: int
    k: int
    omega_max: int | None
    applicable: bool
    applicability_reason: str
    bound_value: float
    beta: float | None = None
    kind: str = ""
    ratio: float = float("nan")
    err_flag: str = ""
    extras: dict = field(default_factory=dict)

    def row(self) -> dict:
        return {
            "m": self.dimension,
            "k": self.k,
            "beta": "" if self.beta is None else _fmt(self.beta),
            "kind": self.kind,
            "omega_max": "n/a" if self.omega_max is None else self.omega_max,
            "applicable": str(self.applicable).lower(),
            "ratio": _fmt(self.ratio),
            "err_flag": self.err_flag,
        }


REPORT_FIELDS = ["m", "k", "beta", "kind", "omega_max", "applicable", "ratio", "err_flag"]


def _fmt(x: float) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


@dataclass(frozen=True)
class Configuration:
    """Component split: ``k1`` one-eigenvalue balls plus ``k2`` larger components."""

    k1: int
    k2: int

    @property
    def omega(self) -> int:
        return self.k1 + self.k2


@dataclass(frozen=True)
class Lambda2StarEstimate:
    dimension: int
    lower: float
    upper: float
    expansion_coeff: float = math.log(4.0)

    @property
    def gap(self) -> float:
        return self.upper / self.lower


# --------------------------------------------------------------------------
# geometry of the unit ball


def sphere_area(m: int) -> float:
    """Surface measure ``m pi^(m/2) / Gamma(m/2 + 1)`` of the unit sphere in R^m."""
    if m < 2:
        raise DomainError(f"dimension must be >= 2, got {m}")
    return math.exp(math.log(m) + 0.5 * m * math.log(math.pi) - math.lgamma(0.5 * m + 1.0))


def ball_volume(m: int) -> float:
    return sphere_area(m) / m


def ball_torsion(m: int) -> float:
    """Torsional rigidity of ``B_m``: integral of ``(1 - r^2)/(2m)``."""
    return sphere_area(m) / (m * m * (m + 2))


# --------------------------------------------------------------------------
# isoperimetric-type lower bounds


def isoperimetric_lower_bound(k: int, constraint: ConstraintFunctional, m: int | None = None) -> float:
    """Lower bound for ``lambda_k(Omega)``, ``k in {1, 2}``, over sets with ``T(Omega) <= budget``.

    Faber-Krahn for ``k = 1`` and Krahn-Szego for ``k = 2``, transported to the
    given constraint through its scaling exponent.
    """
    if k not in (1, 2):
        raise DomainError(f"isoperimetric bound is available for k = 1, 2 only, got {k}")
    m = constraint.dimension if m is None else m
    if m != constraint.dimension:
        raise DomainError("dimension disagrees with the constraint")
    beta = constraint.beta
    base = bs.lambda_1(m) * (constraint.ball_value() / constraint.budget) ** (2.0 / beta)
    if k == 1:
        return base
    if constraint.kind is ConstraintKind.HAUSDORFF_BOUNDARY:
        return 2.0 ** (2.0 / m) * base
    return 2.0 ** (2.0 / beta) * base


def lambda2_star_bounds(m: int) -> Lambda2StarEstimate:
    """Two-sided estimate of the minimal scale-free value ``lambda_2 * H(dOmega)^(2/(m-1))``.

    The lower side is Krahn-Szego plus the isoperimetric inequality, the upper
    side the union of two equal balls.
    """
    if m < 2:
        raise DomainError(f"dimension must be >= 2, got {m}")
    core = bs.lambda_1(m) * sphere_area(m) ** (2.0 / (m - 1))
    return Lambda2StarEstimate(
        dimension=m,
        lower=2.0 ** (2.0 / m) * core,
        upper=2.0 ** (2.0 / (m - 1)) * core,
    )


def torsion_constant(m: int) -> float:
    """``c(m) = (m+2)^-1 (4 pi)^(m/(m+2)) (2 Gamma((m+2)/2))^(2/(m+2))``."""
    if m < 1:
        raise DomainError(f"dimension must be >= 1, got {m}")
    p = m + 2.0
    return (4.0 * math.pi) ** (m / p) * (2.0 * math.gamma(p / 2.0)) ** (2.0 / p) / p


def torsion_eigenvalue_lower_bound(m: int, k: int, torsion: float) -> float:
    """``lambda_k(Omega) >= c(m) P(Omega)^(-2/(m+2)) k^(2/(m+2))``."""
    if not torsion > 0:
        raise DomainError(f"torsional rigidity must be positive, got {torsion}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    e = 2.0 / (m + 2.0)
    return torsion_constant(m) * torsion ** (-e) * k**e


# --------------------------------------------------------------------------
# certified ratios of ball eigenvalues


@dataclass(frozen=True)
class _Interval:
    lo: float
    hi: float

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _sqrt_ratio_interval(m: int, k: int, tol: float) -> _Interval:
    """Interval for ``sqrt(lambda_k(B_m) / lambda_1(B_m))``."""
    z1 = nth_zero((m - 2) / 2, 1, tol)
    if k == 1:
        return _Interval(1.0, 1.0)
    if k <= m + 1:
        zk = nth_zero(m / 2, 1, tol)
        return _Interval(zk.lower / z1.upper, zk.upper / z1.lower)
    spec = bs.ball_eigenvalues(m, k, tol)
    val, err = spec.eigenvalues[k - 1][0], spec.abs_err[k - 1]
    return _Interval(math.sqrt(val - err) / z1.upper, math.sqrt(val + err) / z1.lower)


def _floor_certified(f, m: int, k: int, tol: float, rounds: int = 3):
    """Evaluate monotone ``f(sqrt_ratio)`` and its floor, tightening tol on cliffs.

    Returns ``(value, floor, flag, ratio_interval)``.
    """
    for _ in range(rounds + 1):
        iv = _sqrt_ratio_interval(m, k, tol)
        lo = f(iv.lo)
        hi = f(iv.hi)
        lo -= _FP_SLACK * abs(lo)
        hi += _FP_SLACK * abs(hi)
        if math.floor(lo) == math.floor(hi):
            return f(iv.mid), math.floor(lo), "", iv
        tol /= 10.0
    return f(iv.mid), math.floor(f(iv.mid)), "indeterminate", iv


# --------------------------------------------------------------------------
# component-count bounds under the boundary-measure constraint


def _hausdorff_q(m: int):
    def q(sr: float) -> float:
        # 2^{-(m-1)/m} ((lambda_k/lambda_1)^{(m-1)/2} - 1)
        return 2.0 ** (-(m - 1) / m) * math.expm1((m - 1) * math.log(sr))

    return q


def hausdorff_component_bound(m: int, k: int, tol: float = DEFAULT_TOL) -> BoundReport:
    """Upper bound on the number of components of a boundary-measure minimiser.

    ``omega <= 1 + floor(2^{-(m-1)/m} ((lambda_k(B_m)/lambda_1(B_m))^{(m-1)/2} - 1))``.
    """
    if m < 3 or k < 3:
        raise DomainError(f"bound stated for m >= 3 and k >= 3, got m={m}, k={k}")
    value, fl, flag, iv = _floor_certified(_hausdorff_q(m), m, k, tol)
    return BoundReport(
        dimension=m,
        k=k,
        omega_max=1 + fl,
        applicable=True,
        applicability_reason="always applicable",
        bound_value=value,
        beta=m - 1,
        kind=ConstraintKind.HAUSDORFF_BOUNDARY.value,
        ratio=iv.mid**2,
        err_flag=flag,
    )


def asymptotic_ratio_power_bound(m: int) -> float:
    """Upper bound for ``(j_{m/2} / j_{(m-2)/2})^(m-1)`` from the large-order bracket.

    Uses ``j_{m/2} <= m/2 + a (m/2)^(1/3) + 2 (m/2)^(-1/3)`` and
    ``j_{(m-2)/2} >= (m-2)/2 + a ((m-2)/2)^(1/3)``.
    """
    if m < 4:
        raise DomainError("bracket needs (m-2)/2 >= 1")
    hi = m / 2 + A_CONST * (m / 2) ** (1 / 3) + 2.0 * (m / 2) ** (-1 / 3)
    nu = (m - 2) / 2
    lo = nu + A_CONST * nu ** (1 / 3)
    return math.exp((m - 1) * math.log1p((hi - lo) / lo))


def asymptotic_exponent_bound(m: int) -> float:
    """``exp(2 + 6 m^(-1/3))``; at ``m = 2**15`` this is ``exp(35/16)``."""
    return math.exp(2.0 + 6.0 * m ** (-1.0 / 3.0))


def asymptotic_omega_bound(m: int = ASYMPTOTIC_M) -> BoundReport:
    """Component bound for ``m >= 2**15`` and ``k <= m+1`` via the bracket certificate.

    The exponential bound ``exp(2 + 6 m^(-1/3))`` is non-increasing in ``m``
    and equals ``exp(35/16)`` at ``m = 2**15``; the reported ``omega_max``
    is ``1 + floor(2^{-1+1/m} (exp(2 + 6 m^(-1/3)) - 1))``.
    """
    if m < ASYMPTOTIC_M:
        raise DomainError(f"asymptotic certificate requires m >= 2**15, got {m}")
    direct = asymptotic_ratio_power_bound(m)
    envelope = asymptotic_exponent_bound(m)
    q = 2.0 ** (-1.0 + 1.0 / m) * (envelope - 1.0)
    ok = direct <= envelope
    return BoundReport(
        dimension=m,
        k=4,
        omega_max=1 + math.floor(q),
        applicable=ok,
        applicability_reason="asymptotic bracket" if ok else "bracket bound exceeds exp(2+6m^-1/3)",
        bound_value=q,
        beta=m - 1,
        kind=ConstraintKind.HAUSDORFF_BOUNDARY.value,
        ratio=direct ** (2.0 / (m - 1)),
        err_flag="" if ok else "bracket",
        extras={"ratio_power_bound": direct, "exp_bound": envelope},
    )


def closed_form_asymptotic_omega() -> int:
    """``1 + floor(2^{-1+2^-15} (e^{35/16} - 1))``."""
    return 1 + math.floor(2.0 ** (-1.0 + 2.0**-15) * (math.exp(35.0 / 16.0) - 1.0))


def theorem2v_table(m_max: int, tol: float = DEFAULT_TOL, m_budget: int = DEFAULT_M_BUDGET) -> list[BoundReport]:
    """Component bounds for ``m = 3..m_max`` and ``k <= m+1`` under the boundary constraint.

    Rows for ``m < 2**15`` use computed Bessel zeros; larger ``m`` use the
    bracket certificate.  Each row's ``k`` is the smallest index it covers:
    ``3``, or ``omega_max`` when that exceeds 3 (``omega <= k`` holds trivially).
    """
    if m_max < 3:
        raise DomainError(f"m_max must be >= 3, got {m_max}")
    if min(m_max, ASYMPTOTIC_M - 1) > m_budget:
        raise ResourceError(f"m_max={m_max} exceeds the configured budget {m_budget}")
    rows = []
    for m in range(3, m_max + 1):
        if m >= ASYMPTOTIC_M:
            rep = asymptotic_omega_bound(m)
        else:
            rep = hausdorff_component_bound(m, 3, tol)
        rep.k = max(3, rep.omega_max)
        rows.append(rep)
    return rows


def ball_not_minimiser_check(m: int, tol: float = DEFAULT_TOL) -> bool:
    """True when ``j_{m/2} > 2^{1/(m-1)} j_{(m-2)/2}``, so ``B_m`` cannot minimise ``lambda_2``.

    For ``m >= 2**15`` the lower bracket of ``j_{m/2}`` and the upper bracket
    of ``j_{(m-2)/2}`` are used instead of computed zeros.
    """
    if m < 3:
        raise DomainError(
            "certificate applies for m >= 3; the planar case is settled by the ellipse perturbation"
        )
    factor = 2.0 ** (1.0 / (m - 1))
    if m >= ASYMPTOTIC_M:
        lo = asymptotic_bracket(m / 2).lower
        hi = asymptotic_bracket((m - 2) / 2).upper
        return lo > factor * hi * (1 + _FP_SLACK)
    return ball_not_minimiser_margin(m, tol) > 0


def ball_not_minimiser_margin(m: int, tol: float = DEFAULT_TOL) -> float:
    """Certified lower bound on ``j_{m/2} - 2^{1/(m-1)} j_{(m-2)/2}``."""
    z2 = nth_zero(m / 2, 1, tol)
    z1 = nth_zero((m - 2) / 2, 1, tol)
    factor = 2.0 ** (1.0 / (m - 1))
    return z2.lower - factor * z1.upper * (1 + _FP_SLACK)


# --------------------------------------------------------------------------
# constraints with a homogeneous additive set function


def _t_power(beta: float):
    def p(sr: float) -> float:
        return math.exp(beta * math.log(sr))

    return p


def t_constraint_component_bound(m: int, k: int, beta: float, tol: float = DEFAULT_TOL) -> BoundReport:
    """Component bound ``floor((lambda_k/lambda_1)^{beta/2}) - 1`` under a beta-homogeneous constraint.

    Applicable only when ``k > floor((lambda_k(B_m)/lambda_1(B_m))^{beta/2})``;
    inapplicability is reported, not raised.
    """
    if m < 2 or k < 3 or not beta > 0:
        raise DomainError(f"need m >= 2, k >= 3, beta > 0; got m={m}, k={k}, beta={beta}")
    value, fl, flag, iv = _floor_certified(_t_power(beta), m, k, tol)
    applicable = k > fl
    reason = f"k={k} > floor(ratio)={fl}" if applicable else f"k={k} <= floor(ratio)={fl}"
    return BoundReport(
        dimension=m,
        k=k,
        omega_max=fl - 1 if applicable else None,
        applicable=applicable,
        applicability_reason=reason,
        bound_value=value,
        beta=beta,
        kind=_kind_for_beta(m, beta),
        ratio=value,
        err_flag=flag,
    )


def _kind_for_beta(m: int, beta: float) -> str:
    if beta == m:
        return ConstraintKind.LEBESGUE_MEASURE.value
    if beta == m + 2:
        return ConstraintKind.TORSIONAL_RIGIDITY.value
    return "beta-homogeneous"


def corollary5_tables(
    beta_mode, m_max: int, tol: float = DEFAULT_TOL, m_budget: int = DEFAULT_M_BUDGET
) -> list[BoundReport]:
    """One row per dimension ``m = 2..m_max`` for ``k <= m+1``.

    ``beta_mode`` selects ``beta = m`` (Lebesgue measure) or ``beta = m + 2``
    (torsional rigidity).  The row's ``k`` is the smallest admissible index
    ``max(3, floor(R) + 1)`` with ``R = (j_{m/2}/j_{(m-2)/2})^beta``; rows with
    no admissible ``k <= m+1`` are marked inapplicable.
    """
    kind = ConstraintKind(beta_mode)
    if kind is ConstraintKind.HAUSDORFF_BOUNDARY:
        raise DomainError("component tables cover the Lebesgue and torsion constraints")
    if m_max < 2:
        raise DomainError(f"m_max must be >= 2, got {m_max}")
    if m_max > m_budget:
        raise ResourceError(f"m_max={m_max} exceeds the configured budget {m_budget}")
    rows = []
    for m in range(2, m_max + 1):
        beta = m if kind is ConstraintKind.LEBESGUE_MEASURE else m + 2
        value, fl, flag, _ = _floor_certified(_t_power(beta), m, 2, tol)
        k_min = max(3, fl + 1)
        applicable = k_min <= m + 1
        rows.append(
            BoundReport(
                dimension=m,
                k=k_min,
                omega_max=fl - 1 if applicable else None,
                applicable=applicable,
                applicability_reason=(
                    f"k = {k_min}..{m + 1}" if applicable else f"no k <= {m + 1} exceeds floor(ratio)={fl}"
                ),
                bound_value=value,
                beta=beta,
                kind=kind.value,
                ratio=value,
                err_flag=flag,
            )
        )
    return rows


def enumerate_configurations(
    m: int, k: int, beta: float, refined: bool = False, kind: ConstraintKind | str | None = None
) -> list[Configuration]:
    """Component splits ``(k1, k2)`` compatible with the optimality bound.

    ``k1`` counts components supporting exactly one eigenvalue (equal balls),
    ``k2`` components supporting at least two (at least three when
    ``refined``).  ``(0, 1)`` is the connected minimiser.  Constraints:

    * ``k1 + 2 k2 <= (lambda_k(B_m)/lambda_1(B_m))^{beta/2}``;
    * ``omega <= k``, and with ``k2 = 0`` the balls carry exactly ``k1 = k`` eigenvalues;
    * ``refined``: ``k >= k1 + 3 k2``;
    * boundary-measure constraint: at most one single-eigenvalue component.
    """
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    bound = (bs.lambda_k(m, k) / bs.lambda_1(m)) ** (beta / 2.0)
    hausdorff = kind is not None and ConstraintKind(kind) is ConstraintKind.HAUSDORFF_BOUNDARY
    out = []
    for k2 in range(0, k + 1):
        for k1 in range(0, k + 1 - k2):
            if k1 + k2 < 1 or k1 + 2 * k2 > bound:
                continue
            if k2 == 0 and k1 != k:
                continue
            if refined and k < k1 + 3 * k2:
                continue
            if hausdorff and k1 > 1:
                continue
            out.append(Configuration(k1, k2))
    out.sort(key=lambda c: (c.omega, c.k1))
    return out
