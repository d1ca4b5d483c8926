"""Closed-form supersymmetric algebra for the mixed radial potential.

The potential family is

    V(r) = a*r + b*r**2 + c/r + l*(l+1)/r**2,    b > 0,  r > 0,

in natural radial units (hbar**2/(2m) = 1).  The superpotential ansatz
W(r) = A*r - B/r + D factorizes V - E0 = W**2 - W' exactly when

    A**2 = b,   2*A*D = a,   -2*B*D = c,   B*(B - 1) = l*(l + 1),

which leaves one constraint between the potential parameters,
l*(l+1) = c**2*b/a**2 + c*sqrt(b)/a.  Potentials satisfying it are
conditionally exactly solvable: the partner potential W**2 + W' has the
same functional form with l translated to l + 1, so repeating the
factorization builds a hierarchy of members whose ground states supply
the full spectrum of V in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CONSTRAINT_RTOL = 1e-9


class ValidationError(ValueError):
    """Parameter or argument outside the domain of an operation."""


class NonPositiveB(ValidationError):
    """The quadratic coefficient b must be positive (confining wall)."""


class NegativeL(ValidationError):
    """The angular parameter l must be non-negative."""


class ZeroC(ValidationError):
    """Constrained algebra needs c != 0, otherwise B = -sqrt(b)*c/a vanishes."""


class ConstraintViolated(ValidationError):
    """Parameters do not satisfy the solvability constraint.

    Carries the residual |B*(B-1) - l*(l+1)| when one was computed.
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class NonPositiveRadius(ValidationError):
    """Radial coordinate must be strictly positive."""


class IndexMismatch(ValidationError):
    """Hierarchy members passed in the wrong order or not adjacent."""


@dataclass(frozen=True)
class PotentialParams:
    """Coefficients of V(r) = a*r + b*r**2 + c/r + l*(l+1)/r**2 + offset.

    ``offset`` is an additive constant used to express hierarchy members in
    the energy scale of the original potential.
    """

    a: float
    b: float
    c: float
    l: float
    offset: float = 0.0


@dataclass(frozen=True)
class SuperpotentialParams:
    """Coefficients of the superpotential W(r) = A*r - B/r + D."""

    A: float
    B: float
    D: float


@dataclass(frozen=True)
class ConstraintRoots:
    """Both solutions of l_eff*(l_eff+1)*a**2 - c*sqrt(b)*a - c**2*b = 0.

    ``plus_root`` is c*sqrt(b)/l_eff (None when l_eff = 0, where it
    diverges).  ``minus_root`` is -c*sqrt(b)/(l_eff + 1); it is the branch
    that realizes the translation l -> l + 1 between consecutive hierarchy
    members and is always the ``selected`` one.
    """

    plus_root: float | None
    minus_root: float
    selected: float


@dataclass(frozen=True)
class HierarchyMember:
    """Member k of the partner-potential hierarchy.

    ``params`` holds the translated coefficients (a_k, l_k = l + k) plus the
    accumulated scale shift 2*k*sqrt(b) in ``offset``, so evaluating the
    member directly yields energies in the original scale.
    ``ground_energy`` is the closed-form level E_k of the original
    potential, which equals this member's ground energy.
    """

    k: int
    params: PotentialParams
    superpotential: SuperpotentialParams
    remainder: float
    ground_energy: float


def validate_params(params: PotentialParams, constrained: bool = False) -> PotentialParams:
    """Check domain conditions; return ``params`` unchanged if they hold.

    With ``constrained=True`` additionally require the sign pattern needed
    by the factorization (c != 0, a != 0, sign(a) = -sign(c)).
    """
    if not params.b > 0:
        raise NonPositiveB("b must be positive")
    if params.l < 0:
        raise NegativeL("l must be non-negative")
    if constrained:
        if params.c == 0:
            raise ZeroC("constrained algebra requires c != 0")
        if params.a == 0 or params.a * params.c >= 0:
            raise ConstraintViolated(
                "constrained algebra requires a != 0 with sign(a) = -sign(c)"
            )
    return params


def solve_constraint(l_eff: float, b: float, c: float) -> ConstraintRoots:
    """Solve the solvability constraint for the slope a at angular parameter l_eff.

    The constraint, written as a quadratic in a, is
    l_eff*(l_eff+1)*a**2 - c*sqrt(b)*a - c**2*b = 0.
    """
    if not b > 0:
        raise NonPositiveB("b must be positive")
    if c == 0:
        raise ZeroC("constrained algebra requires c != 0")
    if l_eff < 0:
        raise NegativeL("l_eff must be non-negative")
    t = c * math.sqrt(b)
    plus = t / l_eff if l_eff > 0 else None
    if plus is not None and not math.isfinite(plus):
        plus = None  # diverging branch, same as l_eff = 0
    minus = -t / (l_eff + 1.0)
    return ConstraintRoots(plus_root=plus, minus_root=minus, selected=minus)


def match_superpotential(params: PotentialParams, strict: bool = True) -> SuperpotentialParams:
    """Match W(r) = A*r - B/r + D against the potential coefficients.

    A = sqrt(b), D = a/(2*sqrt(b)), B = -sqrt(b)*c/a.  The remaining
    identity B*(B-1) = l*(l+1) holds only on constrained parameters; in
    strict mode a violation beyond CONSTRAINT_RTOL raises
    ConstraintViolated with the residual attached.
    """
    validate_params(params, constrained=True)
    a_coef = math.sqrt(params.b)
    d_coef = params.a / (2.0 * a_coef)
    b_coef = -a_coef * params.c / params.a
    sp = SuperpotentialParams(A=a_coef, B=b_coef, D=d_coef)
    residual = constraint_residual(sp, params.l)
    if strict and residual > CONSTRAINT_RTOL * max(1.0, params.l * (params.l + 1.0)):
        raise ConstraintViolated(
            f"B*(B-1) - l*(l+1) residual {residual:.3e} exceeds tolerance; "
            "parameters are not conditionally solvable",
            residual=residual,
        )
    return sp


def constraint_residual(sp: SuperpotentialParams, l: float) -> float:
    """|B*(B-1) - l*(l+1)|, zero exactly when the solvability constraint holds."""
    return abs(sp.B * (sp.B - 1.0) - l * (l + 1.0))


def ground_energy_bare(params: PotentialParams) -> float:
    """Ground energy -a**2/(4b) - 2bc/a + sqrt(b) of the bare potential.

    Exact for constrained parameters; the additive ``offset`` field is
    deliberately excluded.
    """
    validate_params(params, constrained=True)
    return (
        -params.a * params.a / (4.0 * params.b)
        - 2.0 * params.b * params.c / params.a
        + math.sqrt(params.b)
    )


def remainder(sp: SuperpotentialParams) -> float:
    """Constant D**2 - 2*A*B + A separating a partner pair's energy scales."""
    return sp.D * sp.D - 2.0 * sp.A * sp.B + sp.A


def closed_form_energy(l: float, b: float, c: float, k: int) -> float:
    """Level k of the constrained potential, in the original energy scale.

    E_k = -c**2/(4*(l+k+1)**2) + 2*sqrt(b)*(l+1) + (4k+1)*sqrt(b).
    """
    if not b > 0:
        raise NonPositiveB("b must be positive")
    if c == 0:
        raise ZeroC("constrained algebra requires c != 0")
    if l < 0:
        raise NegativeL("l must be non-negative")
    if k < 0:
        raise ValidationError("level index k must be non-negative")
    sqrt_b = math.sqrt(b)
    m = l + k + 1.0
    return -c * c / (4.0 * m * m) + 2.0 * sqrt_b * (l + 1.0) + (4.0 * k + 1.0) * sqrt_b


def build_hierarchy(l: float, b: float, c: float, k_max: int) -> list[HierarchyMember]:
    """Construct hierarchy members k = 0..k_max for constrained parameters.

    Member k carries a_k = -c*sqrt(b)/(l+k+1), l_k = l + k and the
    accumulated shift 2*k*sqrt(b).  B is set to l_k + 1 directly (the value
    the matching formula forces for constrained a_k), which keeps the
    translational identities exact in floating point.
    """
    if k_max < 0:
        raise ValidationError("k_max must be non-negative")
    sqrt_b = math.sqrt(b) if b > 0 else 0.0
    members = []
    for k in range(k_max + 1):
        l_k = l + k
        a_k = solve_constraint(l_k, b, c).selected
        params = validate_params(
            PotentialParams(a=a_k, b=b, c=c, l=l_k, offset=2.0 * k * sqrt_b),
            constrained=True,
        )
        sp = SuperpotentialParams(A=sqrt_b, B=l_k + 1.0, D=a_k / (2.0 * sqrt_b))
        members.append(
            HierarchyMember(
                k=k,
                params=params,
                superpotential=sp,
                remainder=remainder(sp),
                ground_energy=closed_form_energy(l, b, c, k),
            )
        )
    return members


def _bare_params(target) -> PotentialParams:
    return target.params if isinstance(target, HierarchyMember) else target


def _require_positive_radius(r) -> None:
    if np.any(np.asarray(r) <= 0.0):
        raise NonPositiveRadius("r must be strictly positive")


def eval_potential(target, r):
    """Evaluate a member or parameter set at radius r (scalar or array).

    Includes the constant ``offset``, so hierarchy members evaluate in the
    original energy scale.
    """
    p = _bare_params(target)
    _require_positive_radius(r)
    return p.a * r + p.b * r * r + p.c / r + p.l * (p.l + 1.0) / (r * r) + p.offset


def eval_superpotential(sp: SuperpotentialParams, r):
    """W(r) = A*r - B/r + D at radius r (scalar or array)."""
    _require_positive_radius(r)
    return sp.A * r - sp.B / r + sp.D


def ground_wavefunction(sp: SuperpotentialParams, r):
    """Unnormalized ground-state amplitude r**B * exp(-A*r**2/2 - D*r).

    Obtained by integrating the defining relation W = -psi'/psi; vanishes
    at both ends of the half line for A > 0, B > 0.
    """
    _require_positive_radius(r)
    if sp.B <= 0:
        raise ConstraintViolated("ground state requires B > 0")
    return r**sp.B * np.exp(-0.5 * sp.A * r * r - sp.D * r)


@dataclass(frozen=True)
class ShapeInvarianceReport:
    """Coefficient-wise comparison of a partner pair's Riccati forms.

    Differences are lower minus upper between W**2 + W' of the lower member
    and W**2 - W' + remainder_shift of the upper member, power by power.
    ``remainder_shift`` is the closed-form level spacing of the pair, the
    unique constant for which exact shape invariance would make the two
    sides coincide; with that choice ``max_pointwise`` isolates the genuine
    defect, the drift of the linear coefficient a_k -> a_{k+1}.
    """

    inverse_square_diff: float
    inverse_r_diff: float
    r_squared_diff: float
    r_diff: float
    constant_diff: float
    remainder_shift: float
    max_pointwise: float


def shape_invariance_report(
    lower: HierarchyMember, upper: HierarchyMember, grid
) -> ShapeInvarianceReport:
    """Compare consecutive hierarchy members coefficient by coefficient.

    ``grid`` is an iterable of radii over which the maximum pointwise
    difference of the two Riccati sides is taken.
    """
    if upper.k != lower.k + 1:
        raise IndexMismatch(
            f"upper member index {upper.k} must be lower index {lower.k} + 1"
        )
    lo, up = lower.superpotential, upper.superpotential
    shift = upper.ground_energy - lower.ground_energy

    inverse_square = lo.B * (lo.B + 1.0) - up.B * (up.B - 1.0)
    inverse_r = 2.0 * (up.B * up.D - lo.B * lo.D)
    r_squared = lo.A * lo.A - up.A * up.A
    r_linear = 2.0 * (lo.A * lo.D - up.A * up.D)
    constant = (
        (lo.D * lo.D - 2.0 * lo.A * lo.B + lo.A)
        - (up.D * up.D - 2.0 * up.A * up.B - up.A + shift)
    )

    r = np.asarray(grid, dtype=float)
    _require_positive_radius(r)
    w_lo = eval_superpotential(lo, r)
    w_up = eval_superpotential(up, r)
    lhs = w_lo * w_lo + (lo.A + lo.B / (r * r))
    rhs = w_up * w_up - (up.A + up.B / (r * r)) + shift
    return ShapeInvarianceReport(
        inverse_square_diff=inverse_square,
        inverse_r_diff=inverse_r,
        r_squared_diff=r_squared,
        r_diff=r_linear,
        constant_diff=constant,
        remainder_shift=shift,
        max_pointwise=float(np.max(np.abs(lhs - rhs))),
    )


RECORD_FIELDS = ("k", "a_k", "l_k", "offset", "A", "B", "D", "R", "E_k")


def member_record(member: HierarchyMember) -> dict:
    """Flatten a member to the record used by CSV/JSON output."""
    return {
        "k": member.k,
        "a_k": member.params.a,
        "l_k": member.params.l,
        "offset": member.params.offset,
        "A": member.superpotential.A,
        "B": member.superpotential.B,
        "D": member.superpotential.D,
        "R": member.remainder,
        "E_k": member.ground_energy,
    }
