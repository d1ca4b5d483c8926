"""Shooting eigensolver for the reduced radial Schrodinger equation.

Solves -u''(r) + V(r) u(r) = E u(r) on [r_min, r_max] with u regular at the
origin, by integrating the first-order system (u, u') outward with a
fixed-step fourth-order Runge-Kutta scheme and bisecting the energy on the
node count and terminal sign of u.  The confining b*r**2 wall makes the
growing solution dominate at a detuned energy, so the terminal sign flips
exactly at an eigenvalue.

Because the equation is linear in (u, u'), each Runge-Kutta step is a 2x2
transfer matrix whose entries depend only on the potential samples; the
matrices for a whole sweep are assembled vectorized, and the sequential
pass reduces to one multiply-accumulate per step.  The Gill variant of the
tableau is available behind a flag for round-off comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .susy import HierarchyMember, NonPositiveB, PotentialParams, ValidationError, eval_potential

MIN_STEPS = 1000
DEFAULT_STEPS = 40000
DEFAULT_R_MIN = 1e-6
DEFAULT_TOL = 1e-9
RESCALE_LIMIT = 1e100
WALL_MARGIN = 25.0
CEILING_STEPS = 200.0


class SolverError(RuntimeError):
    """Numerical failure inside the eigensolver."""


class NonFinite(SolverError):
    """Integration state became non-finite despite rescaling."""


class BracketFailed(SolverError):
    """No node-count transition found below the scan ceiling."""


class ZeroNorm(SolverError):
    """Wavefunction norm underflowed; cannot normalize."""


class InvalidGrid(ValidationError):
    """Grid fields violate 0 < r_min < r_max or the step-count minimum."""


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid with n_steps intervals between r_min and r_max."""

    r_min: float
    r_max: float
    n_steps: int

    def __post_init__(self):
        if not (0 < self.r_min < self.r_max):
            raise InvalidGrid("grid requires 0 < r_min < r_max")
        if self.n_steps < MIN_STEPS:
            raise InvalidGrid(f"n_steps below minimum ({MIN_STEPS})")

    @property
    def step(self) -> float:
        return (self.r_max - self.r_min) / self.n_steps

    def radii(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n_steps + 1)


@dataclass(frozen=True)
class ShootResult:
    """Outcome of one outward integration at a trial energy."""

    terminal_value: float
    terminal_log_scale: float
    nodes: int


@dataclass(frozen=True)
class EigenResult:
    """Converged eigenvalue with its normalized wavefunction samples.

    ``samples`` is an array of (r, u) rows with Simpson norm 1;
    ``residual`` is the maximum local defect |-u'' + (V - E) u| / max|u|.
    """

    n: int
    energy: float
    samples: np.ndarray
    residual: float


def build_grid(
    potential,
    target_energy: float,
    r_min: float | None = None,
    r_max: float | None = None,
    n_steps: int | None = None,
) -> RadialGrid:
    """Default grid sized so the quadratic wall clears target_energy.

    r_max solves b*r_max**2 = target_energy + 25 (never below 8), which
    leaves enough forbidden region for the terminal sign to be meaningful
    without pushing the integration into pure overflow territory.
    Explicit keyword values override any field.
    """
    p = _bare(potential)
    if not p.b > 0:
        raise NonPositiveB("b must be positive")
    if r_max is None:
        r_max = max(8.0, math.sqrt(max(0.0, target_energy + WALL_MARGIN) / p.b))
    return RadialGrid(
        r_min=DEFAULT_R_MIN if r_min is None else r_min,
        r_max=r_max,
        n_steps=DEFAULT_STEPS if n_steps is None else n_steps,
    )


def auto_grid(
    potential,
    n_top: int,
    r_min: float | None = None,
    r_max: float | None = None,
    n_steps: int | None = None,
) -> RadialGrid:
    """Grid sized for levels up to index n_top without a caller-supplied target.

    Estimates the top energy from the potential minimum plus the oscillator
    ladder spacing, then defers to build_grid.
    """
    p = _bare(potential)
    if not p.b > 0:
        raise NonPositiveB("b must be positive")
    probe = build_grid(p, 0.0, r_min=r_min, n_steps=MIN_STEPS)
    v_min = float(np.min(eval_potential(p, probe.radii())))
    sqrt_b = math.sqrt(p.b)
    target = v_min + (4.0 * n_top + 2.0 * p.l + 7.0) * sqrt_b
    return build_grid(p, target, r_min=r_min, r_max=r_max, n_steps=n_steps)


def _bare(potential) -> PotentialParams:
    return potential.params if isinstance(potential, HierarchyMember) else potential


# Butcher tableaus with nodes (0, 1/2, 1/2, 1): classical and Gill.
_SQRT2 = math.sqrt(2.0)
_CLASSICAL = (
    (0.5,),
    (0.0, 0.5),
    (0.0, 0.0, 1.0),
    (1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0),
)
_GILL = (
    (0.5,),
    ((_SQRT2 - 1.0) / 2.0, (2.0 - _SQRT2) / 2.0),
    (0.0, -_SQRT2 / 2.0, 1.0 + _SQRT2 / 2.0),
    (1.0 / 6.0, (2.0 - _SQRT2) / 6.0, (2.0 + _SQRT2) / 6.0, 1.0 / 6.0),
)


def _transfer_coefficients(w0, wh, w1, h, tableau):
    """Per-step 2x2 transfer matrices of one Runge-Kutta step.

    For the linear system (u, v)' = [[0, 1], [w(r), 0]] (u, v) every
    explicit stage is a matrix acting on the state, so the full update is
    (u, v) <- T (u, v) with T built from the tableau and the potential
    samples w0, wh, w1 at the step's start, midpoint and end.
    """
    (a21,), (a31, a32), (a41, a42, a43), weights = tableau

    def apply_j(w, m):
        # J(w) @ M for M given as entry arrays (m11, m12, m21, m22)
        m11, m12, m21, m22 = m
        return (m21, m22, w * m11, w * m12)

    def shifted(*terms):
        # I + h * sum(coef * K)
        m11 = m12 = m21 = m22 = 0.0
        for coef, k in terms:
            if coef == 0.0:
                continue
            m11 = m11 + coef * k[0]
            m12 = m12 + coef * k[1]
            m21 = m21 + coef * k[2]
            m22 = m22 + coef * k[3]
        return (1.0 + h * m11, h * m12, h * m21, 1.0 + h * m22)

    k1 = apply_j(w0, (1.0, 0.0, 0.0, 1.0))
    k2 = apply_j(wh, shifted((a21, k1)))
    k3 = apply_j(wh, shifted((a31, k1), (a32, k2)))
    k4 = apply_j(w1, shifted((a41, k1), (a42, k2), (a43, k3)))
    b1, b2, b3, b4 = weights
    return shifted((b1, k1), (b2, k2), (b3, k3), (b4, k4))


class _Workspace:
    """Precomputed potential samples for repeated shots on one grid."""

    def __init__(self, potential, grid: RadialGrid, l_eff: float | None):
        p = _bare(potential)
        if not p.b > 0:
            raise NonPositiveB("b must be positive")
        self.params = p
        self.grid = grid
        self.l_eff = p.l if l_eff is None else l_eff
        if self.l_eff < 0:
            raise ValidationError("l_eff must be non-negative")
        self.r = grid.radii()
        self.v_nodes = np.asarray(eval_potential(p, self.r), dtype=float)
        self.v_mid = np.asarray(
            eval_potential(p, self.r[:-1] + 0.5 * grid.step), dtype=float
        )
        # series start u ~ r**(l_eff + 1), forced by the centrifugal term
        self.u0 = grid.r_min ** (self.l_eff + 1.0)
        self.du0 = (self.l_eff + 1.0) * grid.r_min**self.l_eff
        self.v_min = float(np.min(self.v_nodes))

    def propagate(self, energy: float, gill: bool = False, collect: bool = False):
        """March outward at one energy; returns (ShootResult, samples or None)."""
        w0 = self.v_nodes[:-1] - energy
        wh = self.v_mid - energy
        w1 = self.v_nodes[1:] - energy
        with np.errstate(over="ignore", invalid="ignore"):
            # pathological potentials overflow here; the marching loop below
            # turns the resulting non-finite entries into NonFinite
            tp, tq, tr, ts = _transfer_coefficients(
                w0, wh, w1, self.grid.step, _GILL if gill else _CLASSICAL
            )
        p_list = tp.tolist()
        q_list = tq.tolist()
        r_list = tr.tolist()
        s_list = ts.tolist()

        u, v = self.u0, self.du0
        nodes = 0
        negative = False  # u starts positive
        log_scale = 0.0
        last = len(p_list) - 1
        us = [u] if collect else None
        for i in range(len(p_list)):
            un = p_list[i] * u + q_list[i] * v
            v = r_list[i] * u + s_list[i] * v
            u = un
            if u > RESCALE_LIMIT or u < -RESCALE_LIMIT or v > RESCALE_LIMIT or v < -RESCALE_LIMIT:
                m = max(abs(u), abs(v))
                if not math.isfinite(m):
                    raise NonFinite("integration state overflowed to non-finite values")
                u /= m
                v /= m
                log_scale += math.log10(m)
                if collect:
                    us = [x / m for x in us]
            if i < last:  # interior points only; endpoints excluded from the count
                if u == 0.0:
                    nodes += 1
                    negative = not negative
                elif (u < 0.0) != negative:
                    nodes += 1
                    negative = u < 0.0
            if collect:
                us.append(u)
        if not (math.isfinite(u) and math.isfinite(v)):
            raise NonFinite("integration state became non-finite")
        result = ShootResult(terminal_value=u, terminal_log_scale=log_scale, nodes=nodes)
        return result, (np.asarray(us) if collect else None)


def integrate_shoot(
    potential,
    energy: float,
    grid: RadialGrid,
    l_eff: float | None = None,
    gill: bool = False,
) -> ShootResult:
    """One outward integration at a trial energy.

    Starts from the series behavior u(r_min) = r_min**(l_eff+1),
    u'(r_min) = (l_eff+1)*r_min**l_eff, rescales the state whenever it
    exceeds 1e100 (accumulating the log10 factor in terminal_log_scale) and
    counts strict sign changes of u at interior grid points.
    """
    result, _ = _Workspace(potential, grid, l_eff).propagate(energy, gill=gill)
    return result


def _find_in_workspace(
    ws: _Workspace,
    n: int,
    tol: float,
    gill: bool,
    ceiling: float | None,
    e_start: float | None,
) -> EigenResult:
    if n < 0:
        raise ValidationError("level index n must be non-negative")
    if not tol > 0:
        raise ValidationError("tol must be positive")
    sqrt_b = math.sqrt(ws.params.b)
    if ceiling is None:
        ceiling = ws.v_min + CEILING_STEPS * sqrt_b
    energy = min(0.0, ws.v_min) if e_start is None else e_start

    # scan upward in sqrt(b) steps until the node count passes n
    result, _ = ws.propagate(energy, gill=gill)
    if result.nodes > n:
        raise BracketFailed(f"scan start {energy:g} already above level {n}")
    while result.nodes <= n:
        energy += sqrt_b
        if energy > ceiling:
            raise BracketFailed(
                f"no level with more than {n} nodes below ceiling {ceiling:g}"
            )
        result, _ = ws.propagate(energy, gill=gill)
    e_hi, e_lo = energy, energy - sqrt_b
    sign_hi = result.terminal_value < 0.0

    # bisect on (nodes > n) or (nodes == n with the above-bracket sign)
    for _ in range(256):
        if e_hi - e_lo < tol:
            break
        e_mid = 0.5 * (e_lo + e_hi)
        result, _ = ws.propagate(e_mid, gill=gill)
        above = result.nodes > n or (
            result.nodes == n and (result.terminal_value < 0.0) == sign_hi
        )
        if above:
            e_hi = e_mid
        else:
            e_lo = e_mid
    else:
        raise SolverError("bisection failed to converge")

    energy = 0.5 * (e_lo + e_hi)
    shot, us = ws.propagate(energy, gill=gill, collect=True)
    if shot.nodes != n:
        # converged midpoint can sit a hair above the eigenvalue; the lower
        # bracket edge is guaranteed to carry n nodes
        shot, us = ws.propagate(e_lo, gill=gill, collect=True)
        if shot.nodes != n:
            raise SolverError(
                f"converged solution has {shot.nodes} nodes, expected {n}"
            )
    samples = np.column_stack((ws.r, us))
    samples, _ = normalize(samples)
    defect = residual_check(ws.params, energy, samples)
    return EigenResult(n=n, energy=energy, samples=samples, residual=defect)


def find_eigenvalue(
    potential,
    n: int,
    grid: RadialGrid | None = None,
    tol: float = DEFAULT_TOL,
    l_eff: float | None = None,
    gill: bool = False,
    ceiling: float | None = None,
    e_start: float | None = None,
) -> EigenResult:
    """Locate the eigenvalue with exactly n interior nodes.

    Brackets by scanning the energy upward from min(0, min V) in steps of
    sqrt(b) (levels of this family are about 4*sqrt(b) apart, so no level
    can be skipped), then bisects until the bracket is narrower than tol.
    ``e_start`` lets spectrum sweeps resume the scan from the previous
    level instead of the bottom; ``ceiling`` overrides the scan cutoff.
    """
    p = _bare(potential)
    if grid is None:
        grid = auto_grid(p, n)
    ws = _Workspace(p, grid, l_eff)
    return _find_in_workspace(ws, n, tol, gill, ceiling, e_start)


def solve_spectrum(
    potential,
    n_max: int,
    grid: RadialGrid | None = None,
    tol: float = DEFAULT_TOL,
    l_eff: float | None = None,
    gill: bool = False,
) -> list[EigenResult]:
    """Eigenvalues for n = 0..n_max, strictly increasing, one node per index."""
    if n_max < 0:
        raise ValidationError("n_max must be non-negative")
    p = _bare(potential)
    if grid is None:
        grid = auto_grid(p, n_max)
    ws = _Workspace(p, grid, l_eff)
    results: list[EigenResult] = []
    previous: float | None = None
    for n in range(n_max + 1):
        res = _find_in_workspace(ws, n, tol, gill, None, previous)
        if previous is not None and res.energy <= previous:
            raise SolverError("spectrum is not strictly increasing")
        results.append(res)
        previous = res.energy
    return results


def normalize(samples: np.ndarray):
    """Rescale (r, u) samples so the composite-Simpson integral of u**2 is 1.

    Returns the rescaled samples and the prior norm.  The grid must be
    uniform with at least 3 points; an odd interval count is closed with a
    trapezoid on the final interval.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2 or samples.shape[0] < 3:
        raise ValidationError("samples must be an (m, 2) array with m >= 3")
    r = samples[:, 0]
    u = samples[:, 1]
    h = r[1] - r[0]
    norm = _simpson(u * u, h)
    if not math.isfinite(norm) or norm <= 0.0:
        raise ZeroNorm("wavefunction norm underflowed")
    scale = 1.0 / math.sqrt(norm)
    return np.column_stack((r, u * scale)), norm


def _simpson(y: np.ndarray, h: float) -> float:
    n = len(y) - 1
    if n % 2:  # close an odd interval count with one trapezoid
        tail = 0.5 * h * (y[-2] + y[-1])
        y = y[:-1]
        n -= 1
    else:
        tail = 0.0
    if n == 0:
        return float(tail)
    acc = y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-1:2])
    return float(h / 3.0 * acc + tail)


def residual_check(potential, energy: float, samples: np.ndarray) -> float:
    """Maximum local defect |-u''_fd + (V - E) u| / max|u| over the interior.

    u'' is formed by 3-point central differences; the 2% of points nearest
    each endpoint are excluded from the maximum.
    """
    samples = np.asarray(samples, dtype=float)
    p = _bare(potential)
    r = samples[:, 0]
    u = samples[:, 1]
    h = r[1] - r[0]
    upp = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
    defect = np.abs(-upp + (np.asarray(eval_potential(p, r[1:-1])) - energy) * u[1:-1])
    skip = max(1, int(0.02 * len(r)))
    trimmed = defect[skip : len(defect) - skip] if len(defect) > 2 * skip else defect
    peak = float(np.max(np.abs(u)))
    if peak == 0.0:
        raise ZeroNorm("wavefunction is identically zero")
    return float(np.max(trimmed)) / peak
