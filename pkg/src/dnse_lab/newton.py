"""Newton continuation of strong-coupling patterns to finite coupling.

The Hessian of the energy functional is (up to a factor 2 shared with the
gradient) a symmetric tridiagonal matrix with diagonal 2 - E - 3 c psi**2,
off-diagonal -1 and, under PBC, -1 in the two corners.  Each Newton step
solves this system in O(N) by Thomas elimination plus a rank-1
Sherman-Morrison correction for the corners.  The energy is re-estimated
before every step from the cubic sum formula

    E(k) = -c sum psi**3 / sum psi        (PBC)

falling back to the Rayleigh quotient when the amplitude sum is too small
(exactly antisymmetric states make the formula 0/0; both estimators agree
at any true solution).  After each step the state is renormalized to unit
norm by default, which pins the iteration to the normalized solution
branch instead of drifting along the amplitude-rescaling family.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import (
    LatticeTooSmall,
    NoConvergence,
    SingularJacobian,
    SumTooSmall,
    ZeroState,
)
from .lattice import Boundary, LatticeState, ModelParams, normalize, residual
from .patterns import PatternCounts, count_pattern, quantize_state


@dataclass(frozen=True)
class JacobianMatrix:
    """Symmetric (cyclic) tridiagonal Hessian/2, stored in O(N)."""

    diag: np.ndarray
    periodic: bool
    off: float = -1.0

    def __post_init__(self):
        d = np.array(self.diag, dtype=float, copy=True)
        d.flags.writeable = False
        object.__setattr__(self, "diag", d)

    @property
    def n(self) -> int:
        return self.diag.size

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.off * x[:-1]
        y[:-1] += self.off * x[1:]
        if self.periodic:
            y[0] += self.off * x[-1]
            y[-1] += self.off * x[0]
        return y

    def dense(self) -> np.ndarray:
        """Materialize the full matrix (tests and tiny systems only)."""
        a = np.diag(self.diag)
        idx = np.arange(self.n - 1)
        a[idx, idx + 1] = self.off
        a[idx + 1, idx] = self.off
        if self.periodic:
            a[0, -1] += self.off
            a[-1, 0] += self.off
        return a


@dataclass(frozen=True)
class NewtonConfig:
    """Iteration tolerances and switches.

    sum_threshold is the cutoff |sum psi| below which the cubic energy
    estimator is abandoned; None means 1e-8 * sqrt(N), scaled with lattice
    size so random cancellation on large lattices is handled uniformly.
    """

    tol_residual: float = 1e-12
    max_iter: int = 200
    structure_change_threshold: float = 1.0
    sum_threshold: Optional[float] = None
    renormalize: bool = True
    pivot_rel_threshold: float = 1e-14

    def __post_init__(self):
        if self.tol_residual <= 0 or self.max_iter <= 0:
            raise ValueError("tolerance and max_iter must be positive")
        if self.structure_change_threshold <= 0 or self.pivot_rel_threshold <= 0:
            raise ValueError("thresholds must be positive")
        if self.sum_threshold is not None and self.sum_threshold <= 0:
            raise ValueError("sum_threshold must be positive")

    def effective_sum_threshold(self, n_sites: int) -> float:
        if self.sum_threshold is not None:
            return self.sum_threshold
        return 1e-8 * np.sqrt(n_sites)


@dataclass(frozen=True)
class NewtonReport:
    """Per-run diagnostics; histories have length iterations + 1."""

    iterations: int
    energy_history: tuple
    residual_history: tuple
    converged: bool
    structure_changed: bool = False
    structure_change_iteration: Optional[int] = None
    final_counts: Optional[PatternCounts] = None
    final_norm: float = 0.0
    seed: Optional[int] = None

    def as_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "E": self.energy_history[-1],
            "E_history": list(self.energy_history),
            "residual_history": list(self.residual_history),
            "structure_changed": self.structure_changed,
            "structure_change_iteration": self.structure_change_iteration,
            "counts": self.final_counts.as_dict() if self.final_counts else None,
            "final_norm": self.final_norm,
            "seed": self.seed,
        }


def energy_estimate(
    state: LatticeState, params: ModelParams, sum_threshold: Optional[float] = None
) -> float:
    """Cubic-sum energy estimator, defined for PBC only."""
    if params.boundary is not Boundary.PERIODIC:
        raise ValueError("the cubic energy estimator is defined for PBC only")
    psi = state.values
    total = float(np.sum(psi))
    cutoff = sum_threshold if sum_threshold is not None else 1e-8 * np.sqrt(psi.size)
    if abs(total) < cutoff:
        raise SumTooSmall(f"|sum psi| = {abs(total):.3e} below {cutoff:.3e}")
    return -params.c * float(np.sum(psi**3)) / total


def rayleigh_energy(state: LatticeState, params: ModelParams) -> float:
    """Rayleigh-quotient energy; agrees with the cubic estimator at solutions."""
    norm2 = state.norm_squared()
    if norm2 == 0.0:
        raise ZeroState("Rayleigh quotient undefined for the zero state")
    # residual at E = 0 is the operator applied to psi
    applied = residual(state, params, 0.0)
    return float(np.dot(state.values, applied)) / norm2


def assemble_jacobian(state: LatticeState, params: ModelParams, energy: float) -> JacobianMatrix:
    """Build the (cyclic) tridiagonal Newton matrix at a state."""
    if state.n_sites < 3:
        raise LatticeTooSmall("tridiagonal assembly needs at least 3 sites")
    diag = 2.0 - energy - 3.0 * params.c * state.values**2
    return JacobianMatrix(diag=diag, periodic=state.boundary is Boundary.PERIODIC)


def _thomas(diag: np.ndarray, rhs: np.ndarray, pivot_tol: float) -> np.ndarray:
    """Thomas elimination for off-diagonals fixed at -1."""
    n = diag.size
    cp = np.empty(n)
    dp = np.empty(n)
    den = diag[0]
    if abs(den) < pivot_tol:
        raise SingularJacobian(f"pivot {den:.3e} at row 0")
    cp[0] = -1.0 / den
    dp[0] = rhs[0] / den
    for i in range(1, n):
        den = diag[i] + cp[i - 1]
        if abs(den) < pivot_tol:
            raise SingularJacobian(f"pivot {den:.3e} at row {i}")
        cp[i] = -1.0 / den
        dp[i] = (rhs[i] + dp[i - 1]) / den
    for i in range(n - 2, -1, -1):
        dp[i] -= cp[i] * dp[i + 1]
    return dp


def solve_linear(jac: JacobianMatrix, rhs: np.ndarray, pivot_rel_threshold: float = 1e-14) -> np.ndarray:
    """Solve J x = rhs in O(N).

    Open boundary: plain Thomas elimination.  PBC: the corner entries are
    peeled off as a rank-1 update and restored by the Sherman-Morrison
    formula.  A pivot below pivot_rel_threshold times the matrix scale
    raises SingularJacobian.
    """
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (jac.n,):
        raise ValueError("rhs length does not match the matrix")
    scale = max(float(np.max(np.abs(jac.diag))), 1.0)
    pivot_tol = pivot_rel_threshold * scale

    if not jac.periodic:
        return _thomas(jac.diag, rhs, pivot_tol)

    if jac.n < 3:
        raise LatticeTooSmall("cyclic solve needs at least 3 sites")

    diag = jac.diag
    gamma = -(abs(diag[0]) + 1.0)
    t_diag = diag.copy()
    t_diag[0] -= gamma
    t_diag[-1] -= 1.0 / gamma  # corners are -1, -1: product/gamma

    y = _thomas(t_diag, rhs, pivot_tol)
    u = np.zeros(jac.n)
    u[0] = gamma
    u[-1] = -1.0
    q = _thomas(t_diag, u, pivot_tol)

    # v = (1, 0, ..., 0, -1/gamma)
    vy = y[0] - y[-1] / gamma
    vq = q[0] - q[-1] / gamma
    den = 1.0 + vq
    if abs(den) < pivot_rel_threshold:
        raise SingularJacobian(f"rank-1 correction denominator {den:.3e}")
    return y - q * (vy / den)


def _dense_small_jacobian(state: LatticeState, params: ModelParams, energy: float) -> np.ndarray:
    """Direct Newton matrix for N <= 2, where the band description breaks."""
    psi = state.values
    n = psi.size
    diag = 2.0 - energy - 3.0 * params.c * psi**2
    if n == 1:
        if state.boundary is Boundary.PERIODIC:
            # both neighbors are the site itself, the hops cancel
            return np.array([[-energy - 3.0 * params.c * psi[0] ** 2]])
        return np.array([[diag[0]]])
    off = -2.0 if state.boundary is Boundary.PERIODIC else -1.0
    return np.array([[diag[0], off], [off, diag[1]]])


def _newton_step(state: LatticeState, params: ModelParams, energy: float,
                 config: NewtonConfig) -> np.ndarray:
    res = residual(state, params, energy)
    if state.n_sites < 3:
        jac = _dense_small_jacobian(state, params, energy)
        det = np.linalg.det(jac)
        if abs(det) < config.pivot_rel_threshold * max(np.max(np.abs(jac)), 1.0):
            raise SingularJacobian(f"small-system determinant {det:.3e}")
        return np.linalg.solve(jac, res)
    jac = assemble_jacobian(state, params, energy)
    return solve_linear(jac, res, config.pivot_rel_threshold)


def _estimate(state: LatticeState, params: ModelParams, config: NewtonConfig) -> float:
    if params.boundary is Boundary.PERIODIC:
        try:
            return energy_estimate(state, params, config.effective_sum_threshold(state.n_sites))
        except SumTooSmall:
            return rayleigh_energy(state, params)
    return rayleigh_energy(state, params)


def _finalize(state, energy, iterations, e_hist, r_hist, converged, config, seed):
    changed_at = None
    for j in range(3, len(e_hist)):
        if abs(e_hist[j] - e_hist[j - 1]) > config.structure_change_threshold:
            changed_at = j
            break
    try:
        counts = count_pattern(quantize_state(state))
    except Exception:
        counts = None
    return NewtonReport(
        iterations=iterations,
        energy_history=tuple(e_hist),
        residual_history=tuple(r_hist),
        converged=converged,
        structure_changed=changed_at is not None,
        structure_change_iteration=changed_at,
        final_counts=counts,
        final_norm=state.norm_squared(),
        seed=seed,
    )


def newton_solve(
    initial: LatticeState,
    params: ModelParams,
    config: NewtonConfig = NewtonConfig(),
    seed: Optional[int] = None,
):
    """Iterate Newton steps from a (normalized) starting state.

    Per iteration: estimate E, assemble the matrix and residual at
    (psi, E), take the step, renormalize.  Stops when the residual
    max-norm drops below tol (checked before stepping, so an exact start
    converges at iteration 0).  A jump in the energy history larger than
    the structure-change threshold after the second iteration is flagged
    as a change of localization pattern; the run still converges to the
    new structure, which is a solution in its own right.

    Returns (state, energy, report).  Raises NoConvergence or
    SingularJacobian with the best iterate attached.
    """
    state = normalize(initial)
    energy = _estimate(state, params, config)
    res_norm = float(np.max(np.abs(residual(state, params, energy))))
    e_hist = [energy]
    r_hist = [res_norm]
    iterations = 0

    while res_norm > config.tol_residual and iterations < config.max_iter:
        try:
            step = _newton_step(state, params, energy, config)
        except SingularJacobian as exc:
            report = _finalize(state, energy, iterations, e_hist, r_hist, False, config, seed)
            raise SingularJacobian(str(exc), state=state, energy=energy, report=report) from exc
        new_values = state.values - step
        if not np.all(np.isfinite(new_values)) or not np.any(new_values):
            report = _finalize(state, energy, iterations, e_hist, r_hist, False, config, seed)
            raise SingularJacobian("Newton step produced a degenerate state",
                                   state=state, energy=energy, report=report)
        state = LatticeState(new_values, state.boundary)
        if config.renormalize:
            state = normalize(state)
        energy = _estimate(state, params, config)
        res_norm = float(np.max(np.abs(residual(state, params, energy))))
        e_hist.append(energy)
        r_hist.append(res_norm)
        iterations += 1

    converged = res_norm <= config.tol_residual
    report = _finalize(state, energy, iterations, e_hist, r_hist, converged, config, seed)
    if not converged:
        raise NoConvergence(state, energy, report)
    return state, energy, report


@dataclass(frozen=True)
class SweepRecord:
    """One continuation point of a coupling sweep."""

    c: float
    energy: Optional[float]
    converged: bool
    counts: Optional[PatternCounts]
    max_amplitude: Optional[float]
    structure_changed: bool = False
    error: Optional[str] = None


def sweep_c(
    initial: LatticeState,
    params: ModelParams,
    c_values,
    config: NewtonConfig = NewtonConfig(),
):
    """Warm-started continuation over a monotone sequence of couplings.

    Each solve starts from the previous converged state; failures are
    recorded per point and the sweep continues from the last good state.
    """
    c_values = list(c_values)
    if len(c_values) > 1:
        diffs = np.diff(c_values)
        if not (np.all(diffs >= 0) or np.all(diffs <= 0)):
            raise ValueError("c_values must be monotone")
    records = []
    current = normalize(initial)
    for c in c_values:
        point_params = replace(params, c=float(c))
        try:
            solved, energy, report = newton_solve(current, point_params, config)
        except (NoConvergence, SingularJacobian) as exc:
            report = getattr(exc, "report", None)
            records.append(
                SweepRecord(
                    c=float(c),
                    energy=getattr(exc, "energy", None),
                    converged=False,
                    counts=report.final_counts if report else None,
                    max_amplitude=None,
                    structure_changed=report.structure_changed if report else False,
                    error=type(exc).__name__,
                )
            )
            continue
        current = solved
        records.append(
            SweepRecord(
                c=float(c),
                energy=energy,
                converged=True,
                counts=report.final_counts,
                max_amplitude=float(np.max(np.abs(solved.values))),
                structure_changed=report.structure_changed,
            )
        )
    return records
