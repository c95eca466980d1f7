"""Lattice states and the core nonlinear eigenproblem.

The stationary problem on a 1D chain of N sites is

    -psi[i-1] + 2 psi[i] - psi[i+1] - c psi[i]**3 = E psi[i]

with indices wrapped modulo N under periodic boundary conditions, or with
psi[-1] = psi[N] = 0 under open boundaries.  Only real amplitudes are
handled.  This module holds the value types plus the residual, the energy
functional it derives from, and the exact symmetry transforms (staggering
and the amplitude/coupling similarity rescaling).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import OddPeriodicLattice, ZeroState

NORM_TOL = 1e-12


class Boundary(str, Enum):
    PERIODIC = "periodic"
    OPEN = "open"


def _as_readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class LatticeState:
    """Real amplitudes on N sites plus a boundary-condition tag.

    Immutable after construction; the amplitude array is marked read-only.
    """

    values: np.ndarray
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly(self.values))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValueError("state needs a 1D array with at least one site")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("amplitudes must be finite")

    @property
    def n_sites(self) -> int:
        return self.values.size

    def norm_squared(self) -> float:
        return float(np.dot(self.values, self.values))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def rotated(self, shift: int) -> "LatticeState":
        """Cyclic shift of the amplitudes (meaningful under PBC)."""
        return LatticeState(np.roll(self.values, shift), self.boundary)


@dataclass(frozen=True)
class ModelParams:
    """Coupling constant and boundary condition.

    c > 0 is the self-trapping (quantum) sign; c < 0 corresponds to the
    classical coupled-oscillator problem, related by the staggering
    transform.
    """

    c: float
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if not np.isfinite(self.c):
            raise ValueError("coupling must be finite")


def _check_boundary(state: LatticeState, params: ModelParams):
    if state.boundary is not params.boundary:
        raise ValueError(
            f"boundary mismatch: state {state.boundary.value}, params {params.boundary.value}"
        )


def normalize(state: LatticeState) -> LatticeState:
    """Scale the amplitudes to unit sum of squares, preserving direction."""
    norm2 = state.norm_squared()
    if norm2 == 0.0:
        raise ZeroState("cannot normalize the zero state")
    return LatticeState(state.values / np.sqrt(norm2), state.boundary)


def _neighbors(psi: np.ndarray, boundary: Boundary):
    if boundary is Boundary.PERIODIC:
        return np.roll(psi, 1), np.roll(psi, -1)
    left = np.concatenate(([0.0], psi[:-1]))
    right = np.concatenate((psi[1:], [0.0]))
    return left, right


def residual(state: LatticeState, params: ModelParams, energy: float) -> np.ndarray:
    """Componentwise defect of the stationary equation.

    The state is an exact solution at (c, E) iff every component vanishes.
    """
    _check_boundary(state, params)
    psi = state.values
    left, right = _neighbors(psi, state.boundary)
    return -left + 2.0 * psi - right - params.c * psi**3 - energy * psi


def hamiltonian(state: LatticeState, params: ModelParams, energy: float) -> float:
    """Energy functional whose stationary points solve the lattice equation.

    H = sum (psi[i] - psi[i+1])**2 - (c/2) sum psi**4 - E sum psi**2,
    with the difference sum wrapping under PBC and running over
    i = 0..N-2 under open boundaries.
    """
    _check_boundary(state, params)
    psi = state.values
    if state.boundary is Boundary.PERIODIC:
        kinetic = float(np.sum((psi - np.roll(psi, -1)) ** 2))
    else:
        kinetic = float(np.sum((psi[:-1] - psi[1:]) ** 2))
    return kinetic - 0.5 * params.c * float(np.sum(psi**4)) - energy * state.norm_squared()


def gradient(state: LatticeState, params: ModelParams, energy: float) -> np.ndarray:
    """dH/dpsi[i]; exactly 2 * residual (the 2 comes from the quadratic forms).

    The Newton step is insensitive to the constant because it cancels
    between the gradient and the Hessian.
    """
    return 2.0 * residual(state, params, energy)


def stagger(state: LatticeState) -> LatticeState:
    """Alternate-site sign flip x[i] = (-1)**i psi[i].

    Maps the self-trapping problem at (c, E) onto the oscillator problem
    with eigenvalue e = 4 - E and reversed coupling sign.  An involution.
    Rejected for odd-N periodic lattices, where the flip is inconsistent
    at the wrap.
    """
    n = state.n_sites
    if state.boundary is Boundary.PERIODIC and n % 2 == 1:
        raise OddPeriodicLattice(f"staggering undefined for periodic N={n}")
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return LatticeState(signs * state.values, state.boundary)


def rescale(state: LatticeState, params: ModelParams, beta: float):
    """Similarity transform psi -> beta*psi, c -> c/beta**2.

    Solutions map to solutions with the same E: the residual of the new
    pair is exactly beta times the old one.  The squared norm scales by
    beta**2.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    new_state = LatticeState(beta * state.values, state.boundary)
    new_params = ModelParams(params.c / beta**2, params.boundary)
    return new_state, new_params
