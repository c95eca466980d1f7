"""The lattice recursion as an iterated 2D map.

With the auxiliary difference variable Z[i+1] = psi[i+1] - psi[i] the
stationary equation becomes the area-preserving map

    Z' = Z - E psi - c psi**3
    psi' = psi + Z'

so a lattice solution is a map orbit and vice versa.  Orbits may diverge;
escape is recorded as data, not raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import EscapedOrbit
from .lattice import Boundary, LatticeState

DEFAULT_ESCAPE_BOUND = 1e8


class MapState(NamedTuple):
    psi: float
    Z: float


@dataclass(frozen=True)
class MapOrbit:
    """Visited (psi, Z) points; truncated at the first escape if any."""

    points: np.ndarray  # shape (k, 2), columns psi, Z
    escaped: bool = False
    escape_index: Optional[int] = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError("orbit needs a nonempty (k, 2) point array")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def psi(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def Z(self) -> np.ndarray:
        return self.points[:, 1]


def map_step(s: MapState, energy: float, c: float) -> MapState:
    """One forward application of the map."""
    z_next = s.Z - energy * s.psi - c * s.psi**3
    return MapState(s.psi + z_next, z_next)


def map_step_inverse(s: MapState, energy: float, c: float) -> MapState:
    """Exact inverse: psi = psi' - Z', Z = Z' + E psi + c psi**3."""
    psi_prev = s.psi - s.Z
    return MapState(psi_prev, s.Z + energy * psi_prev + c * psi_prev**3)


def iterate_map(
    initial: MapState,
    energy: float,
    c: float,
    steps: int,
    escape_bound: float = DEFAULT_ESCAPE_BOUND,
    stride: int = 1,
) -> MapOrbit:
    """Iterate the map, recording visited points (including the seed).

    Stops early once |psi| or |Z| exceeds escape_bound; the offending
    point is kept and the orbit is flagged escaped.  stride > 1 thins the
    recording for very long runs (every stride-th point is kept).
    """
    if steps < 1:
        raise ValueError("need at least one step")
    if stride < 1:
        raise ValueError("stride must be positive")
    s = MapState(float(initial.psi), float(initial.Z))
    recorded = [s]
    escaped = False
    escape_index = None
    for k in range(1, steps + 1):
        s = map_step(s, energy, c)
        if k % stride == 0 or not np.isfinite(s.psi) or abs(s.psi) > escape_bound or abs(s.Z) > escape_bound:
            recorded.append(s)
        if not (np.isfinite(s.psi) and np.isfinite(s.Z)) or abs(s.psi) > escape_bound or abs(s.Z) > escape_bound:
            escaped = True
            escape_index = k
            break
    return MapOrbit(np.array(recorded, dtype=float), escaped, escape_index)


def seed_from_lattice(state: LatticeState) -> MapState:
    """Map seed (psi[1], psi[1]-psi[0]) reproducing the lattice recursion."""
    if state.n_sites < 2:
        raise ValueError("need at least two sites to seed the map")
    psi = state.values
    return MapState(float(psi[1]), float(psi[1] - psi[0]))


def lattice_from_orbit(orbit: MapOrbit) -> LatticeState:
    """Read the psi track of a bounded orbit as an open-boundary state.

    Interior residual components vanish by construction when the orbit's
    (E, c) are used; the state is not normalized.
    """
    if orbit.escaped:
        raise EscapedOrbit("cannot extract a lattice state from an escaped orbit")
    return LatticeState(orbit.psi, Boundary.OPEN)
