"""Phase portraits and spatial-structure diagnostics.

A lattice state is summarized by the planar point set
{(psi[i], psi[i+1]-psi[i])}.  Converged solutions fall into three classes:
regular periodic (the amplitude sequence repeats under a cyclic shift),
irregular commensurate (portrait points trace a thin closed curve) and
irregular incommensurate (the curve is smeared out).  The paper-level
criteria are qualitative, so the commensurate/incommensurate split is an
explicit heuristic with configurable thresholds; the regular test is
exact up to a shift tolerance.

Tail behaviour between well-separated peaks is exponential.  The discrete
per-site decay factor mu solves mu + 1/mu = 2 - E; the continuum
approximation exp(-sqrt(-E)) is its small-|E| limit and is reported
alongside.  Box counting and zoom reports are exploratory statistics
only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (
    NotLocalized,
    WindowTouchesPeak,
    ZeroAmplitudeInWindow,
)
from .lattice import Boundary, LatticeState
from .mapdyn import MapOrbit


@dataclass(frozen=True)
class PhasePortrait:
    """Point set in the (psi, dpsi) plane plus the source amplitude track."""

    points: np.ndarray  # shape (k, 2)
    source: str = "lattice"  # "lattice" | "orbit"
    psi_sequence: Optional[np.ndarray] = None
    cyclic: bool = False

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError("portrait needs a nonempty (k, 2) array")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        if self.psi_sequence is not None:
            seq = np.array(self.psi_sequence, dtype=float, copy=True)
            seq.flags.writeable = False
            object.__setattr__(self, "psi_sequence", seq)

    @property
    def size(self) -> int:
        return self.points.shape[0]


class PortraitLabel(str, Enum):
    REGULAR_PERIODIC = "regular_periodic"
    IRREGULAR_COMMENSURATE = "irregular_commensurate"
    IRREGULAR_INCOMMENSURATE = "irregular_incommensurate"


@dataclass(frozen=True)
class ClassifyConfig:
    """Thresholds for trajectory classification."""

    shift_tol: float = 1e-6
    distinct_tol: float = 1e-6
    band_frac: float = 0.05  # local curve thickness / diameter cutoff
    neighbors: int = 6


@dataclass(frozen=True)
class PortraitClass:
    label: PortraitLabel
    distinct_points: int
    period: Optional[int] = None
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self, tol: float) -> dict:
        return {
            "label": self.label.value,
            "period": self.period,
            "distinct_points": self.distinct_points,
            "tol": tol,
        }


@dataclass(frozen=True)
class TailFit:
    decay_factor_measured: float
    decay_factor_predicted: Optional[float]
    continuum_predicted: Optional[float]
    window: tuple
    cubic_term_significant: bool


def phase_portrait(state: LatticeState) -> PhasePortrait:
    """All (psi[i], psi[i+1]-psi[i]) pairs in lattice order.

    PBC contributes N points (the last one wraps); open boundaries give
    N - 1.
    """
    if state.n_sites < 2:
        raise ValueError("portrait needs at least two sites")
    psi = state.values
    if state.boundary is Boundary.PERIODIC:
        nxt = np.roll(psi, -1)
        pts = np.column_stack([psi, nxt - psi])
        cyclic = True
    else:
        pts = np.column_stack([psi[:-1], psi[1:] - psi[:-1]])
        cyclic = False
    return PhasePortrait(pts, source="lattice", psi_sequence=psi, cyclic=cyclic)


def portrait_from_orbit(orbit: MapOrbit) -> PhasePortrait:
    """Portrait of a map orbit: (psi[k], Z[k+1]) for consecutive points."""
    if orbit.points.shape[0] < 2:
        raise ValueError("orbit portrait needs at least two points")
    pts = np.column_stack([orbit.psi[:-1], orbit.Z[1:]])
    return PhasePortrait(pts, source="orbit", psi_sequence=orbit.psi, cyclic=False)


def distinct_points(portrait: PhasePortrait, tol: float) -> int:
    """Greedy first-fit cluster count in max-norm, deterministic in order."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    reps = _cluster_representatives(portrait.points, tol)
    return len(reps)


def _cluster_representatives(points: np.ndarray, tol: float) -> np.ndarray:
    reps = []
    for p in points:
        placed = False
        for r in reps:
            if abs(p[0] - r[0]) <= tol and abs(p[1] - r[1]) <= tol:
                placed = True
                break
        if not placed:
            reps.append(p)
    return np.array(reps)


def _detect_period(psi: np.ndarray, cyclic: bool, tol: float) -> Optional[int]:
    n = psi.size
    if cyclic:
        for p in range(1, n):
            if np.max(np.abs(psi - np.roll(psi, p))) <= tol:
                return p
        return None
    # non-cyclic track: require the overlap to cover at least half the data
    for p in range(1, n // 2 + 1):
        if np.max(np.abs(psi[p:] - psi[:-p])) <= tol:
            return p
    return None


def classify_portrait(portrait: PhasePortrait, config: ClassifyConfig = ClassifyConfig()) -> PortraitClass:
    """Label a portrait, always returning a class plus diagnostics."""
    n_distinct = distinct_points(portrait, config.distinct_tol)
    diagnostics: dict = {"n_distinct": n_distinct}

    if portrait.psi_sequence is not None and portrait.psi_sequence.size >= 2:
        period = _detect_period(portrait.psi_sequence, portrait.cyclic, config.shift_tol)
        if period is not None:
            return PortraitClass(
                PortraitLabel.REGULAR_PERIODIC, n_distinct, period, diagnostics
            )

    thickness = _curve_thickness(portrait.points, config)
    diagnostics["curve_thickness"] = thickness
    if thickness is not None and thickness <= config.band_frac:
        label = PortraitLabel.IRREGULAR_COMMENSURATE
    else:
        label = PortraitLabel.IRREGULAR_INCOMMENSURATE
    return PortraitClass(label, n_distinct, None, diagnostics)


def _curve_thickness(points: np.ndarray, config: ClassifyConfig) -> Optional[float]:
    """Median local perpendicular spread relative to the portrait diameter.

    Points on a thin closed curve have locally collinear neighborhoods;
    a smeared cloud does not.
    """
    pts = np.unique(points, axis=0)
    if pts.shape[0] < 4:
        return 0.0
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    diameter = float(np.linalg.norm(hi - lo))
    if diameter == 0.0:
        return 0.0
    k = min(config.neighbors, pts.shape[0] - 1)
    spreads = []
    for p in pts:
        d2 = np.sum((pts - p) ** 2, axis=1)
        idx = np.argsort(d2)[: k + 1]  # includes the point itself
        local = pts[idx] - pts[idx].mean(axis=0)
        cov = local.T @ local / local.shape[0]
        eigvals = np.linalg.eigvalsh(cov)
        spreads.append(np.sqrt(max(eigvals[0], 0.0)))
    return float(np.median(spreads)) / diameter


def tail_decay_predicted(energy: float) -> float:
    """Discrete per-site decay factor from the linearized lattice equation.

    mu solves mu + 1/mu = 2 - E and lies in (0, 1) for E < 0.
    """
    if energy >= 0:
        raise NotLocalized("exponential tails require E < 0")
    s = 2.0 - energy
    return (s - np.sqrt(s * s - 4.0)) / 2.0


def tail_decay_continuum(energy: float) -> float:
    """Continuum-limit factor exp(-sqrt(-E)), the small-|E| approximation."""
    if energy >= 0:
        raise NotLocalized("exponential tails require E < 0")
    return float(np.exp(-np.sqrt(-energy)))


def fit_tail(
    state: LatticeState,
    peak_index: int,
    window: tuple,
    energy: Optional[float] = None,
) -> TailFit:
    """Least-squares exponential fit of the tail following a peak.

    window = (start, end) offsets from the peak, inclusive; the sites must
    lie strictly between peaks.  The fit is flagged when any window
    amplitude exceeds 0.1 * max|psi|, where the cubic term is no longer
    negligible and the pure exponential stops being a good model.
    """
    start, end = window
    if not (1 <= start <= end):
        raise ValueError("window offsets must satisfy 1 <= start <= end")
    psi = state.values
    n = psi.size
    peak_amp = np.max(np.abs(psi))
    offsets = np.arange(start, end + 1)
    if state.boundary is Boundary.PERIODIC:
        sites = (peak_index + offsets) % n
    else:
        sites = peak_index + offsets
        if np.any(sites >= n):
            raise ValueError("window extends past the open lattice edge")
    # peak sites are local maxima of |psi| carrying a substantial amplitude;
    # tail sites are monotone stretches and never local maxima
    mag = np.abs(psi)
    if state.boundary is Boundary.PERIODIC:
        left, right = np.roll(mag, 1), np.roll(mag, -1)
    else:
        left = np.concatenate(([0.0], mag[:-1]))
        right = np.concatenate((mag[1:], [0.0]))
    is_peak = (mag >= left) & (mag >= right) & (mag > 0.5 * peak_amp)
    if np.any(is_peak[sites]):
        raise WindowTouchesPeak(f"window sites {sites.tolist()} include a peak")
    amps = mag[sites]
    if np.any(amps == 0.0):
        raise ZeroAmplitudeInWindow("zero amplitude in the fit window")

    slope, _ = np.polyfit(offsets.astype(float), np.log(amps), 1)
    measured = float(np.exp(slope))
    predicted = continuum = None
    if energy is not None:
        predicted = tail_decay_predicted(energy)
        continuum = tail_decay_continuum(energy)
    return TailFit(
        decay_factor_measured=measured,
        decay_factor_predicted=predicted,
        continuum_predicted=continuum,
        window=(int(start), int(end)),
        cubic_term_significant=bool(np.any(amps > 0.1 * peak_amp)),
    )


@dataclass(frozen=True)
class BoxCountResult:
    counts: tuple  # of (scale, occupied) pairs
    slope_estimate: float  # exploratory, non-rigorous dimension statistic


def box_count(portrait: PhasePortrait, scales) -> BoxCountResult:
    """Occupied-box counts on the portrait bounding square.

    The log-log slope is reported as an exploratory statistic only; no
    rigorous fractal-dimension claim is attached to it.
    """
    scales = [float(s) for s in scales]
    if len(scales) < 2:
        raise ValueError("need at least two scales")
    if any(s <= 0 for s in scales):
        raise ValueError("scales must be positive")
    pts = portrait.points
    lo = pts.min(axis=0)
    counts = []
    for s in scales:
        cells = np.floor((pts - lo) / s).astype(np.int64)
        counts.append((s, int(np.unique(cells, axis=0).shape[0])))
    xs = np.log([1.0 / s for s, _ in counts])
    ys = np.log([max(c, 1) for _, c in counts])
    slope = float(np.polyfit(xs, ys, 1)[0]) if np.ptp(xs) > 0 else 0.0
    return BoxCountResult(counts=tuple(counts), slope_estimate=slope)


@dataclass(frozen=True)
class ZoomLevel:
    region: tuple  # (xmin, xmax, ymin, ymax)
    points: np.ndarray
    empty: bool


def zoom_report(
    portrait: PhasePortrait,
    region: tuple,
    levels: int,
    shrink: float = 2.0,
):
    """Nested magnifications of a portrait region about its center.

    Level 0 is the given rectangle; each further level shrinks the
    rectangle by the shrink factor.  Empty levels are reported with a
    flag, not raised.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    if shrink <= 1.0:
        raise ValueError("shrink factor must exceed 1")
    xmin, xmax, ymin, ymax = (float(v) for v in region)
    if xmin >= xmax or ymin >= ymax:
        raise ValueError("degenerate region")
    cx, cy = (xmin + xmax) / 2.0, (ymin + ymax) / 2.0
    hx, hy = (xmax - xmin) / 2.0, (ymax - ymin) / 2.0
    pts = portrait.points
    out = []
    for level in range(levels):
        fx, fy = hx / shrink**level, hy / shrink**level
        box = (cx - fx, cx + fx, cy - fy, cy + fy)
        inside = pts[
            (pts[:, 0] >= box[0]) & (pts[:, 0] <= box[1])
            & (pts[:, 1] >= box[2]) & (pts[:, 1] <= box[3])
        ]
        out.append(ZoomLevel(region=box, points=inside, empty=inside.shape[0] == 0))
    return out
