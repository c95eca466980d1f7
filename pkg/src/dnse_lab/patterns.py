"""Strong-coupling localization patterns and their exact spectrum.

In the c -> infinity limit every stationary state is localized on n sites
carrying exactly +-1/sqrt(n), zero elsewhere.  A pattern is a per-site trit
(+1, 0, -1).  The occupied sites group into m spots (maximal runs of
nonzero trits separated by zeros) containing l kinks (adjacent occupied
pairs of opposite sign), and the eigenvalue of the pattern is

    E = (2m + 4l - c) / n.

Conventions pinned here: on a fully occupied periodic ring there are no
spot-boundary edges, so m = 0 (this is the only convention that makes the
formula match the kinetic energy of the limiting state); kink counting
under PBC includes the wrap pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllZero, BadCharacter, EmptyPattern
from .lattice import Boundary, LatticeState

_CHAR_TO_TRIT = {"+": 1, "0": 0, "-": -1}
_TRIT_TO_CHAR = {1: "+", 0: "0", -1: "-"}


@dataclass(frozen=True)
class PatternSpec:
    """Trit encoding of a localization pattern."""

    trits: tuple
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        object.__setattr__(self, "trits", tuple(int(t) for t in self.trits))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if len(self.trits) == 0:
            raise EmptyPattern("pattern needs at least one site")
        if any(t not in (-1, 0, 1) for t in self.trits):
            raise ValueError("trits must be -1, 0 or +1")
        if all(t == 0 for t in self.trits):
            raise AllZero("pattern needs at least one occupied site")

    @property
    def n_sites(self) -> int:
        return len(self.trits)

    def text(self) -> str:
        return "".join(_TRIT_TO_CHAR[t] for t in self.trits)

    def rotated(self, shift: int) -> "PatternSpec":
        n = self.n_sites
        shift %= n
        return PatternSpec(self.trits[-shift:] + self.trits[:-shift], self.boundary)


@dataclass(frozen=True)
class PatternCounts:
    """Occupied sites n, spots m, kinks l."""

    n: int
    m: int
    l: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not (0 <= self.m <= self.n and 0 <= self.l <= self.n):
            raise ValueError("m and l must lie in [0, n]")

    def as_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "l": self.l}


def parse_pattern(text: str, boundary: Boundary = Boundary.PERIODIC) -> PatternSpec:
    """Parse a string over {+, -, 0} into a pattern."""
    if len(text) == 0:
        raise EmptyPattern("empty pattern string")
    trits = []
    for pos, ch in enumerate(text):
        if ch not in _CHAR_TO_TRIT:
            raise BadCharacter(pos, ch)
        trits.append(_CHAR_TO_TRIT[ch])
    return PatternSpec(tuple(trits), boundary)


def count_pattern(spec: PatternSpec) -> PatternCounts:
    """Count occupied sites, spots and kinks.

    Spots are maximal runs of nonzero trits delimited by zeros; under PBC a
    run may wrap, and a ring with no zero at all has m = 0 by convention.
    Kinks are adjacent occupied pairs with opposite sign (wrap pair
    included under PBC).
    """
    trits = np.array(spec.trits)
    periodic = spec.boundary is Boundary.PERIODIC
    occ = trits != 0
    n = int(np.count_nonzero(occ))

    if periodic:
        if occ.all():
            m = 0
        else:
            # spot count = number of empty->occupied transitions around the ring
            prev = np.roll(occ, 1)
            m = int(np.count_nonzero(occ & ~prev))
        pair_a, pair_b = trits, np.roll(trits, -1)
    else:
        prev = np.concatenate(([False], occ[:-1]))
        m = int(np.count_nonzero(occ & ~prev))
        pair_a, pair_b = trits[:-1], trits[1:]

    l = int(np.count_nonzero((pair_a * pair_b) == -1))
    return PatternCounts(n=n, m=m, l=l)


def strong_coupling_energy(counts: PatternCounts, c: float) -> float:
    """Exact eigenvalue of a pattern in the strong-coupling limit."""
    return (2.0 * counts.m + 4.0 * counts.l - c) / counts.n


def build_asymptotic_state(spec: PatternSpec) -> LatticeState:
    """Limiting state of a pattern: trit/sqrt(n) on every site."""
    counts = count_pattern(spec)
    values = np.array(spec.trits, dtype=float) / np.sqrt(counts.n)
    return LatticeState(values, spec.boundary)


def quantize_state(state: LatticeState, rel_threshold: float = 0.5) -> PatternSpec:
    """Extract the pattern of a numeric state.

    A site counts as occupied iff |psi| exceeds rel_threshold * max|psi|;
    finite-c tails decay exponentially, so the relative cut separates
    peaks from tails.
    """
    psi = state.values
    peak = np.max(np.abs(psi))
    if peak == 0.0:
        raise AllZero("zero state has no pattern")
    occ = np.abs(psi) > rel_threshold * peak
    trits = np.where(occ, np.sign(psi).astype(int), 0)
    return PatternSpec(tuple(int(t) for t in trits), state.boundary)


def limit_points(spec: PatternSpec) -> set:
    """Predicted c -> infinity phase-portrait point set.

    Scans adjacent trit pairs (t, t'); each contributes the point
    (t/sqrt(n), (t'-t)/sqrt(n)) in the (psi_i, psi_{i+1}-psi_i) plane.
    At most nine distinct points are possible.
    """
    counts = count_pattern(spec)
    root = np.sqrt(counts.n)
    trits = spec.trits
    if spec.boundary is Boundary.PERIODIC:
        pairs = zip(trits, trits[1:] + trits[:1])
    else:
        pairs = zip(trits[:-1], trits[1:])
    return {(t / root, (t2 - t) / root) for t, t2 in pairs}


def random_pattern(n_sites: int, seed: int) -> PatternSpec:
    """Uniform random trits, re-rolled entirely if all come up zero.

    Uses numpy's default PCG64 generator so a (n_sites, seed) pair pins
    the pattern exactly.
    """
    if n_sites < 1:
        raise ValueError("need at least one site")
    rng = np.random.default_rng(seed)
    while True:
        trits = rng.integers(-1, 2, size=n_sites)
        if np.any(trits != 0):
            return PatternSpec(tuple(int(t) for t in trits), Boundary.PERIODIC)


def spot_pattern(n_sites: int, spot_starts, spot_len: int, signs) -> PatternSpec:
    """Build a periodic pattern of equal-length spots at given start sites.

    Every site of spot k carries signs[k].  Convenience for the regularly
    spaced configurations used in experiments.
    """
    trits = [0] * n_sites
    for start, sign in zip(spot_starts, signs):
        for off in range(spot_len):
            trits[(start + off) % n_sites] = int(sign)
    return PatternSpec(tuple(trits), Boundary.PERIODIC)


def counts_report(spec: PatternSpec, c: float) -> dict:
    """JSON-ready summary {"n", "m", "l", "E_infinity"}."""
    counts = count_pattern(spec)
    return {
        "n": counts.n,
        "m": counts.m,
        "l": counts.l,
        "E_infinity": strong_coupling_energy(counts, c),
    }
