import numpy as np
import pytest

import dnse_lab as dl


def alternating_spot_pattern():
    """100 sites, 10 isolated spots spaced 10 apart, alternating signs."""
    signs = [(-1) ** k for k in range(10)]
    return dl.spot_pattern(100, [10 * k for k in range(10)], 1, signs)


IRREGULAR_SIGNS = [1, 1, -1, 1, -1, -1, 1, -1, 1, 1, -1, 1, -1]


def irregular_pair_pattern():
    """130 sites, 13 two-site same-sign spots spaced 10 apart, irregular signs."""
    return dl.spot_pattern(130, [10 * k for k in range(13)], 2, IRREGULAR_SIGNS)


@pytest.fixture(scope="session")
def chain100_solution():
    spec = alternating_spot_pattern()
    state, energy, report = dl.newton_solve(
        dl.build_asymptotic_state(spec), dl.ModelParams(24.0)
    )
    return spec, state, energy, report


@pytest.fixture(scope="session")
def chain130_solution():
    spec = irregular_pair_pattern()
    state, energy, report = dl.newton_solve(
        dl.build_asymptotic_state(spec), dl.ModelParams(40.0)
    )
    return spec, state, energy, report


def random_state(rng, n, boundary=dl.Boundary.PERIODIC, amp=1.0):
    return dl.LatticeState(rng.uniform(-amp, amp, n), boundary)
