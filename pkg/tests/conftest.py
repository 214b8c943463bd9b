import pathlib
import sys

import pytest

from buchidp.model import mc_from_matrix

sys.path.insert(0, str(pathlib.Path(__file__).parent))

FIXTURES = pathlib.Path(__file__).parent.parent / "fixtures"


@pytest.fixture
def three_chain():
    """Three-state deterministic chain sc -> sb -> sa -> sb, B = {sa}."""
    return mc_from_matrix(
        [[0, 1, 0], [1, 0, 0], [0, 1, 0]],
        accepting={0},
        initial=2,
        state_names=("sa", "sb", "sc"),
    )


@pytest.fixture
def gadget():
    """Fair branch: s0 to accepting sink s1 or rejecting sink s2."""
    return mc_from_matrix(
        [[0, 0.5, 0.5], [0, 1, 0], [0, 0, 1]],
        accepting={1},
        initial=0,
        state_names=("s0", "s1", "s2"),
    )


@pytest.fixture
def detour():
    """Rejected paths revisit the accepting state before dying: the gap
    to the satisfaction probability is (1-gb)/(1-gb/2) at s1, so sweeps
    over gamma_b decrease strictly."""
    return mc_from_matrix(
        [[0, 1, 0], [0.5, 0, 0.5], [0, 0, 1]],
        accepting={1},
        initial=0,
        state_names=("s0", "sa", "sink"),
    )


@pytest.fixture
def all_rejecting():
    """Two-cycle with empty accepting set: one rejecting BSCC."""
    return mc_from_matrix([[0, 1], [1, 0]], accepting=set(), initial=0)
