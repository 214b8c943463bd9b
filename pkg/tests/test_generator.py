import numpy as np
import pytest

from buchidp.generator import chain_suite, random_chain
from buchidp.model import validate_mc


def test_same_seed_same_chain():
    a = random_chain(42, 9)
    b = random_chain(42, 9)
    assert a.transition.tobytes() == b.transition.tobytes()
    assert a.accepting == b.accepting


def test_different_seeds_differ():
    a = random_chain(42, 9)
    b = random_chain(43, 9)
    assert a.transition.tobytes() != b.transition.tobytes()


def test_chains_are_valid():
    for seed in range(40):
        mc = random_chain(seed, 1 + seed % 12)
        assert validate_mc(mc) == []


def test_suite_sizes_cycle_through_range():
    sizes = [mc.num_states for mc in chain_suite(5, 24, min_states=2, max_states=12)]
    assert min(sizes) == 2 and max(sizes) == 12
    assert sizes[:4] == [2, 3, 4, 5]


def test_suite_is_deterministic():
    a = [mc.transition.tobytes() for mc in chain_suite(9, 10)]
    b = [mc.transition.tobytes() for mc in chain_suite(9, 10)]
    assert a == b


def test_accepting_fraction_zero_gives_empty_b():
    for seed in range(10):
        mc = random_chain(seed, 6, accepting_fraction=0.0)
        assert mc.accepting == frozenset()


def test_rejects_empty_state_space():
    with pytest.raises(ValueError):
        random_chain(0, 0)


def test_min_positive_probability_not_degenerate():
    # weights 1..8 over at most 1+density*(n-1) successors keep eps sane
    eps = min(
        float(mc.transition[mc.transition > 0].min())
        for mc in chain_suite(3, 30, min_states=2, max_states=12)
    )
    assert eps >= 1.0 / (8 * 12)
