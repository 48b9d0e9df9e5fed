import pytest

from otearley import presets


@pytest.fixture
def ww():
    return presets.total_reduplication_grammar()


@pytest.fixture
def final_zero():
    return presets.final_zero_penalty_automaton()
