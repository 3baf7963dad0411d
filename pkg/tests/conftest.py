import random

import pytest

from programs import CORPUS, RawFacts, random_program
from oracles import brute_force_sat, replay_misses, transitive_closure


def pytest_configure(config: pytest.Config):
    config.addinivalue_line("markers", "slow: scaling smoke test, deselected unless `-m slow` is given")


def pytest_generate_tests(metafunc: pytest.Metafunc):
    if "corpus_case" in metafunc.fixturenames:
        metafunc.parametrize("corpus_case", list(CORPUS.items()), ids=list(CORPUS))


@pytest.fixture
def corpus() -> dict[str, tuple[str, RawFacts]]:
    return CORPUS


@pytest.fixture
def program_generator():
    """Seeded random stratified programs: call with a seed, get (text, facts)."""
    def generate(seed: int) -> tuple[str, RawFacts]:
        return random_program(random.Random(seed))
    return generate


@pytest.fixture
def closure():
    return transitive_closure


@pytest.fixture
def sat_oracle():
    return brute_force_sat


@pytest.fixture
def cache_replay():
    return replay_misses
