import random

import pytest
from hypothesis import HealthCheck, settings

from oasp.parser import parse_atoms, parse_program

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(1234)


def atoms(text: str):
    return parse_atoms(text)


def program(text: str):
    return parse_program(text)
