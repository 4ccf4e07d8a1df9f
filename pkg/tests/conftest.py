from pathlib import Path

import pytest

from secassess import build_kb, parse_program
from secassess.semiring import SEMIRINGS

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


def load_kb(*names: str, semiring: str = "prob"):
    programs = [parse_program((FIXTURES / name).read_text(encoding="utf-8"))
                for name in names]
    return build_kb(programs, SEMIRINGS[semiring])


@pytest.fixture
def weather_kb():
    return load_kb("weather_app.sf", "weather_infra.sf")


@pytest.fixture
def weather_trust_kb():
    return load_kb("weather_app.sf", "weather_infra.sf", "weather_trust.sf")


@pytest.fixture
def simple_trust_kb():
    return load_kb("trust_simple.sf")


@pytest.fixture
def smartbuilding_kb():
    return load_kb("smartbuilding_app.sf", "smartbuilding_infra.sf",
                   "smartbuilding_trust.sf")


@pytest.fixture
def smartbuilding_trust_kb():
    return load_kb("smartbuilding_trust.sf")
