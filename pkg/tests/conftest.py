from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def family_text():
    return (DATA / "family.pl").read_text()


@pytest.fixture
def puzzle8():
    from protokit.pddl import parse_domain, parse_problem

    domain = parse_domain((DATA / "puzzle8-domain.pddl").read_text())
    problem = parse_problem((DATA / "puzzle8-problem.pddl").read_text(), domain)
    return domain, problem
