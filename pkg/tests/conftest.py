import random
from importlib import resources
from pathlib import Path

import pytest

from pertcheck.perturb import load_catalog, load_dataset
from pertcheck.textkit.lexicon import load_lexicon

DEMO_DIR = Path(str(resources.files("pertcheck") / "data" / "demo"))


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def demo_path():
    return DEMO_DIR / "demo.jsonl"


@pytest.fixture(scope="session")
def demo_penalties_path():
    return DEMO_DIR / "penalties.csv"


@pytest.fixture(scope="session")
def demo(demo_path):
    return load_dataset(demo_path)


@pytest.fixture
def rng():
    return random.Random(0)


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
