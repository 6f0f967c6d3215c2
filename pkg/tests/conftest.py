import time

import pytest

from renormhopf.graphs import GraphInstance
from renormhopf.hopf import birkhoff, toy_character, toy_graph_character

ACCEPTANCE_LINES: list[str] = []
SESSION_START = pytest.StashKey[float]()


def pytest_configure(config):
    config.addinivalue_line("markers", "suite_budget: measures the whole run, so it is moved to the end")
    config.stash[SESSION_START] = time.perf_counter()


def pytest_collection_modifyitems(config, items):
    items.sort(key=lambda item: item.get_closest_marker("suite_budget") is not None)


@pytest.fixture(scope="session")
def graph_instance():
    return GraphInstance()


@pytest.fixture(scope="session")
def toy():
    return toy_character()


@pytest.fixture(scope="session")
def toy_pair(toy):
    return birkhoff(toy)


@pytest.fixture(scope="session")
def graph_toy(graph_instance):
    return toy_graph_character(graph_instance)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
