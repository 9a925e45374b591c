"""Shared fixtures and the acceptance-criteria reporter.

Every test in test_acceptance.py carries a ``criterion`` marker; the hook
below prints one PASS/FAIL line per criterion at the end of the run.
"""

from __future__ import annotations

import numpy as np
import pytest

from corgie.datasets import movie_like, movie_focus_groups, planted_anomaly, random_gnp
from corgie.model import serialize_dataset

_ACCEPTANCE_RESULTS: dict[str, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion metadata")


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    marker_info = getattr(report, "_criterion", None)
    if marker_info:
        num, title = marker_info
        _ACCEPTANCE_RESULTS[num] = (title, report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker:
        report._criterion = (str(marker.args[0]), marker.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_ACCEPTANCE_RESULTS, key=lambda s: int(s)):
        title, passed = _ACCEPTANCE_RESULTS[num]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {num}: {title}")


@pytest.fixture(scope="session")
def movie_dataset():
    return movie_like(seed=7)


@pytest.fixture(scope="session")
def movie_dir(tmp_path_factory, movie_dataset):
    path = tmp_path_factory.mktemp("movie")
    serialize_dataset(movie_dataset, path)
    return path


@pytest.fixture(scope="session")
def movie_focus(movie_dataset):
    return movie_focus_groups(movie_dataset)


@pytest.fixture(scope="session")
def small_movie_dataset():
    return movie_like(n_users=120, n_movies=60, n_clusters=4, seed=5)


@pytest.fixture(scope="session")
def small_movie_dir(tmp_path_factory, small_movie_dataset):
    path = tmp_path_factory.mktemp("movie-small")
    serialize_dataset(small_movie_dataset, path)
    return path


@pytest.fixture(scope="session")
def anomaly_dataset():
    return planted_anomaly()


@pytest.fixture
def gnp40():
    return random_gnp(40, 0.1, seed=3)


def bfs_distance_oracle(graph) -> np.ndarray:
    """All-pairs shortest-path matrix by Floyd-Warshall; the independent
    oracle for hop sets and partitions."""
    n = graph.n_nodes
    inf = 10 ** 9
    dist = np.full((n, n), inf, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    for a, b in graph.edges:
        dist[a, b] = dist[b, a] = 1
    for m in range(n):
        dist = np.minimum(dist, dist[:, m:m + 1] + dist[m:m + 1, :])
    return dist
