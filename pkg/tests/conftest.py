import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rsclust import Graph  # noqa: E402

# Seven points with a known nearest-neighbor structure: 3 and 5 are
# reciprocal, 6 -> 5, 7 -> 6, 4 -> 5, 2 -> 4 and 1 -> 2. Index k-1 holds point k.
SEVEN_POINTS = np.array([
    [2.5, -4.6],  # 1
    [1.8, -3.0],  # 2
    [0.0, 0.0],   # 3
    [1.5, -1.4],  # 4
    [1.0, 0.0],   # 5
    [2.2, 0.5],   # 6
    [3.5, 1.2],   # 7
])


@pytest.fixture
def seven_points():
    return SEVEN_POINTS.copy()


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def triangle():
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


def bridged_triangles():
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def random_connected_graph(rng, n, p=0.2):
    """Random spanning tree plus extra edges."""
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(v))
        edges.add((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return Graph(n, sorted(edges))


def random_tree(rng, n):
    return Graph(n, [(int(rng.integers(v)), v) for v in range(1, n)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- acceptance reporting -------------------------------------------------
# Tests marked ``criterion(number, title)`` get one summary line each at the
# end of the session. A test can attach measured values with
# ``record_property("detail", ...)``.

_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.stash[_CRITERIA] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when != "call" and rep.passed:
        return
    number, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    if hasattr(rep, "wasxfail"):
        status = "FAIL (expected)"
        detail = f"{detail}; {rep.wasxfail}" if detail else rep.wasxfail
    elif rep.skipped:
        status = "SKIP"
        detail = rep.longrepr[2].removeprefix("Skipped: ") if isinstance(rep.longrepr, tuple) else str(rep.longrepr)
    elif rep.failed:
        status = "FAIL"
        detail = detail or str(rep.longrepr).splitlines()[-1]
    else:
        status = "PASS"
    item.config.stash[_CRITERIA][number] = (status, title, detail)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_CRITERIA, {})
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(results):
        status, title, detail = results[number]
        line = f"[{status}] criterion {number:>2}: {title}"
        terminalreporter.write_line(f"{line} | {detail}" if detail else line)
