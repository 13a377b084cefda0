import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cityoverlap import NodeRegistry, Snapshot  # noqa: E402


def build_pair(n, first, second, labels=None):
    """Two frozen snapshots over ``n`` shared nodes from ``{(i, j): w}`` dicts."""
    labels = labels or [f"c{i}" for i in range(n)]
    registry = NodeRegistry(labels)
    snaps = []
    for tag, edges in (("t0", first), ("t1", second)):
        snap = Snapshot(tag, registry)
        for node in registry:
            snap.include(node)
        for (i, j), w in edges.items():
            snap.upsert_edge(i, j, w)
        snaps.append(snap.freeze())
    return snaps[0], snaps[1]


@pytest.fixture
def pair_builder():
    return build_pair


_acceptance_lines = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or "test_acceptance" not in item.nodeid:
        return
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    status = "PASS" if report.passed else "FAIL"
    _acceptance_lines.append(f"[{status}] {doc}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
