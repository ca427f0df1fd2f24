"""Shared fixtures plus the acceptance pass/fail report.

Every test in test_acceptance.py gets one summary line at the end of the run
so the acceptance outcome is readable regardless of output capturing.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from fuzzyvis import parse_json, parse_obo

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_acceptance_results: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when == "call":
        outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        _acceptance_results.append((report.nodeid.split("::")[-1], outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{outcome:4s}  {name}")


@pytest.fixture(scope="session")
def mini_obo_text() -> str:
    return (FIXTURES / "mini.obo").read_text()


@pytest.fixture(scope="session")
def mini_graph(mini_obo_text):
    """The six-concept tree R -> {A, B}, A -> {L1, L2}, B -> {L3}."""
    return parse_obo(mini_obo_text)


@pytest.fixture(scope="session")
def hpo_like_graph():
    return parse_obo((FIXTURES / "hpo_like.obo").read_text())


def make_graph(parents: dict[str, list[str]], labels: dict[str, str] | None = None):
    """Build a validated graph from a parent map via the JSON parser."""
    labels = labels or {}
    doc = {
        "concepts": [
            {"id": cid, "label": labels.get(cid, cid), "parents": list(ps)}
            for cid, ps in parents.items()
        ]
    }
    return parse_json(json.dumps(doc))


def random_tree(rng: np.random.Generator, n: int):
    """Random recursive tree: node i's parent is uniform among nodes < i."""
    parents = {"N000": []}
    for i in range(1, n):
        parents[f"N{i:03d}"] = [f"N{int(rng.integers(i)):03d}"]
    return make_graph(parents)


def random_dag(rng: np.random.Generator, n: int, extra_edge_prob: float = 0.2):
    """Random tree plus extra forward edges, so some nodes have 2+ parents."""
    parents = {"N000": []}
    for i in range(1, n):
        ps = {int(rng.integers(i))}
        if i >= 2 and rng.random() < extra_edge_prob:
            ps.add(int(rng.integers(i)))
        parents[f"N{i:03d}"] = [f"N{p:03d}" for p in sorted(ps)]
    return make_graph(parents)
