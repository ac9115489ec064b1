from __future__ import annotations

import pytest

from polyforge.cd_construction import cd_group
from polyforge.corpus import load_corpus
from polyforge.fpgroup import coxeter_string_presentation, parse_presentation, regular_representation
from polyforge.string_cgroup import validate


def group_from_text(text: str):
    G = regular_representation(parse_presentation(text))
    return validate(G, G.generators)


def coxeter_group(labels):
    G = regular_representation(coxeter_string_presentation(labels))
    return validate(G, G.generators)


@pytest.fixture(scope="session")
def cd():
    cache = {}

    def get(d):
        if d not in cache:
            cache[d] = cd_group(d)
        return cache[d]

    return get


@pytest.fixture(scope="session")
def corpus_entries():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_groups(corpus_entries):
    return {e.id: e.string_cgroup() for e in corpus_entries}


@pytest.fixture(scope="session")
def square():
    return coxeter_group([4])


@pytest.fixture(scope="session")
def t40(corpus_groups):
    return corpus_groups["t40"]


# per-criterion summary for tests/test_acceptance.py

CRITERIA = {
    "test_criterion_1_order_family": "1 order family |G(C_d)| = 2^(2d-1), d = 2..6",
    "test_criterion_2_face_counts": "2 face counts, diamond, strong flag-connectivity, d = 3..5",
    "test_criterion_3_nilpotency_class": "3 nilpotency class 2, d = 2..5",
    "test_criterion_4_theorem_suite": "4 structure theorem suite over the corpus",
    "test_criterion_5_projection": "5 projection onto G(C_d)",
    "test_criterion_6_burnside": "6 Frattini = maximal-subgroup oracle = agemo",
    "test_criterion_7_tightness": "7 tightness",
    "test_criterion_8_engine_properties": "8 engine property suite",
}
_outcomes: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if name not in CRITERIA:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in CRITERIA.items():
        if name in _outcomes:
            terminalreporter.write_line(f"{_outcomes[name]}  criterion {label}")
