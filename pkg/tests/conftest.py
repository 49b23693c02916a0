import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polycobar.complexes import SimplicialComplex

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_complex(rng: random.Random, max_vertices: int = 6, max_facets: int = 5) -> SimplicialComplex:
    n = rng.randint(1, max_vertices)
    facets = []
    for _ in range(rng.randint(0, max_facets)):
        size = rng.randint(1, min(n, 4))
        facets.append(sorted(rng.sample(range(1, n + 1), size)))
    return SimplicialComplex.from_facets(facets, vertices=range(1, n + 1))


@st.composite
def complexes(draw, max_vertices: int = 5, max_facet: int = 4):
    n = draw(st.integers(1, max_vertices))
    facet = st.lists(st.integers(1, n), min_size=1, max_size=max_facet, unique=True)
    facets = draw(st.lists(facet, max_size=5))
    return SimplicialComplex.from_facets(facets, vertices=range(1, n + 1))


# --- acceptance summary ---------------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    entry = _criteria.setdefault(n, {"title": title, "ok": True, "seen": False})
    if report.when == "call" or report.failed:
        entry["seen"] = True
        if report.failed:
            entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        status = "PASS" if e["ok"] and e["seen"] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {e['title']}")
