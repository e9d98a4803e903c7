import pytest
from hypothesis import HealthCheck, settings, strategies as st

from fsubnormal import Permutation, named_example
from fsubnormal.builder import alternating, dihedral, symmetric

settings.register_profile(
    "repo", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("repo")


@st.composite
def permutations(draw, degree):
    images = draw(st.permutations(range(1, degree + 1)))
    return Permutation(images)


@st.composite
def small_groups(draw, max_degree=5, max_gens=3):
    """Random permutation groups of degree <= max_degree (orders <= 120)."""
    from fsubnormal import closure

    n = draw(st.integers(1, max_degree))
    gens = draw(st.lists(permutations(n), min_size=0, max_size=max_gens))
    return closure(n, gens)


@pytest.fixture(scope="session")
def s3():
    return symmetric(3)


@pytest.fixture(scope="session")
def s4():
    return symmetric(4)


@pytest.fixture(scope="session")
def a4():
    return alternating(4)


@pytest.fixture(scope="session")
def d8():
    return dihedral(8)


@pytest.fixture(scope="session")
def intro():
    return named_example("intro-s3-f7")


@pytest.fixture(scope="session")
def ex21():
    return named_example("ex21-s4-f3")


# acceptance criteria: one summary line each -------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.outcome == "passed" else "FAIL"
        if _CRITERIA.get(number, ("PASS",))[0] == "PASS":
            _CRITERIA[number] = (status, text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, text = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}: {text}")
