import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "fixed",
    derandomize=True,
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fixed")

RNG_SEED = 20240611

_acceptance_lines = []


@pytest.fixture
def rng_seed():
    return RNG_SEED


@pytest.fixture
def timed():
    """Context-free stopwatch: ``with timed(limit): ...`` asserts runtime."""

    class Timer:
        def __init__(self, limit):
            self.limit = limit

        def __enter__(self):
            self.t0 = time.perf_counter()
            return self

        def __exit__(self, *exc):
            self.elapsed = time.perf_counter() - self.t0
            if exc[0] is None:
                assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"

    return Timer


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        num, label = marker.args
        if "[" in item.name:
            label += " " + item.name[item.name.index("["):]
        status = "PASS" if rep.outcome == "passed" else "FAIL"
        _acceptance_lines.append((num, item.name, f"criterion {num:>2} {status}  {label}  ({rep.duration:.2f}s)"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(_acceptance_lines):
        terminalreporter.write_line(line)
