import os

import pytest
from hypothesis import HealthCheck, settings

from tlk.finite_model import enumerate_models
from tlk.logic_ast import Signature

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.register_profile("ci", deadline=None, max_examples=500, derandomize=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EMPTY = Signature()
UNARY_F = Signature(functions={"f": 1})


@pytest.fixture(scope="session")
def models_by_size():
    """Cache of every model of the two standard signatures, keyed by (sig, n)."""
    cache = {}

    def get(sig, n):
        key = (sig, n)
        if key not in cache:
            cache[key] = list(enumerate_models(sig, n))
        return cache[key]

    return get


_CRITERIA: dict = {}


class _Criterion:
    def __init__(self, number: int, title: str, limit_s: float | None):
        self.number, self.title, self.limit_s = number, title, limit_s
        self.details: list = []

    def note(self, text: str):
        self.details.append(text)


@pytest.fixture
def criterion(request):
    """Time one acceptance criterion and record a PASS/FAIL line for the summary."""
    import time

    started = {}

    def begin(number: int, title: str, limit_s: float | None = None) -> _Criterion:
        c = _Criterion(number, title, limit_s)
        started["c"], started["t"] = c, time.monotonic()
        return c

    yield begin
    c = started.get("c")
    if c is None:
        return
    elapsed = time.monotonic() - started["t"]
    call = getattr(request.node, "rep_call", None)
    ok = call is not None and call.passed
    within = c.limit_s is None or elapsed <= c.limit_s
    limit = "" if c.limit_s is None else f" limit {c.limit_s:.0f}s"
    detail = "; ".join(c.details)
    line = (f"criterion {c.number:>2}: {'PASS' if ok and within else 'FAIL'}  {c.title}"
            f"  [{elapsed:.1f}s{limit}]" + (f"  {detail}" if detail else ""))
    _CRITERIA[c.number] = line
    print("\n" + line)
    if ok and not within:
        pytest.fail(f"criterion {c.number} took {elapsed:.1f}s, over its {c.limit_s:.0f}s limit")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
