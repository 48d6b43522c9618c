import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_traceless(rng, n=3, scale=1.0):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    X -= np.trace(X) / n * np.eye(n)
    return scale * X / np.linalg.norm(X, 2)


# acceptance reporting: one PASS/FAIL line per criterion in the terminal summary

ACCEPTANCE: dict = {}
SUITE_LIMIT_S = 300.0


@pytest.fixture
def criterion(request):
    def record(number, ok, detail=""):
        ACCEPTANCE.setdefault(number, []).append((request.node.name, bool(ok), detail))
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        return bool(ok)

    return record


def pytest_sessionstart(session):
    session.config._nullholo_t0 = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    elapsed = time.perf_counter() - config._nullholo_t0
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        fails = [f"{name}: {detail}" for name, ok, detail in parts if not ok]
        line = f"criterion {n}: {'FAIL' if fails else 'PASS'}"
        tr.write_line(line + (f" ({'; '.join(fails)})" if fails else ""))
    tr.write_line(f"session runtime {elapsed:.1f} s (suite limit {SUITE_LIMIT_S:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    if ACCEPTANCE and time.perf_counter() - session.config._nullholo_t0 > SUITE_LIMIT_S and exitstatus == 0:
        session.exitstatus = 1
