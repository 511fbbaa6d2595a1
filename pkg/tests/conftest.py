import sys

import numpy as np
import pytest

from oscinv import OscParams

UNDER_CASE = dict(params=OscParams(1.0, 0.1), u0=[1.5], v0=[-2.5827], dt=0.3, n_steps=60)
OVER_CASE = dict(params=OscParams(1.0, 1.1), u0=[-1.75], v0=[-3.99], dt=0.2, n_steps=40)
CRIT_CASE = dict(params=OscParams(1.0, 1.0), u0=[-1.58], v0=[-3.99], dt=0.2, n_steps=40)


@pytest.fixture
def rng():
    return np.random.default_rng(20231019)


@pytest.fixture(params=["under", "over", "crit"])
def regime_case(request):
    return {"under": UNDER_CASE, "over": OVER_CASE, "crit": CRIT_CASE}[request.param]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
