import numpy as np
import pytest

from lepbec.dispersion import DispersionRelation


@pytest.fixture
def disp3():
    return DispersionRelation.power_law(2.0, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, (ok, detail) in sorted(mod.RESULTS.items(), key=lambda kv: int(kv[0].split()[0][1:])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
