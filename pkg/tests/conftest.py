import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lattice_llt import LatticePmf  # noqa: E402


@pytest.fixture
def coin():
    return LatticePmf(0.0, 1.0, {0: 0.5, 1: 0.5})


@pytest.fixture
def three():
    return LatticePmf(0.0, 1.0, {0: 0.5, 1: 0.3, 2: 0.2})


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], "PASS" if rep.passed else "FAIL", props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for crit, verdict, detail in sorted(lines, key=lambda t: t[0]):
            terminalreporter.write_line(f"{verdict}  {crit}  {detail}")
