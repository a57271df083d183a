import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def criterion(request):
    """Record one acceptance line: criterion(label, passed, detail)."""

    def record(label, passed, detail=""):
        request.node.user_properties.append(("criterion", (label, bool(passed), detail)))
        return passed

    return record


def _order(line):
    label = line.split("  ")[1]
    m = re.match(r"C(\d+)(.*)", label)
    return (int(m.group(1)), m.group(2)) if m else (10**6, label)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            for name, value in rep.user_properties:
                if name == "criterion":
                    label, ok, detail = value
                    lines.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=_order):
            terminalreporter.write_line(line)
