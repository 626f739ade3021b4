import pytest


@pytest.fixture
def criterion(record_property):
    """Label an acceptance test and attach a one-line measurement summary."""
    def record(label, detail=""):
        record_property("criterion", label)
        record_property("detail", detail)
    return record


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", []))
            if "criterion" in props and rep.when in ("call", "setup"):
                lines.append((props["criterion"], outcome.upper(), props.get("detail", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, detail in sorted(lines, key=lambda t: int(t[0].split()[0])):
        status = {"PASSED": "PASS", "FAILED": "FAIL", "SKIPPED": "SKIP"}[outcome]
        terminalreporter.write_line(f"{status}  {label}" + (f"  [{detail}]" if detail else ""))
